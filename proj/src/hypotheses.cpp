#include "wold/hypotheses.hpp"

#include <algorithm>
#include <cmath>

namespace wold {

namespace {

void require_shared_lattice(const std::vector<StructuredOperator>& tuple) {
    if (tuple.empty()) fail("BadOperator", "empty operator tuple");
    for (const auto& op : tuple)
        if (!(op.lattice() == tuple[0].lattice()))
            fail("BadOperator", "tuple operators must share one lattice");
}

// seq concatenated with its reversed adjoint: the projection X X* for an
// isometric word X (exact on basis vectors for the built-in operator algebra).
OpSequence range_projection_word(const OpSequence& seq) {
    OpSequence word = seq;
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
        OpFactor f = *it;
        f.adjoint = !f.adjoint;
        word.push_back(f);
    }
    return word;
}

// max over window basis points of ||X X* e_p - Y Y* e_p||.
double projection_deviation(const OpSequence& x, const OpSequence& y, const Window& w) {
    OpSequence px = range_projection_word(x);
    OpSequence py = range_projection_word(y);
    auto pts = w.points();
    double worst = 0.0;
#pragma omp parallel for schedule(dynamic, 64) reduction(max : worst)
    for (long long k = 0; k < static_cast<long long>(pts.size()); ++k) {
        SparseVector b = SparseVector::basis(pts[static_cast<size_t>(k)]);
        SparseVector d = apply_sequence(px, b).add_scaled(apply_sequence(py, b), cplx(-1.0, 0.0));
        worst = std::max(worst, d.norm());
    }
    return worst;
}

// Picks the worst range-gap witness: a basis vector of one range far from the
// other range's span.
void record_witness(PairSummary& summary, const SubspaceBasis& ra, const SubspaceBasis& rb,
                    double gap, const std::string& condition) {
    if (summary.has_witness && summary.witness_gap >= gap) return;
    const SubspaceBasis* from = &ra;
    const SubspaceBasis* onto = &rb;
    if (rb.dim() > ra.dim()) std::swap(from, onto);
    Projector p(*onto);
    double best = -1.0;
    const SparseVector* witness = nullptr;
    for (const auto& v : from->vectors) {
        double r = p.residual_norm(v);
        if (r > best) {
            best = r;
            witness = &v;
        }
    }
    if (!witness) return;
    summary.has_witness = true;
    summary.witness = *witness;
    summary.witness_gap = best;
    summary.witness_condition = condition;
}

} // namespace

HypothesisReport check_equal_range(const std::vector<StructuredOperator>& tuple, int cap,
                                   const Window& w, double tol) {
    if (cap < 1) fail("BadArgument", "power cap must be >= 1");
    require_shared_lattice(tuple);

    HypothesisReport report;
    report.cap = cap;
    report.tol = tol;
    report.window = w;

    const int n = static_cast<int>(tuple.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            PairSummary summary;
            summary.i = i;
            summary.j = j;
            for (int mi = 1; mi <= cap; ++mi)
                for (int mj = 1; mj <= cap; ++mj) {
                    PairPowerCheck c;
                    c.i = i;
                    c.j = j;
                    c.mi = mi;
                    c.mj = mj;

                    OpSequence plain_x = {fwd(tuple[i], mi), fwd(tuple[j], mj)};
                    OpSequence plain_y = {fwd(tuple[j], mj), fwd(tuple[i], mi)};
                    SubspaceBasis rx = range_of_sequence(plain_x, w, tol);
                    SubspaceBasis ry = range_of_sequence(plain_y, w, tol);
                    c.plain_gap = principal_angle_gap(rx, ry);
                    c.plain_matdev = projection_deviation(plain_x, plain_y, w);
                    c.plain_pass = c.plain_gap <= tol;
                    c.plain_routes_agree =
                        c.plain_pass == (c.plain_matdev <= report.coherence_constant * tol);
                    if (!c.plain_pass) record_witness(summary, rx, ry, c.plain_gap, "plain");

                    OpSequence star_x = {adj(tuple[i], mi), fwd(tuple[j], mj)};
                    OpSequence star_y = {fwd(tuple[j], mj), adj(tuple[i], mi)};
                    SubspaceBasis sx = range_of_sequence(star_x, w, tol);
                    SubspaceBasis sy = range_of_sequence(star_y, w, tol);
                    c.starred_gap = principal_angle_gap(sx, sy);
                    c.starred_matdev = projection_deviation(star_x, star_y, w);
                    c.starred_pass = c.starred_gap <= tol;
                    c.starred_routes_agree =
                        c.starred_pass == (c.starred_matdev <= report.coherence_constant * tol);
                    if (!c.starred_pass) record_witness(summary, sx, sy, c.starred_gap, "starred");

                    summary.plain_pass = summary.plain_pass && c.plain_pass;
                    summary.starred_pass = summary.starred_pass && c.starred_pass;
                    summary.worst_plain_gap = std::max(summary.worst_plain_gap, c.plain_gap);
                    summary.worst_starred_gap = std::max(summary.worst_starred_gap, c.starred_gap);
                    if (!c.plain_routes_agree || !c.starred_routes_agree)
                        report.warnings.push_back(
                            "RoutesDisagree: pair (" + std::to_string(i) + "," + std::to_string(j) +
                            ") powers (" + std::to_string(mi) + "," + std::to_string(mj) + ")");
                    report.checks.push_back(std::move(c));
                }
            report.plain_pass = report.plain_pass && summary.plain_pass;
            report.starred_pass = report.starred_pass && summary.starred_pass;
            report.worst_gap = std::max(
                {report.worst_gap, summary.worst_plain_gap, summary.worst_starred_gap});
            report.pairs.push_back(std::move(summary));
        }

    CommutationReport comm = classify_commutation(tuple, w, tol);
    report.pair_flags = std::move(comm.pairs);
    report.flags = comm.flags;
    return report;
}

std::vector<StarEquivalence> check_star_equivalence(const std::vector<StructuredOperator>& tuple,
                                                    int cap, const Window& w, double tol,
                                                    const HypothesisReport& plain) {
    if (!plain.plain_pass)
        fail("PreconditionUnverified",
             "check_star_equivalence needs the plain equal-range condition verified Pass");
    require_shared_lattice(tuple);

    std::vector<StarEquivalence> out;
    const int n = static_cast<int>(tuple.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            StarEquivalence eq;
            eq.i = i;
            eq.j = j;
            eq.star_on_first_pass = true;
            eq.star_on_second_pass = true;
            for (int mi = 1; mi <= cap; ++mi)
                for (int mj = 1; mj <= cap; ++mj) {
                    SubspaceBasis a1 =
                        range_of_sequence({adj(tuple[i], mi), fwd(tuple[j], mj)}, w, tol);
                    SubspaceBasis b1 =
                        range_of_sequence({fwd(tuple[j], mj), adj(tuple[i], mi)}, w, tol);
                    if (principal_angle_gap(a1, b1) > tol) eq.star_on_first_pass = false;

                    SubspaceBasis a2 =
                        range_of_sequence({adj(tuple[j], mj), fwd(tuple[i], mi)}, w, tol);
                    SubspaceBasis b2 =
                        range_of_sequence({fwd(tuple[i], mi), adj(tuple[j], mj)}, w, tol);
                    if (principal_angle_gap(a2, b2) > tol) eq.star_on_second_pass = false;
                }
            eq.agree = eq.star_on_first_pass == eq.star_on_second_pass;
            out.push_back(eq);
        }
    return out;
}

CommutationReport classify_commutation(const std::vector<StructuredOperator>& tuple,
                                       const Window& w, double tol) {
    require_shared_lattice(tuple);
    CommutationReport report;
    report.flags.commuting = true;
    report.flags.doubly_commuting = true;

    auto column_dev = [&](const OpSequence& x, const OpSequence& y) {
        auto pts = w.points();
        double worst = 0.0;
#pragma omp parallel for schedule(dynamic, 64) reduction(max : worst)
        for (long long k = 0; k < static_cast<long long>(pts.size()); ++k) {
            SparseVector b = SparseVector::basis(pts[static_cast<size_t>(k)]);
            SparseVector d =
                apply_sequence(x, b).add_scaled(apply_sequence(y, b), cplx(-1.0, 0.0));
            worst = std::max(worst, d.norm());
        }
        return worst;
    };

    const int n = static_cast<int>(tuple.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            PairCommutation pc;
            pc.i = i;
            pc.j = j;
            pc.commutator_dev = column_dev({fwd(tuple[i]), fwd(tuple[j])},
                                           {fwd(tuple[j]), fwd(tuple[i])});
            pc.star_commutator_dev = column_dev({adj(tuple[i]), fwd(tuple[j])},
                                                {fwd(tuple[j]), adj(tuple[i])});
            pc.commuting = pc.commutator_dev <= tol;
            pc.doubly_commuting = pc.commuting && pc.star_commutator_dev <= tol;
            report.flags.commuting = report.flags.commuting && pc.commuting;
            report.flags.doubly_commuting = report.flags.doubly_commuting && pc.doubly_commuting;
            report.pairs.push_back(pc);
        }
    return report;
}

} // namespace wold
