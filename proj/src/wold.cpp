#include "wold/wold.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <optional>

namespace wold {

const char* to_string(OpClass c) {
    switch (c) {
        case OpClass::Shift: return "shift";
        case OpClass::Unitary: return "unitary";
        case OpClass::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

OpSequence adjoint_word(const OpSequence& s) {
    OpSequence r(s.rbegin(), s.rend());
    for (auto& f : r) f.adjoint = !f.adjoint;
    return r;
}

std::vector<const StructuredOperator*> select_ops(const std::vector<StructuredOperator>& tuple,
                                                  unsigned mask, bool inside) {
    std::vector<const StructuredOperator*> out;
    for (size_t i = 0; i < tuple.size(); ++i)
        if ((((mask >> i) & 1u) != 0u) == inside) out.push_back(&tuple[i]);
    return out;
}

std::vector<int> member_indices(unsigned mask, int n) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if ((mask >> i) & 1u) out.push_back(i);
    return out;
}

// Largest per-axis single-application displacement summed over the tuple.
int max_axis_total_disp(const std::vector<StructuredOperator>& tuple) {
    std::map<std::pair<int, int>, int> total;
    for (const auto& op : tuple)
        for (const auto& [k, v] : op.displacement()) total[k] += v;
    int worst = 0;
    for (const auto& [k, v] : total) worst = std::max(worst, v);
    return worst;
}

// All q in [0..t]^d with max coordinate exactly t, lexicographic.
void for_each_shell(int d, int t, const std::function<void(const std::vector<int>&)>& fn) {
    if (d == 0) return;
    std::vector<int> q(static_cast<size_t>(d), 0);
    while (true) {
        if (*std::max_element(q.begin(), q.end()) == t) fn(q);
        int k = d - 1;
        while (k >= 0) {
            if (++q[static_cast<size_t>(k)] <= t) break;
            q[static_cast<size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
}

OpSequence word_for(const std::vector<const StructuredOperator*>& ops,
                    const std::vector<int>& powers) {
    OpSequence seq;
    for (size_t k = 0; k < ops.size(); ++k)
        if (powers[k] > 0) seq.push_back(fwd(*ops[k], powers[k]));
    return seq;
}

struct ChainStats {
    bool stabilized = true;
    bool extended = false;
    int shells = 0;
    double last_gap = 0.0;
    double prev_gap = 0.0;
};

// Monotone intersection chain C_t = C_{t-1} meet (all words of shell t).
// Monomial bases are filtered through the exact range-projection test
// X X* c = c (plus an optional preimage predicate for kernel-image chains);
// generic bases fall back to explicit shell subspaces.
SubspaceBasis intersect_chain(SubspaceBasis C, const std::vector<const StructuredOperator*>& ops,
                              int max_power, int shell_cap,
                              const std::function<bool(const SparseVector&)>& preimage_ok,
                              const SubspaceBasis* generic_source, ChainStats& stats) {
    stats = ChainStats{};
    if (ops.empty() || C.empty()) return C;
    const double tol = C.tol;

    for (int t = 1; t <= shell_cap; ++t) {
        stats.shells = t;
        const int dim_before = C.dim();
        SubspaceBasis prev_generic;
        const bool mono = C.monomial();
        if (!mono) prev_generic = C;

        for_each_shell(static_cast<int>(ops.size()), t, [&](const std::vector<int>& q) {
            if (C.empty()) return;
            OpSequence word = word_for(ops, q);
            if (C.monomial()) {
                OpSequence wadj = adjoint_word(word);
                const long long m = C.dim();
                std::vector<char> keep(static_cast<size_t>(m), 0);
#pragma omp parallel for schedule(dynamic, 64)
                for (long long i = 0; i < m; ++i) {
                    const SparseVector& c = C.vectors[static_cast<size_t>(i)];
                    SparseVector pre = apply_sequence(wadj, c);
                    bool ok = !pre.empty();
                    if (ok && preimage_ok) ok = preimage_ok(pre);
                    if (ok) {
                        SparseVector back = apply_sequence(word, pre);
                        ok = back.add_scaled(c, cplx(-1.0, 0.0)).norm() <= tol;
                    }
                    keep[static_cast<size_t>(i)] = ok ? 1 : 0;
                }
                std::vector<SparseVector> kept;
                kept.reserve(static_cast<size_t>(m));
                for (long long i = 0; i < m; ++i)
                    if (keep[static_cast<size_t>(i)]) kept.push_back(std::move(C.vectors[static_cast<size_t>(i)]));
                C.vectors = std::move(kept);
            } else {
                SubspaceBasis shell_space;
                if (generic_source) {
                    std::vector<SparseVector> kept;
                    for (const auto& v : generic_source->vectors) {
                        SparseVector img = apply_sequence(word, v);
                        if (!img.empty() && img.supported_in(C.ambient)) kept.push_back(std::move(img));
                    }
                    shell_space = orthonormalize(C.ambient, kept, tol);
                } else {
                    shell_space = range_of_sequence(word, C.ambient, tol);
                }
                C = intersect(C, shell_space);
            }
        });

        double gap;
        if (C.empty())
            gap = dim_before == 0 ? 0.0 : 1.0;
        else if (mono)
            gap = C.dim() == dim_before ? 0.0 : 1.0; // removals only
        else
            gap = principal_angle_gap(C, prev_generic);

        stats.prev_gap = stats.last_gap;
        stats.last_gap = gap;
        if (C.empty() || gap <= tol) {
            stats.stabilized = true;
            break;
        }
        stats.stabilized = false;
    }
    stats.extended = stats.shells > max_power;
    return C;
}

// Per-block coordinate bounding boxes of a vector family.
using BlockBoxes = std::map<int, std::vector<std::pair<int, int>>>;

BlockBoxes bounding_boxes(const std::vector<SparseVector>& vs, const Lattice& lat) {
    BlockBoxes boxes;
    for (const auto& v : vs)
        for (const auto& [p, a] : v.entries()) {
            auto it = boxes.find(p.block);
            if (it == boxes.end()) {
                std::vector<std::pair<int, int>> init;
                for (size_t ax = 0; ax < p.coords.size(); ++ax)
                    init.emplace_back(p.coords[ax], p.coords[ax]);
                boxes.emplace(p.block, std::move(init));
            } else {
                for (size_t ax = 0; ax < p.coords.size(); ++ax) {
                    it->second[ax].first = std::min(it->second[ax].first, p.coords[ax]);
                    it->second[ax].second = std::max(it->second[ax].second, p.coords[ax]);
                }
            }
        }
    (void)lat;
    return boxes;
}

// Forward words displace every axis upward, so a shifted source box that
// misses the target range on some axis rules the whole block out.
bool word_feasible(const BlockBoxes& boxes, const std::map<std::pair<int, int>, long long>& disp,
                   const Window& target) {
    for (const auto& [block, axes] : boxes) {
        bool block_ok = true;
        for (size_t ax = 0; ax < axes.size(); ++ax) {
            long long d = 0;
            auto it = disp.find({block, static_cast<int>(ax)});
            if (it != disp.end()) d = it->second;
            auto [lo, hi] = target.axis_bounds(block, static_cast<int>(ax));
            if (axes[ax].first + d > hi || axes[ax].second + d < lo) {
                block_ok = false;
                break;
            }
        }
        if (block_ok) return true;
    }
    return false;
}

std::map<std::pair<int, int>, long long> word_displacement(
    const std::vector<const StructuredOperator*>& ops, const std::vector<int>& powers) {
    std::map<std::pair<int, int>, long long> total;
    for (size_t k = 0; k < ops.size(); ++k)
        for (const auto& [key, v] : ops[k]->displacement())
            total[key] += static_cast<long long>(v) * powers[k];
    return total;
}

// Orthogonal sweep sum over the power grid of the member operators applied to
// `source` (living on an inflated window), restricted to `target`.
SubspaceBasis power_sweep(const std::vector<const StructuredOperator*>& ops,
                          const SubspaceBasis& source, const Window& target, double tol,
                          int max_power, int shell_cap, ChainStats& stats) {
    stats = ChainStats{};
    IncrementalBasis acc(target, tol);
    if (ops.empty() || source.empty()) {
        SubspaceBasis base = restrict_to_window(source, target);
        for (const auto& v : base.vectors) acc.add(v);
        return std::move(acc).take();
    }

    BlockBoxes boxes = bounding_boxes(source.vectors, target.lattice);
    int last_active_shell = -1;
    int final_shell_adds = 0;
    for (int t = 0; t <= shell_cap; ++t) {
        int added = 0;
        auto run_word = [&](const std::vector<int>& q) {
            if (!word_feasible(boxes, word_displacement(ops, q), target)) return;
            OpSequence word = word_for(ops, q);
            std::vector<SparseVector> images = apply_sequence_batch(word, source.vectors);
            for (auto& img : images)
                if (!img.empty() && img.supported_in(target) && acc.add(img)) ++added;
        };
        if (t == 0)
            run_word(std::vector<int>(ops.size(), 0));
        else
            for_each_shell(static_cast<int>(ops.size()), t, run_word);
        if (added > 0) last_active_shell = t;
        if (t == shell_cap) final_shell_adds = added;
    }
    stats.shells = shell_cap;
    stats.extended = last_active_shell > max_power;
    stats.stabilized = final_shell_adds == 0;
    return std::move(acc).take();
}

SubspaceBasis fold_intersect(const std::vector<const SubspaceBasis*>& parts) {
    SubspaceBasis cur = *parts.front();
    for (size_t i = 1; i < parts.size(); ++i) cur = intersect(cur, *parts[i]);
    return cur;
}

std::function<bool(const SparseVector&)> kernel_membership(
    const std::vector<const StructuredOperator*>& lambda_ops, double tol) {
    if (lambda_ops.empty()) return nullptr;
    return [lambda_ops, tol](const SparseVector& v) {
        for (const auto* op : lambda_ops)
            if (apply_adjoint(*op, v).norm() > tol * std::max(1.0, v.norm())) return false;
        return true;
    };
}

struct EngineSetup {
    int n = 0;
    int cap_chain = 0;     // shells for range chains on the user window
    int cap_chain_plus = 0; // shells for kernel-image chains on the inflated window
    int cap_sweep = 0;     // shells for power sweeps
    int max_disp = 1;      // per-axis displacement summed over the tuple
    int step_disp = 1;     // largest single-application displacement of one operator
    int budget = 0;
    Window inflated;
    Window interior;
    std::vector<SubspaceBasis> kernels_plus; // per-operator kernels on the inflated window
};

EngineSetup prepare_engine(const std::vector<StructuredOperator>& tuple, const Window& w,
                           int max_power, double tol, int chain_shell_override) {
    if (max_power < 1) fail("BadArgument", "max_power must be >= 1");
    if (tuple.empty()) fail("BadOperator", "empty operator tuple");
    for (const auto& op : tuple)
        if (!(op.lattice() == tuple[0].lattice()))
            fail("BadOperator", "tuple operators must share one lattice");

    EngineSetup s;
    s.n = static_cast<int>(tuple.size());
    s.max_disp = std::max(1, max_axis_total_disp(tuple));
    for (const auto& op : tuple) s.step_disp = std::max(s.step_disp, op.displacement_bound());
    const int steps = w.max_axis_steps();
    s.cap_chain = chain_shell_override > 0 ? chain_shell_override : std::max(max_power, steps + 1);
    s.cap_sweep = std::max(max_power, steps + 1);
    s.budget = s.cap_sweep * s.max_disp;
    s.inflated = w.inflated(s.budget);
    const int steps_plus = s.inflated.max_axis_steps();
    s.cap_chain_plus =
        chain_shell_override > 0 ? chain_shell_override : std::max(max_power, steps_plus + 1);
    s.interior = w.interior_halfline(s.n * max_power * s.max_disp);
    s.kernels_plus.reserve(tuple.size());
    for (const auto& op : tuple) s.kernels_plus.push_back(kernel_of_adjoint(op, s.inflated, tol));
    return s;
}

struct BlockBuild {
    SubspaceBasis basis;
    double cross_check_gap = 0.0;
    bool stabilized = true;
    bool extended = false;
    std::vector<std::string> warnings;
};

void note_chain(BlockBuild& b, const ChainStats& st, const std::string& what) {
    b.stabilized = b.stabilized && st.stabilized;
    b.extended = b.extended || st.extended;
    if (!st.stabilized)
        b.warnings.push_back("NotStabilized: " + what + " still shrinking after " +
                             std::to_string(st.shells) + " shells (last gaps " +
                             std::to_string(st.prev_gap) + ", " + std::to_string(st.last_gap) +
                             ")");
}

// Independent route: (meet of joint unitary parts over the complement) meet
// (joint shift sweep over the members).
SubspaceBasis oracle_block(const std::vector<StructuredOperator>& tuple, unsigned mask,
                           const Window& w, double tol, const EngineSetup& s, BlockBuild& b) {
    auto members = select_ops(tuple, mask, true);
    auto complement = select_ops(tuple, mask, false);

    SubspaceBasis unitary_meet;
    if (complement.empty()) {
        unitary_meet = window_basis(w, tol);
    } else {
        ChainStats st;
        unitary_meet = intersect_chain(window_basis(w, tol), complement, s.cap_chain, s.cap_chain,
                                       nullptr, nullptr, st);
        note_chain(b, st, "oracle unitary chain");
    }

    SubspaceBasis shift_meet;
    if (members.empty()) {
        shift_meet = window_basis(w, tol);
    } else {
        std::vector<const SubspaceBasis*> parts;
        for (size_t i = 0; i < tuple.size(); ++i)
            if ((mask >> i) & 1u) parts.push_back(&s.kernels_plus[i]);
        SubspaceBasis wl = fold_intersect(parts);
        ChainStats st;
        shift_meet = power_sweep(members, wl, w, tol, s.cap_sweep, s.cap_sweep, st);
        note_chain(b, st, "oracle shift sweep");
    }
    return intersect(unitary_meet, shift_meet);
}

SubspaceBasis eq_formula_block(const std::vector<StructuredOperator>& tuple, unsigned mask,
                               const Window& w, int max_power, double tol, const EngineSetup& s,
                               BlockBuild& b) {
    auto members = select_ops(tuple, mask, true);
    auto complement = select_ops(tuple, mask, false);

    if (mask == 0) {
        ChainStats st;
        SubspaceBasis c = intersect_chain(window_basis(w, tol), complement, max_power, s.cap_chain,
                                          nullptr, nullptr, st);
        note_chain(b, st, "joint range chain");
        return c;
    }

    std::vector<const SubspaceBasis*> parts;
    for (size_t i = 0; i < tuple.size(); ++i)
        if ((mask >> i) & 1u) parts.push_back(&s.kernels_plus[i]);
    SubspaceBasis wl = fold_intersect(parts);

    SubspaceBasis core = wl;
    if (!complement.empty()) {
        ChainStats st;
        core = intersect_chain(std::move(core), complement, max_power, s.cap_chain_plus,
                               kernel_membership(members, tol), &wl, st);
        note_chain(b, st, "wandering core chain");
    }
    ChainStats st;
    SubspaceBasis out = power_sweep(members, core, w, tol, max_power, s.cap_sweep, st);
    note_chain(b, st, "shift sweep");
    return out;
}

std::vector<OpClass> classify_block(const std::vector<StructuredOperator>& tuple,
                                    const SubspaceBasis& basis, const Window& interior,
                                    const std::vector<SubspaceBasis>& op_ranges, int kill_power,
                                    double tol, std::vector<std::string>& warnings,
                                    unsigned mask) {
    std::vector<OpClass> classes;
    if (basis.empty()) return classes;

    std::vector<const SparseVector*> interior_vecs;
    for (const auto& v : basis.vectors)
        if (v.supported_in(interior)) interior_vecs.push_back(&v);

    for (size_t i = 0; i < tuple.size(); ++i) {
        OpClass cls = OpClass::Inconclusive;
        if (!interior_vecs.empty()) {
            bool shift_ok = true;
            for (const auto* v : interior_vecs)
                if (apply_sequence({adj(tuple[i], kill_power)}, *v).norm() > tol) {
                    shift_ok = false;
                    break;
                }
            if (shift_ok) {
                cls = OpClass::Shift;
            } else {
                auto residuals = projection_residuals(basis.vectors, op_ranges[i]);
                bool unitary_ok =
                    std::all_of(residuals.begin(), residuals.end(), [&](double r) { return r <= tol; });
                if (unitary_ok) cls = OpClass::Unitary;
            }
        }
        if (cls == OpClass::Inconclusive)
            warnings.push_back("Inconclusive classification: operator " + std::to_string(i) +
                               " on block mask " + std::to_string(mask));
        classes.push_back(cls);
    }
    return classes;
}

TupleDecomposition assemble(const std::vector<StructuredOperator>& tuple, const Window& w,
                            int max_power, double tol, const EngineSetup& s,
                            std::vector<BlockBuild>&& built, const HypothesisReport* hyp) {
    const int n = static_cast<int>(tuple.size());
    TupleDecomposition d;
    d.n = n;
    d.max_power = max_power;
    d.tol = tol;
    d.window = w;
    d.interior = s.interior;
    d.interior_cardinality = s.interior.cardinality();
    if (d.interior_cardinality == 0)
        d.warnings.push_back("InteriorEmpty: window depth does not exceed the guard margin; "
                             "interior checks are vacuous");

    std::vector<SubspaceBasis> op_ranges;
    op_ranges.reserve(tuple.size());
    for (const auto& op : tuple) op_ranges.push_back(range_on_window(op, 1, w, tol));
    const int kill_power = w.max_axis_steps() + 1;
    // The adjoint-power and range-coverage tests are exact on the window, so
    // classification only needs to stand clear of one application step.
    const Window class_interior = w.interior_halfline(s.step_disp);

    d.blocks.resize(built.size());
    for (unsigned mask = 0; mask < built.size(); ++mask) {
        BlockResult blk;
        blk.mask = mask;
        blk.members = member_indices(mask, n);
        blk.basis = std::move(built[mask].basis);
        blk.cross_check_gap = built[mask].cross_check_gap;
        blk.stabilized = built[mask].stabilized;
        blk.warnings = std::move(built[mask].warnings);
        blk.interior_dim = restrict_to_window(blk.basis, s.interior).dim();
        blk.classes = classify_block(tuple, blk.basis, class_interior, op_ranges, kill_power, tol,
                                     blk.warnings, mask);
        d.interior_dim_total += blk.interior_dim;
        d.blocks[mask] = std::move(blk);
    }

    for (size_t a = 0; a < d.blocks.size(); ++a)
        for (size_t b = a + 1; b < d.blocks.size(); ++b)
            d.orthogonality_worst = std::max(
                d.orthogonality_worst, max_abs_cross_inner(d.blocks[a].basis, d.blocks[b].basis));

    // Worst distance from an interior basis vector to the direct sum of the
    // blocks.
    {
        std::vector<Projector> projectors;
        projectors.reserve(d.blocks.size());
        for (const auto& blk : d.blocks) projectors.emplace_back(blk.basis);
        auto pts = s.interior.points();
        double worst = 0.0;
#pragma omp parallel for schedule(dynamic, 64) reduction(max : worst)
        for (long long k = 0; k < static_cast<long long>(pts.size()); ++k) {
            SparseVector r = SparseVector::basis(pts[static_cast<size_t>(k)]);
            for (const auto& p : projectors)
                r = r.add_scaled(p.project(SparseVector::basis(pts[static_cast<size_t>(k)])),
                                 cplx(-1.0, 0.0));
            worst = std::max(worst, r.norm());
        }
        d.completeness_residual = worst;
    }

    for (const auto& blk : d.blocks)
        for (const auto& wmsg : blk.warnings)
            d.warnings.push_back("block " + std::to_string(blk.mask) + ": " + wmsg);

    d.hypotheses_known = hyp != nullptr;
    d.hypotheses_passed = hyp != nullptr && hyp->pass();
    if (!d.hypotheses_passed)
        d.warnings.push_back(
            d.hypotheses_known
                ? "hypotheses not satisfied: candidate blocks computed, no completeness claim"
                : "hypotheses not verified: candidate blocks computed, no completeness claim");
    return d;
}

} // namespace

WoldReport wold_single(const StructuredOperator& v, const Window& w, int max_power, double tol,
                       int chain_shell_override) {
    std::vector<StructuredOperator> tuple{v};
    EngineSetup s = prepare_engine(tuple, w, max_power, tol, chain_shell_override);

    WoldReport rep;
    rep.interior = s.interior;

    ChainStats chain_stats;
    rep.unitary_part = intersect_chain(window_basis(w, tol), {&v}, max_power, s.cap_chain, nullptr,
                                       nullptr, chain_stats);

    rep.wandering = kernel_of_adjoint(v, w, tol);
    rep.multiplicity = rep.wandering.dim();

    ChainStats sweep_stats;
    rep.shift_part = power_sweep({&v}, s.kernels_plus[0], w, tol, max_power, s.cap_sweep,
                                 sweep_stats);

    rep.stabilized = chain_stats.stabilized && sweep_stats.stabilized;
    rep.extended_beyond_m = chain_stats.extended || sweep_stats.extended;
    if (!chain_stats.stabilized)
        rep.warnings.push_back("NotStabilized: unitary chain still shrinking after " +
                               std::to_string(chain_stats.shells) + " shells (last gaps " +
                               std::to_string(chain_stats.prev_gap) + ", " +
                               std::to_string(chain_stats.last_gap) + ")");

    double cross = max_abs_cross_inner(rep.unitary_part, rep.shift_part);
    if (cross > 10 * tol)
        rep.warnings.push_back("parts not orthogonal: worst inner product " +
                               std::to_string(cross));

    Projector pu(rep.unitary_part);
    Projector ps(rep.shift_part);
    auto pts = rep.interior.points();
    double worst = 0.0;
#pragma omp parallel for schedule(dynamic, 64) reduction(max : worst)
    for (long long k = 0; k < static_cast<long long>(pts.size()); ++k) {
        SparseVector b = SparseVector::basis(pts[static_cast<size_t>(k)]);
        SparseVector r = b.add_scaled(pu.project(b), cplx(-1.0, 0.0));
        r = r.add_scaled(ps.project(b), cplx(-1.0, 0.0));
        worst = std::max(worst, r.norm());
    }
    rep.residual = worst;
    return rep;
}

TupleDecomposition wold_tuple(const std::vector<StructuredOperator>& tuple, const Window& w,
                              int max_power, double tol, const HypothesisReport* hyp,
                              int chain_shell_override) {
    if (tuple.size() > 6)
        fail("TooManyOperators", "wold_tuple supports at most 6 operators (2^n blocks)");
    EngineSetup s = prepare_engine(tuple, w, max_power, tol, chain_shell_override);

    const unsigned nblocks = 1u << tuple.size();
    std::vector<BlockBuild> built(nblocks);
    std::exception_ptr error;

#pragma omp parallel for schedule(dynamic)
    for (long long m = 0; m < static_cast<long long>(nblocks); ++m) {
        try {
            unsigned mask = static_cast<unsigned>(m);
            BlockBuild& b = built[mask];
            b.basis = eq_formula_block(tuple, mask, w, max_power, tol, s, b);
            SubspaceBasis check = oracle_block(tuple, mask, w, tol, s, b);
            b.cross_check_gap = principal_angle_gap(b.basis, check);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    return assemble(tuple, w, max_power, tol, s, std::move(built), hyp);
}

TupleDecomposition wold_pair(const StructuredOperator& v1, const StructuredOperator& v2,
                             const Window& w, int max_power, double tol,
                             const HypothesisReport* hyp) {
    std::vector<StructuredOperator> tuple{v1, v2};
    EngineSetup s = prepare_engine(tuple, w, max_power, tol, -1);

    const SubspaceBasis& k1 = s.kernels_plus[0];
    const SubspaceBasis& k2 = s.kernels_plus[1];
    std::vector<BlockBuild> built(4);

    // H_uu: joint range chain over both operators.
    {
        ChainStats st;
        built[0].basis = intersect_chain(window_basis(w, tol), {&v1, &v2}, max_power, s.cap_chain,
                                         nullptr, nullptr, st);
        note_chain(built[0], st, "pair unitary chain");
    }
    // H_su: sweep V1 over the V2-stable core of ker V1*.
    {
        ChainStats kc, sc;
        SubspaceBasis core = intersect_chain(k1, {&v2}, max_power, s.cap_chain_plus,
                                             kernel_membership({&v1}, tol), &k1, kc);
        built[1].basis = power_sweep({&v1}, core, w, tol, max_power, s.cap_sweep, sc);
        note_chain(built[1], kc, "pair core chain (first)");
        note_chain(built[1], sc, "pair sweep (first)");
    }
    // H_us: the mirror image.
    {
        ChainStats kc, sc;
        SubspaceBasis core = intersect_chain(k2, {&v1}, max_power, s.cap_chain_plus,
                                             kernel_membership({&v2}, tol), &k2, kc);
        built[2].basis = power_sweep({&v2}, core, w, tol, max_power, s.cap_sweep, sc);
        note_chain(built[2], kc, "pair core chain (second)");
        note_chain(built[2], sc, "pair sweep (second)");
    }
    // H_ss: joint sweep of the joint wandering subspace.
    {
        ChainStats sc;
        SubspaceBasis joint = intersect(k1, k2);
        built[3].basis = power_sweep({&v1, &v2}, joint, w, tol, max_power, s.cap_sweep, sc);
        note_chain(built[3], sc, "pair joint sweep");
    }

    for (unsigned mask = 0; mask < 4; ++mask) {
        SubspaceBasis check = oracle_block(tuple, mask, w, tol, s, built[mask]);
        built[mask].cross_check_gap = principal_angle_gap(built[mask].basis, check);
    }

    return assemble(tuple, w, max_power, tol, s, std::move(built), hyp);
}

ReducingReport verify_reducing(const std::vector<StructuredOperator>& tuple,
                               const TupleDecomposition& decomp, const Window& w, double tol) {
    (void)tol;
    ReducingReport rep;
    int margin = 0;
    for (const auto& op : tuple) margin = std::max(margin, op.displacement_bound());
    Window interior_act = w.shrunk(margin);

    for (const auto& blk : decomp.blocks) {
        Projector p(blk.basis);
        for (size_t i = 0; i < tuple.size(); ++i) {
            double worst = 0.0;
            for (const auto& b : blk.basis.vectors) {
                if (!b.supported_in(interior_act)) continue;
                worst = std::max(worst, p.residual_norm(apply(tuple[i], b)));
                SparseVector adj_img = apply_adjoint(tuple[i], b);
                if (!adj_img.empty()) worst = std::max(worst, p.residual_norm(adj_img));
            }
            rep.checks.push_back({blk.mask, static_cast<int>(i), worst});
            rep.worst = std::max(rep.worst, worst);
        }
    }
    return rep;
}

namespace {

SubspaceBasis image_subspace(const OpSequence& word, const SubspaceBasis& source,
                             const Window& target, double tol) {
    std::vector<SparseVector> kept;
    std::vector<SparseVector> images = apply_sequence_batch(word, source.vectors);
    for (auto& img : images)
        if (!img.empty() && img.supported_in(target)) kept.push_back(std::move(img));
    return orthonormalize(target, kept, tol);
}

// A minus the projection of A onto span(S); the unchecked counterpart of
// complement_within, used where containment may genuinely fail.
SubspaceBasis complement_soft(const SubspaceBasis& A, const SubspaceBasis& S) {
    Projector p(S);
    std::vector<SparseVector> candidates;
    candidates.reserve(A.vectors.size());
    for (const auto& a : A.vectors) candidates.push_back(p.residual(a));
    return orthonormalize(A.ambient, candidates, A.tol);
}

} // namespace

WanderingReport verify_wandering_identities(const std::vector<StructuredOperator>& tuple,
                                            const Window& w, double tol,
                                            const HypothesisReport* hyp) {
    WanderingReport rep;
    rep.hypotheses_flagged = !(hyp != nullptr && hyp->pass());
    if (rep.hypotheses_flagged)
        rep.warnings.push_back(
            "hypotheses not satisfied: identity gaps reported without a pass/fail claim");

    const int n = static_cast<int>(tuple.size());
    if (n == 0) return rep;
    int maxdisp = std::max(1, max_axis_total_disp(tuple));
    const int power_cap = 2; // sampled identity powers
    Window wplus = w.inflated(2 * power_cap * n * maxdisp);

    std::vector<SubspaceBasis> kernels_plus, kernels_w;
    for (const auto& op : tuple) {
        kernels_plus.push_back(kernel_of_adjoint(op, wplus, tol));
        kernels_w.push_back(kernel_of_adjoint(op, w, tol));
    }

    int act_margin = 0;
    for (const auto& op : tuple) act_margin = std::max(act_margin, op.displacement_bound());
    Window interior_act = w.shrunk(act_margin);

    const unsigned nblocks = 1u << n;
    std::vector<SubspaceBasis> wl_plus(nblocks), wl_w(nblocks);
    for (unsigned mask = 1; mask < nblocks; ++mask) {
        std::vector<const SubspaceBasis*> parts_plus, parts_w;
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1u) {
                parts_plus.push_back(&kernels_plus[static_cast<size_t>(i)]);
                parts_w.push_back(&kernels_w[static_cast<size_t>(i)]);
            }
        wl_plus[mask] = fold_intersect(parts_plus);
        wl_w[mask] = fold_intersect(parts_w);
    }

    for (unsigned mask = 1; mask < nblocks; ++mask) {
        for (int j = 0; j < n; ++j) {
            if ((mask >> j) & 1u) continue;

            // (a) W_Lambda reduces V_j.
            {
                Projector p(wl_w[mask]);
                double worst = 0.0;
                for (const auto& b : wl_w[mask].vectors) {
                    if (!b.supported_in(interior_act)) continue;
                    worst = std::max(worst, p.residual_norm(apply(tuple[static_cast<size_t>(j)], b)));
                    SparseVector ai = apply_adjoint(tuple[static_cast<size_t>(j)], b);
                    if (!ai.empty()) worst = std::max(worst, p.residual_norm(ai));
                }
                rep.checks.push_back({"reduces", mask, j, worst});
                rep.worst_invariance = std::max(rep.worst_invariance, worst);
            }

            // (b) W_Lambda minus V_j W_Lambda equals W_Lambda meet W_j.
            {
                SubspaceBasis image =
                    image_subspace({fwd(tuple[static_cast<size_t>(j)])}, wl_plus[mask], w, tol);
                SubspaceBasis lhs = complement_soft(wl_w[mask], image);
                SubspaceBasis rhs = intersect(wl_w[mask], kernels_w[static_cast<size_t>(j)]);
                double gap = principal_angle_gap(lhs, rhs);
                rep.checks.push_back({"complement", mask, j, gap});
                rep.worst_complement = std::max(rep.worst_complement, gap);
            }
        }
    }

    // Power-word exchange identities on sampled powers.
    const std::vector<std::pair<int, int>> samples = {{1, 1}, {2, 1}, {1, 2}};
    for (unsigned mask = 1; mask < nblocks; ++mask) {
        auto members = select_ops(tuple, mask, true);
        for (int j = 0; j < n; ++j) {
            if ((mask >> j) & 1u) continue;
            const StructuredOperator& vj = tuple[static_cast<size_t>(j)];
            for (auto [pj, pk] : samples) {
                // members^pk then V_j^pj against the reversed order, on W_Lambda.
                OpSequence member_word;
                for (const auto* op : members) member_word.push_back(fwd(*op, pk));
                OpSequence lhs_word = member_word;
                lhs_word.insert(lhs_word.begin(), fwd(vj, pj));
                OpSequence rhs_word = member_word;
                rhs_word.push_back(fwd(vj, pj));
                double gap = principal_angle_gap(image_subspace(lhs_word, wl_plus[mask], w, tol),
                                                 image_subspace(rhs_word, wl_plus[mask], w, tol));
                rep.checks.push_back({"exchange-forward", mask, j, gap});
                rep.worst_exchange = std::max(rep.worst_exchange, gap);

                // Starred variant: V_j*^pj members^pk vs members^pk V_j*^pj.
                OpSequence lhs_star = member_word;
                lhs_star.insert(lhs_star.begin(), adj(vj, pj));
                OpSequence rhs_star = member_word;
                rhs_star.push_back(adj(vj, pj));
                double sgap = principal_angle_gap(image_subspace(lhs_star, wl_plus[mask], w, tol),
                                                  image_subspace(rhs_star, wl_plus[mask], w, tol));
                rep.checks.push_back({"exchange-starred", mask, j, sgap});
                rep.worst_exchange = std::max(rep.worst_exchange, sgap);
            }

            // Exchange against the larger wandering subspace W_{Lambda u {j}}.
            unsigned bigger = mask | (1u << j);
            for (auto [pj, pk] : samples) {
                OpSequence member_word;
                for (const auto* op : members) member_word.push_back(fwd(*op, pk));
                // V_members^pk V_j^pj W_bigger vs V_j^pj V_members^pk W_bigger
                OpSequence a_word = member_word;
                a_word.push_back(fwd(vj, pj));
                OpSequence b_word = member_word;
                b_word.insert(b_word.begin(), fwd(vj, pj));
                double gap = principal_angle_gap(image_subspace(a_word, wl_plus[bigger], w, tol),
                                                 image_subspace(b_word, wl_plus[bigger], w, tol));
                rep.checks.push_back({"exchange-joint", bigger, j, gap});
                rep.worst_exchange = std::max(rep.worst_exchange, gap);
            }
        }
    }
    return rep;
}

} // namespace wold
