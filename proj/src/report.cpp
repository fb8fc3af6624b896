#include "wold/report.hpp"

#include <chrono>
#include <sstream>

#include "wold/json_writer.hpp"

namespace wold {

namespace {

void write_point(JsonWriter& w, const LatticePoint& p) {
    w.begin_array();
    w.value(p.block);
    for (int c : p.coords) w.value(c);
    w.end_array();
}

void write_vector(JsonWriter& w, const SparseVector& v) {
    w.begin_array();
    for (const auto& [p, a] : v.entries()) {
        w.begin_array();
        write_point(w, p);
        w.begin_array();
        w.value(a.real());
        w.value(a.imag());
        w.end_array();
        w.end_array();
    }
    w.end_array();
}

void write_hypotheses(JsonWriter& w, const HypothesisReport& hyp,
                      const std::vector<StarEquivalence>* star_eq) {
    w.begin_object("hypotheses");
    w.kv("cap", hyp.cap);
    w.kv("plain_pass", hyp.plain_pass);
    w.kv("starred_pass", hyp.starred_pass);
    w.kv("pass", hyp.pass());
    w.kv("worst_gap", hyp.worst_gap);
    w.kv("coherence_constant", hyp.coherence_constant);
    w.kv("commuting", hyp.flags.commuting);
    w.kv("doubly_commuting", hyp.flags.doubly_commuting);

    w.begin_array("pairs");
    for (const auto& p : hyp.pairs) {
        w.begin_object();
        w.kv("i", p.i);
        w.kv("j", p.j);
        w.kv("plain_pass", p.plain_pass);
        w.kv("starred_pass", p.starred_pass);
        w.kv("worst_plain_gap", p.worst_plain_gap);
        w.kv("worst_starred_gap", p.worst_starred_gap);
        if (p.has_witness) {
            w.begin_object("witness");
            w.kv("condition", p.witness_condition);
            w.kv("gap", p.witness_gap);
            w.key("vector");
            write_vector(w, p.witness);
            w.end_object();
        }
        w.end_object();
    }
    w.end_array();

    w.begin_array("checks");
    for (const auto& c : hyp.checks) {
        w.begin_object();
        w.kv("i", c.i);
        w.kv("j", c.j);
        w.kv("mi", c.mi);
        w.kv("mj", c.mj);
        w.kv("plain_gap", c.plain_gap);
        w.kv("starred_gap", c.starred_gap);
        w.kv("plain_matdev", c.plain_matdev);
        w.kv("starred_matdev", c.starred_matdev);
        w.kv("plain_pass", c.plain_pass);
        w.kv("starred_pass", c.starred_pass);
        w.end_object();
    }
    w.end_array();

    w.begin_array("commutation_pairs");
    for (const auto& pc : hyp.pair_flags) {
        w.begin_object();
        w.kv("i", pc.i);
        w.kv("j", pc.j);
        w.kv("commutator_dev", pc.commutator_dev);
        w.kv("star_commutator_dev", pc.star_commutator_dev);
        w.kv("commuting", pc.commuting);
        w.kv("doubly_commuting", pc.doubly_commuting);
        w.end_object();
    }
    w.end_array();

    if (star_eq) {
        w.begin_array("star_equivalence");
        for (const auto& e : *star_eq) {
            w.begin_object();
            w.kv("i", e.i);
            w.kv("j", e.j);
            w.kv("star_on_first_pass", e.star_on_first_pass);
            w.kv("star_on_second_pass", e.star_on_second_pass);
            w.kv("agree", e.agree);
            w.end_object();
        }
        w.end_array();
    }
    w.end_object();
}

void write_decomposition(JsonWriter& w, const TupleDecomposition& d, bool interior_only) {
    w.begin_object("decomposition");
    w.kv("n", d.n);
    w.kv("max_power", d.max_power);
    w.kv("completeness_residual", d.completeness_residual);
    w.kv("orthogonality_worst", d.orthogonality_worst);
    w.kv("interior_cardinality", static_cast<long long>(d.interior_cardinality));
    w.kv("interior_dim_total", static_cast<long long>(d.interior_dim_total));
    w.kv("hypotheses_passed", d.hypotheses_passed);
    w.begin_array("blocks");
    for (const auto& b : d.blocks) {
        w.begin_object();
        w.kv("mask", b.mask);
        w.begin_array("members");
        for (int m : b.members) w.value(m);
        w.end_array();
        if (!interior_only) w.kv("dim", b.basis.dim());
        w.kv("interior_dim", b.interior_dim);
        w.begin_array("classes");
        for (auto c : b.classes) w.value(to_string(c));
        w.end_array();
        w.kv("cross_check_gap", b.cross_check_gap);
        w.kv("stabilized", b.stabilized);
        w.end_object();
    }
    w.end_array();
    w.end_object();
}

void write_verification(JsonWriter& w, const ReducingReport& red, const WanderingReport& wan) {
    w.begin_object("verification");
    w.kv("reducing_worst", red.worst);
    w.begin_array("reducing");
    for (const auto& c : red.checks) {
        w.begin_object();
        w.kv("mask", c.mask);
        w.kv("op", c.op);
        w.kv("residual", c.residual);
        w.end_object();
    }
    w.end_array();
    w.begin_object("wandering");
    w.kv("flagged", wan.hypotheses_flagged);
    w.kv("worst_invariance", wan.worst_invariance);
    w.kv("worst_complement", wan.worst_complement);
    w.kv("worst_exchange", wan.worst_exchange);
    w.begin_array("checks");
    for (const auto& c : wan.checks) {
        w.begin_object();
        w.kv("identity", c.identity);
        w.kv("mask", c.mask);
        w.kv("op", c.op);
        w.kv("gap", c.gap);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    w.end_object();
}

std::string render_text(const TupleSpec& spec, const HypothesisReport& hyp,
                        const TupleDecomposition* d, const ReducingReport* red,
                        const WanderingReport* wan, const std::vector<std::string>& warnings) {
    std::ostringstream os;
    os.precision(3);
    os << "operators: ";
    for (size_t i = 0; i < spec.operator_names.size(); ++i)
        os << (i ? ", " : "") << spec.operator_names[i];
    os << "\n";
    os << "hypotheses: plain " << (hyp.plain_pass ? "PASS" : "FAIL") << ", starred "
       << (hyp.starred_pass ? "PASS" : "FAIL") << " (worst gap " << hyp.worst_gap << ", cap "
       << hyp.cap << ")\n";
    os << "commutation: " << (hyp.flags.commuting ? "commuting" : "non-commuting")
       << (hyp.flags.doubly_commuting ? ", doubly commuting" : "") << "\n";
    if (d) {
        os << "blocks (mask: dim / interior dim / classes / cross-check gap):\n";
        for (const auto& b : d->blocks) {
            os << "  {";
            for (size_t k = 0; k < b.members.size(); ++k)
                os << (k ? "," : "") << b.members[k] + 1;
            os << "}: " << b.basis.dim() << " / " << b.interior_dim << " / ";
            if (b.classes.empty())
                os << "-";
            else
                for (size_t k = 0; k < b.classes.size(); ++k)
                    os << (k ? "," : "") << to_string(b.classes[k]);
            os << " / " << b.cross_check_gap << "\n";
        }
        os << "completeness residual " << d->completeness_residual << ", orthogonality worst "
           << d->orthogonality_worst << ", interior " << d->interior_dim_total << "/"
           << d->interior_cardinality << "\n";
    }
    if (red) os << "reducing worst residual " << red->worst << "\n";
    if (wan)
        os << "wandering identities: invariance " << wan->worst_invariance << ", complement "
           << wan->worst_complement << ", exchange " << wan->worst_exchange
           << (wan->hypotheses_flagged ? " (hypotheses not satisfied)" : "") << "\n";
    for (const auto& msg : warnings) os << "warning: " << msg << "\n";
    return std::move(os).str();
}

} // namespace

RunResult run_spec(const TupleSpec& spec, const RunOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();

    TupleSpec effective = spec;
    if (opts.max_power_override > 0) effective.max_power = opts.max_power_override;
    if (opts.tol_override > 0) effective.tol = opts.tol_override;
    Window w = spec_window(effective, opts.depth_override);
    if (opts.depth_override > 0)
        effective.depths = w.depths;

    HypothesisReport hyp =
        check_equal_range(effective.operators, effective.cap, w, effective.tol);

    std::optional<std::vector<StarEquivalence>> star_eq;
    if (hyp.plain_pass)
        star_eq = check_star_equivalence(effective.operators, effective.cap, w, effective.tol,
                                         hyp);

    std::optional<TupleDecomposition> decomp;
    std::optional<ReducingReport> reducing;
    std::optional<WanderingReport> wandering;
    if (opts.action != "check") {
        decomp = wold_tuple(effective.operators, w, effective.max_power, effective.tol, &hyp);
        reducing = verify_reducing(effective.operators, *decomp, w, effective.tol);
        wandering = verify_wandering_identities(effective.operators, w, effective.tol, &hyp);
    }

    std::vector<std::string> warnings = hyp.warnings;
    if (decomp)
        warnings.insert(warnings.end(), decomp->warnings.begin(), decomp->warnings.end());
    if (wandering)
        warnings.insert(warnings.end(), wandering->warnings.begin(), wandering->warnings.end());

    RunResult result;
    result.exit_code = hyp.pass() ? 0 : 2;

    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();

    if (opts.format == "text") {
        result.report = render_text(effective, hyp, decomp ? &*decomp : nullptr,
                                    reducing ? &*reducing : nullptr,
                                    wandering ? &*wandering : nullptr, warnings);
        return result;
    }

    JsonWriter w2;
    w2.begin_object();
    w2.kv("tool", "wold");
    w2.kv("action", opts.action);
    w2.kv("exit_code", result.exit_code);
    w2.key("spec");
    write_spec(w2, effective);
    w2.begin_object("parameters");
    w2.kv("cap", effective.cap);
    w2.kv("max_power", effective.max_power);
    w2.kv("tol", effective.tol);
    w2.kv("interior_only", opts.interior_only);
    w2.end_object();
    write_hypotheses(w2, hyp, star_eq ? &*star_eq : nullptr);
    // `decompose` reports the block structure, `verify` focuses on the
    // identity suites; both run the whole pipeline.
    if (decomp && opts.action != "verify") write_decomposition(w2, *decomp, opts.interior_only);
    if (reducing && wandering) write_verification(w2, *reducing, *wandering);
    w2.begin_array("warnings");
    for (const auto& msg : warnings) w2.value(msg);
    w2.end_array();
    if (opts.with_timing) w2.kv("timing_ms", ms);
    w2.end_object();
    result.report = std::move(w2).str();
    result.report += "\n";
    return result;
}

} // namespace wold
