#include "wold/spec_io.hpp"

#include <cmath>

#include <json.hpp>

#include "wold/json_writer.hpp"

namespace wold {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, const std::string& reason) {
    fail("ParseError", path + ": " + reason);
}

const json& need(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) parse_fail(path + "." + key, "missing field");
    return *it;
}

int need_int(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number_integer()) parse_fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

cplx parse_complex(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        parse_fail(path, "expected a complex number as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

// Weights are accepted when unimodular within 1e-9 and normalized to unit
// modulus before the operator is built.
cplx parse_unimodular(const json& j, const std::string& path) {
    cplx c = parse_complex(j, path);
    double m = std::abs(c);
    if (std::abs(m - 1.0) > 1e-9) parse_fail(path, "weight is not unimodular (|w| != 1)");
    return c / m;
}

WeightRule parse_rule(const json& j, const std::string& path) {
    if (!j.is_object()) parse_fail(path, "expected a weight rule object");
    std::string kind = need(j, "kind", path).get<std::string>();
    if (kind == "constant") {
        return WeightRule::constant(parse_unimodular(need(j, "value", path), path + ".value"));
    }
    if (kind == "periodic") {
        const json& vals = need(j, "values", path);
        if (!vals.is_array() || vals.empty()) parse_fail(path + ".values", "expected a nonempty array");
        std::vector<cplx> out;
        for (size_t i = 0; i < vals.size(); ++i)
            out.push_back(parse_unimodular(vals[i], path + ".values[" + std::to_string(i) + "]"));
        return WeightRule::periodic(std::move(out));
    }
    if (kind == "geometric") {
        long long num = need(j, "num", path).get<long long>();
        long long den = need(j, "den", path).get<long long>();
        if (den <= 0) parse_fail(path + ".den", "denominator must be positive");
        return WeightRule::geometric(num, den);
    }
    parse_fail(path + ".kind", "unknown weight rule '" + kind +
                                   "' (supported: constant, periodic, geometric)");
}

StructuredOperator parse_op(const json& j, const Lattice& lat, const std::string& path) {
    if (!j.is_object()) parse_fail(path, "expected an operator object");
    std::string kind = need(j, "kind", path).get<std::string>();

    auto checked = [&](auto&& build) -> StructuredOperator {
        try {
            return build();
        } catch (const Error& e) {
            parse_fail(path, e.what());
        }
    };

    if (kind == "identity") return checked([&] { return StructuredOperator::identity(lat); });
    if (kind == "unilateral_shift") {
        int axis = need_int(j, "axis", path);
        WeightRule rule = j.contains("weights") ? parse_rule(j["weights"], path + ".weights")
                                                : WeightRule::ones();
        return checked([&] { return StructuredOperator::unilateral_shift(lat, axis, rule); });
    }
    if (kind == "bilateral_shift") {
        int axis = need_int(j, "axis", path);
        WeightRule rule = j.contains("weights") ? parse_rule(j["weights"], path + ".weights")
                                                : WeightRule::ones();
        return checked([&] { return StructuredOperator::bilateral_shift(lat, axis, rule); });
    }
    if (kind == "diagonal_unitary") {
        int axis = need_int(j, "axis", path);
        WeightRule rule = parse_rule(need(j, "phases", path), path + ".phases");
        return checked([&] { return StructuredOperator::diagonal_unitary(lat, axis, rule); });
    }
    if (kind == "compose" || kind == "tensor") {
        const json& factors = need(j, "factors", path);
        if (!factors.is_array() || factors.empty())
            parse_fail(path + ".factors", "expected a nonempty array");
        std::vector<StructuredOperator> fs;
        for (size_t i = 0; i < factors.size(); ++i)
            fs.push_back(parse_op(factors[i], lat, path + ".factors[" + std::to_string(i) + "]"));
        if (kind == "compose")
            return checked([&] { return StructuredOperator::compose(std::move(fs)); });
        return checked([&] { return StructuredOperator::tensor(std::move(fs)); });
    }
    if (kind == "direct_sum") {
        const json& summands = need(j, "summands", path);
        if (!summands.is_array() || summands.size() != static_cast<size_t>(lat.block_count()))
            parse_fail(path + ".summands", "expected one summand per lattice block");
        std::vector<StructuredOperator> ss;
        for (size_t b = 0; b < summands.size(); ++b)
            ss.push_back(parse_op(summands[b], lat.block_lattice(static_cast<int>(b)),
                                  path + ".summands[" + std::to_string(b) + "]"));
        return checked([&] { return StructuredOperator::direct_sum(std::move(ss)); });
    }
    parse_fail(path + ".kind",
               "unknown operator kind '" + kind +
                   "' (supported: identity, unilateral_shift, bilateral_shift, diagonal_unitary, "
                   "compose, tensor, direct_sum)");
}

void write_complex(JsonWriter& w, cplx c) {
    w.begin_array();
    w.value(c.real());
    w.value(c.imag());
    w.end_array();
}

void write_rule(JsonWriter& w, const WeightRule& r) {
    w.begin_object();
    switch (r.kind) {
        case WeightRule::Kind::Constant:
            w.kv("kind", "constant");
            w.key("value");
            write_complex(w, r.value);
            break;
        case WeightRule::Kind::Periodic:
            w.kv("kind", "periodic");
            w.begin_array("values");
            for (const auto& v : r.values) write_complex(w, v);
            w.end_array();
            break;
        case WeightRule::Kind::Geometric:
            w.kv("kind", "geometric");
            w.kv("num", r.num);
            w.kv("den", r.den);
            break;
    }
    w.end_object();
}

void write_op(JsonWriter& w, const StructuredOperator& op) {
    w.begin_object();
    switch (op.kind()) {
        case StructuredOperator::Kind::Identity: w.kv("kind", "identity"); break;
        case StructuredOperator::Kind::UnilateralShift:
            w.kv("kind", "unilateral_shift");
            w.kv("axis", op.axis());
            w.key("weights");
            write_rule(w, op.rule());
            break;
        case StructuredOperator::Kind::BilateralShift:
            w.kv("kind", "bilateral_shift");
            w.kv("axis", op.axis());
            w.key("weights");
            write_rule(w, op.rule());
            break;
        case StructuredOperator::Kind::DiagonalUnitary:
            w.kv("kind", "diagonal_unitary");
            w.kv("axis", op.axis());
            w.key("phases");
            write_rule(w, op.rule());
            break;
        case StructuredOperator::Kind::Compose:
        case StructuredOperator::Kind::TensorAssign:
            w.kv("kind",
                 op.kind() == StructuredOperator::Kind::Compose ? "compose" : "tensor");
            w.begin_array("factors");
            for (const auto& f : op.children()) write_op(w, f);
            w.end_array();
            break;
        case StructuredOperator::Kind::DirectSum:
            w.kv("kind", "direct_sum");
            w.begin_array("summands");
            for (const auto& s : op.children()) write_op(w, s);
            w.end_array();
            break;
    }
    w.end_object();
}

} // namespace

TupleSpec parse_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        parse_fail("document", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) parse_fail("document", "expected a JSON object");

    TupleSpec spec;

    // lattice
    {
        const json& lat = need(doc, "lattice", "spec");
        const json& blocks = need(lat, "blocks", "spec.lattice");
        if (!blocks.is_array() || blocks.empty())
            parse_fail("spec.lattice.blocks", "expected a nonempty array of blocks");
        for (size_t b = 0; b < blocks.size(); ++b) {
            std::string bpath = "spec.lattice.blocks[" + std::to_string(b) + "]";
            const json& axes = need(blocks[b], "axes", bpath);
            if (!axes.is_array() || axes.empty())
                parse_fail(bpath + ".axes", "expected a nonempty array of axis kinds");
            Block blk;
            for (size_t a = 0; a < axes.size(); ++a) {
                std::string s = axes[a].get<std::string>();
                if (s == "half")
                    blk.axes.push_back(AxisKind::HalfLine);
                else if (s == "full")
                    blk.axes.push_back(AxisKind::FullLine);
                else
                    parse_fail(bpath + ".axes[" + std::to_string(a) + "]",
                               "unknown axis kind '" + s + "' (supported: half, full)");
            }
            spec.lattice.blocks.push_back(std::move(blk));
        }
    }

    // operators
    {
        const json& ops = need(doc, "operators", "spec");
        if (!ops.is_array() || ops.empty())
            parse_fail("spec.operators", "expected a nonempty array");
        for (size_t i = 0; i < ops.size(); ++i) {
            std::string path = "spec.operators[" + std::to_string(i) + "]";
            std::string name = ops[i].contains("name") ? ops[i]["name"].get<std::string>()
                                                       : "V" + std::to_string(i + 1);
            spec.operator_names.push_back(name);
            spec.operators.push_back(parse_op(need(ops[i], "op", path), spec.lattice, path + ".op"));
        }
    }

    // window depths
    {
        const json& win = need(doc, "window", "spec");
        if (win.contains("depth")) {
            int d = win["depth"].get<int>();
            if (d < 1) parse_fail("spec.window.depth", "depth must be >= 1");
            for (const auto& b : spec.lattice.blocks)
                spec.depths.emplace_back(b.axes.size(), d);
        } else if (win.contains("depths")) {
            const json& ds = win["depths"];
            if (!ds.is_array() || ds.size() != spec.lattice.blocks.size())
                parse_fail("spec.window.depths", "expected one depth list per block");
            for (size_t b = 0; b < ds.size(); ++b) {
                if (!ds[b].is_array() || ds[b].size() != spec.lattice.blocks[b].axes.size())
                    parse_fail("spec.window.depths[" + std::to_string(b) + "]",
                               "expected one depth per axis");
                std::vector<int> row;
                for (const auto& v : ds[b]) {
                    int d = v.get<int>();
                    if (d < 1)
                        parse_fail("spec.window.depths[" + std::to_string(b) + "]",
                                   "depths must be >= 1");
                    row.push_back(d);
                }
                spec.depths.push_back(std::move(row));
            }
        } else {
            parse_fail("spec.window", "needs 'depth' or 'depths'");
        }
    }

    if (doc.contains("cap")) {
        spec.cap = doc["cap"].get<int>();
        if (spec.cap < 1) parse_fail("spec.cap", "cap must be >= 1");
    }
    if (doc.contains("max_power")) {
        spec.max_power = doc["max_power"].get<int>();
        if (spec.max_power < 1) parse_fail("spec.max_power", "max_power must be >= 1");
    }
    if (doc.contains("tol")) {
        spec.tol = doc["tol"].get<double>();
        if (!(spec.tol > 0.0) || spec.tol > 1e-2)
            parse_fail("spec.tol", "tol must lie in (0, 1e-2]");
    }
    if (doc.contains("actions")) {
        for (const auto& a : doc["actions"]) {
            std::string s = a.get<std::string>();
            if (s != "check" && s != "decompose" && s != "verify")
                parse_fail("spec.actions", "unknown action '" + s +
                                               "' (supported: check, decompose, verify)");
            spec.actions.push_back(s);
        }
    }
    return spec;
}

void write_spec(JsonWriter& w, const TupleSpec& spec) {
    w.begin_object();
    w.begin_object("lattice");
    w.begin_array("blocks");
    for (const auto& b : spec.lattice.blocks) {
        w.begin_object();
        w.begin_array("axes");
        for (auto k : b.axes) w.value(k == AxisKind::HalfLine ? "half" : "full");
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();

    w.begin_array("operators");
    for (size_t i = 0; i < spec.operators.size(); ++i) {
        w.begin_object();
        w.kv("name", spec.operator_names[i]);
        w.key("op");
        write_op(w, spec.operators[i]);
        w.end_object();
    }
    w.end_array();

    w.begin_object("window");
    w.begin_array("depths");
    for (const auto& row : spec.depths) {
        w.begin_array();
        for (int d : row) w.value(d);
        w.end_array();
    }
    w.end_array();
    w.end_object();

    w.kv("cap", spec.cap);
    w.kv("max_power", spec.max_power);
    w.kv("tol", spec.tol);
    w.begin_array("actions");
    for (const auto& a : spec.actions) w.value(a);
    w.end_array();
    w.end_object();
}

std::string serialize_spec(const TupleSpec& spec) {
    JsonWriter w;
    write_spec(w, spec);
    return std::move(w).str();
}

Window spec_window(const TupleSpec& spec, int depth_override) {
    if (depth_override > 0) return Window::uniform(spec.lattice, depth_override);
    Window w;
    w.lattice = spec.lattice;
    w.depths = spec.depths;
    w.guard = 4 * w.max_axis_steps() + 8;
    return w;
}

} // namespace wold
