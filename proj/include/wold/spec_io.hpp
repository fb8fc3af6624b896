#pragma once

#include <string>
#include <vector>

#include "wold/operators.hpp"

namespace wold {

class JsonWriter;

/// Parsed operator-tuple experiment description.
struct TupleSpec {
    Lattice lattice;
    std::vector<std::string> operator_names;
    std::vector<StructuredOperator> operators;
    std::vector<std::vector<int>> depths; // per block, per axis
    int cap = 3;        // hypothesis power cap
    int max_power = 3;  // decomposition power grid bound
    double tol = 1e-10;
    std::vector<std::string> actions; // optional default actions
};

/// Parses and validates a spec document; throws Error("ParseError", ...) with
/// the offending field path.
TupleSpec parse_spec(const std::string& text);

/// Canonical serialization; parse(serialize_spec(s)) reproduces s exactly.
std::string serialize_spec(const TupleSpec& spec);

/// Emits the spec as an object into an open writer (used by reports).
void write_spec(JsonWriter& w, const TupleSpec& spec);

/// The window described by the spec's depths (guard chosen automatically).
Window spec_window(const TupleSpec& spec, int depth_override = -1);

} // namespace wold
