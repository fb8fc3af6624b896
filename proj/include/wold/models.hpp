#pragma once

#include <vector>

#include "wold/operators.hpp"

namespace wold::models {

/// (V1, V2) on l2(Z+): V1 the plain forward shift, V2 the forward shift with
/// weights alpha. Non-commuting; the plain range condition holds while the
/// starred one fails for non-constant alpha.
std::vector<StructuredOperator> weighted_shift_pair(const WeightRule& alpha);

/// (V1, V2) on l2(Z+^2): V1 = diagonal(r) on axis 0 combined with the shift on
/// axis 1, V2 = shift on axis 0. Non-commuting but satisfies both equal-range
/// conditions for every power pair.
std::vector<StructuredOperator> diagonal_times_shift_pair(const WeightRule& r);

/// n operators on a 2^n-block lattice. Block b has one axis per operator;
/// operator i acts on axis i of block b as a weighted unilateral shift when
/// bit i of b is set (half-line axis) and as a bilateral shift otherwise
/// (full-line axis). Every subset pattern is realized on exactly one block,
/// which makes the expected decomposition explicit.
std::vector<StructuredOperator> subset_pattern_tuple(int n,
                                                     const std::vector<WeightRule>& shift_weights);

} // namespace wold::models
