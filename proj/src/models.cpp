#include "wold/models.hpp"

namespace wold::models {

std::vector<StructuredOperator> weighted_shift_pair(const WeightRule& alpha) {
    Lattice lat = Lattice::single({AxisKind::HalfLine});
    return {StructuredOperator::unilateral_shift(lat, 0, WeightRule::ones()),
            StructuredOperator::unilateral_shift(lat, 0, alpha)};
}

std::vector<StructuredOperator> diagonal_times_shift_pair(const WeightRule& r) {
    Lattice lat = Lattice::single({AxisKind::HalfLine, AxisKind::HalfLine});
    StructuredOperator v1 = StructuredOperator::tensor({
        StructuredOperator::diagonal_unitary(lat, 0, r),
        StructuredOperator::unilateral_shift(lat, 1, WeightRule::ones()),
    });
    StructuredOperator v2 = StructuredOperator::unilateral_shift(lat, 0, WeightRule::ones());
    return {std::move(v1), std::move(v2)};
}

std::vector<StructuredOperator> subset_pattern_tuple(
    int n, const std::vector<WeightRule>& shift_weights) {
    if (n < 1 || n > 6) fail("TooManyOperators", "subset_pattern_tuple supports 1 <= n <= 6");
    if (shift_weights.size() != static_cast<size_t>(n))
        fail("BadOperator", "one shift weight rule per operator expected");

    const int nblocks = 1 << n;
    std::vector<Lattice> block_lats;
    block_lats.reserve(static_cast<size_t>(nblocks));
    for (int b = 0; b < nblocks; ++b) {
        std::vector<AxisKind> axes(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            axes[static_cast<size_t>(i)] =
                (b >> i) & 1 ? AxisKind::HalfLine : AxisKind::FullLine;
        block_lats.push_back(Lattice::single(std::move(axes)));
    }

    std::vector<StructuredOperator> ops;
    ops.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<StructuredOperator> summands;
        summands.reserve(static_cast<size_t>(nblocks));
        for (int b = 0; b < nblocks; ++b) {
            if ((b >> i) & 1)
                summands.push_back(StructuredOperator::unilateral_shift(
                    block_lats[static_cast<size_t>(b)], i, shift_weights[static_cast<size_t>(i)]));
            else
                summands.push_back(StructuredOperator::bilateral_shift(
                    block_lats[static_cast<size_t>(b)], i, WeightRule::ones()));
        }
        ops.push_back(StructuredOperator::direct_sum(std::move(summands)));
    }
    return ops;
}

} // namespace wold::models
