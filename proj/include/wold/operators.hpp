#pragma once

#include <map>
#include <optional>
#include <vector>

#include "wold/subspace.hpp"

namespace wold {

/// Unimodular weight sequence attached to a shift or diagonal operator.
struct WeightRule {
    enum class Kind { Constant, Periodic, Geometric };

    Kind kind = Kind::Constant;
    cplx value{1.0, 0.0};        // Constant
    std::vector<cplx> values;    // Periodic, nonempty
    long long num = 0, den = 1;  // Geometric: w_k = exp(2*pi*i * k*num/den)

    cplx at(long long k) const;
    void validate() const;

    static WeightRule ones();
    static WeightRule constant(cplx c);
    static WeightRule periodic(std::vector<cplx> vals);
    static WeightRule geometric(long long num, long long den);
};

/// Column-finite operator given by a generator rule with an exactly known
/// adjoint. Every built-in kind maps a lattice basis vector to at most one
/// weighted basis vector, so application to finitely supported vectors is
/// exact.
class StructuredOperator {
public:
    enum class Kind {
        Identity,
        UnilateralShift,
        BilateralShift,
        DiagonalUnitary,
        Compose,
        TensorAssign,
        DirectSum,
    };

    Kind kind() const { return kind_; }
    const Lattice& lattice() const { return lattice_; }
    int axis() const { return axis_; }
    const WeightRule& rule() const { return rule_; }
    const std::vector<StructuredOperator>& children() const { return children_; }

    /// Identity on the given lattice.
    static StructuredOperator identity(Lattice lat);
    /// Shift by +1 along a half-line axis of a single-block lattice,
    /// V e_k = w(k) e_{k+1}; the adjoint annihilates the boundary.
    static StructuredOperator unilateral_shift(Lattice lat, int axis, WeightRule rule);
    /// Shift by +1 along a full-line axis; unitary.
    static StructuredOperator bilateral_shift(Lattice lat, int axis, WeightRule rule);
    /// D e_k = w(k) e_k along one axis; unitary for unimodular weights.
    static StructuredOperator diagonal_unitary(Lattice lat, int axis, WeightRule rule);
    /// Operator product; factors.back() applies first.
    static StructuredOperator compose(std::vector<StructuredOperator> factors);
    /// Per-axis factors on one block acting jointly (distinct axes commute).
    static StructuredOperator tensor(std::vector<StructuredOperator> factors);
    /// Blockwise operator on a multi-block lattice, one summand per block.
    static StructuredOperator direct_sum(std::vector<StructuredOperator> summands);

    /// Total |displacement| per (block, axis) of one application.
    std::map<std::pair<int, int>, int> displacement() const;

    /// Largest per-axis displacement of one application.
    int displacement_bound() const;

private:
    Kind kind_ = Kind::Identity;
    Lattice lattice_;
    int axis_ = 0;
    WeightRule rule_;
    std::vector<StructuredOperator> children_;
};

SparseVector apply(const StructuredOperator& op, const SparseVector& v);
SparseVector apply_adjoint(const StructuredOperator& op, const SparseVector& v);

/// One factor of an operator word: op^power or (op*)^power.
struct OpFactor {
    const StructuredOperator* op = nullptr;
    int power = 1;
    bool adjoint = false;
};

using OpSequence = std::vector<OpFactor>;

inline OpFactor fwd(const StructuredOperator& op, int power = 1) { return {&op, power, false}; }
inline OpFactor adj(const StructuredOperator& op, int power = 1) { return {&op, power, true}; }

/// seq[0] * seq[1] * ... applied as an operator product (last factor first).
SparseVector apply_sequence(const OpSequence& seq, const SparseVector& v);

/// Window inflation needed so the word acts exactly on preimages of W.
int inflation_needed(const OpSequence& seq);

std::vector<SparseVector> apply_sequence_batch(const OpSequence& seq,
                                               const std::vector<SparseVector>& vs);
std::vector<SparseVector> apply_sequence_batch_serial(const OpSequence& seq,
                                                      const std::vector<SparseVector>& vs);

/// Exact range of the word restricted to W: the word is applied to the basis
/// of the internally inflated window and images fully inside W are kept.
SubspaceBasis range_of_sequence(const OpSequence& seq, const Window& w, double tol);

/// Range of op^power restricted to W.
SubspaceBasis range_on_window(const StructuredOperator& op, int power, const Window& w,
                              double tol);

/// Basis of { v supported in W : op* v = 0 }.
SubspaceBasis kernel_of_adjoint(const StructuredOperator& op, const Window& w, double tol);

} // namespace wold
