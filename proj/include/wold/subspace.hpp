#pragma once

#include <map>
#include <memory>
#include <vector>

#include "wold/kernels.hpp"
#include "wold/sparse_vector.hpp"

namespace wold {

/// Finite orthonormal family spanning a subspace of a window. Vectors are kept
/// in production order; the Gram matrix deviates from the identity by at most
/// ~10x the stored tolerance.
struct SubspaceBasis {
    Window ambient;
    double tol = 0.0;
    std::vector<SparseVector> vectors;

    int dim() const { return static_cast<int>(vectors.size()); }
    bool empty() const { return vectors.empty(); }

    /// Every vector supported on a single lattice point. Subspace algebra on
    /// monomial bases is exact; generic bases go through the dense path.
    bool monomial() const;
};

/// Reusable projection onto span(S). Prebuilds a point index when S is
/// monomial so repeated projections cost O(nnz log dim) instead of O(dim).
class Projector {
public:
    explicit Projector(const SubspaceBasis& S);

    SparseVector project(const SparseVector& v) const;
    SparseVector residual(const SparseVector& v) const; // v - P v
    double residual_norm(const SparseVector& v) const;

private:
    const SubspaceBasis& S_;
    bool monomial_;
    std::map<LatticePoint, std::pair<int, cplx>> index_;
};

/// Streaming two-pass Gram-Schmidt with a hybrid rank threshold
/// tol*max(1, input norm). Accepts vectors one at a time so power-grid sums
/// can grow a basis shell by shell.
class IncrementalBasis {
public:
    IncrementalBasis(Window ambient, double tol);
    ~IncrementalBasis();
    IncrementalBasis(IncrementalBasis&&) noexcept;
    IncrementalBasis& operator=(IncrementalBasis&&) noexcept;

    /// True when the vector was independent and got appended.
    bool add(const SparseVector& v);
    int dim() const;
    SubspaceBasis take() &&;
    const SubspaceBasis& current() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Two-pass Gram-Schmidt with a hybrid rank threshold tol*max(1, input norm).
/// Input order is preserved; dependent vectors are dropped.
SubspaceBasis orthonormalize(const Window& ambient, const std::vector<SparseVector>& vectors,
                             double tol);

/// Orthogonal projection of v onto span(S).
SparseVector project(const SparseVector& v, const SubspaceBasis& S);

/// Span intersection decided by principal angles: directions with
/// cos(theta) >= 1 - tol are kept.
SubspaceBasis intersect(const SubspaceBasis& A, const SubspaceBasis& B);

/// A (-) B for B contained in A (checked; throws NotASubspace).
SubspaceBasis complement_within(const SubspaceBasis& A, const SubspaceBasis& B);

/// Symmetrized largest distance from a unit vector of one span to the other;
/// 0 iff equal spans, 1 for orthogonal (or dimension-mismatched) spans.
double principal_angle_gap(const SubspaceBasis& A, const SubspaceBasis& B);

/// Orthonormal basis of the whole window (its lattice basis vectors).
SubspaceBasis window_basis(const Window& w, double tol);

/// span(A) intersected with the span of a sub-window; result lives on `target`.
SubspaceBasis restrict_to_window(const SubspaceBasis& A, const Window& target);

/// orthonormalize(A u B)
SubspaceBasis sum_basis(const SubspaceBasis& A, const SubspaceBasis& B);

/// ||v - P_S v|| for each v; OpenMP over vectors.
std::vector<double> projection_residuals(const std::vector<SparseVector>& vs,
                                         const SubspaceBasis& S);
std::vector<double> projection_residuals_serial(const std::vector<SparseVector>& vs,
                                                const SubspaceBasis& S);

/// max |<a, b>| over basis pairs; the orthogonality witness between blocks.
double max_abs_cross_inner(const SubspaceBasis& A, const SubspaceBasis& B);

} // namespace wold
