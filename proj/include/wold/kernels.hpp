#pragma once

#include <vector>

#include "wold/sparse_vector.hpp"

namespace wold::kernels {

/// Row-major dense complex matrix; only used for Gram-sized problems.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> a;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    cplx& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    cplx at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

DenseMatrix matmul(const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix adjoint(const DenseMatrix& x);

/// G[i][j] = <A[i], B[j]>. OpenMP over rows; entries are computed independently
/// so the result is bitwise identical to the serial variant.
DenseMatrix cross_gram(const std::vector<SparseVector>& A, const std::vector<SparseVector>& B);
DenseMatrix cross_gram_serial(const std::vector<SparseVector>& A,
                              const std::vector<SparseVector>& B);

struct EigResult {
    std::vector<double> values;  // ascending
    DenseMatrix vectors;         // columns, matching values
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Accurate to machine
/// precision for the Gram-sized problems this toolkit produces.
EigResult hermitian_eig(const DenseMatrix& h);

} // namespace wold::kernels
