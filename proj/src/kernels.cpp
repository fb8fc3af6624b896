#include "wold/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wold::kernels {

DenseMatrix matmul(const DenseMatrix& x, const DenseMatrix& y) {
    DenseMatrix z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            cplx xv = x.at(i, k);
            if (xv == cplx{}) continue;
            for (int j = 0; j < y.cols; ++j) z.at(i, j) += xv * y.at(k, j);
        }
    return z;
}

DenseMatrix adjoint(const DenseMatrix& x) {
    DenseMatrix z(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z.at(j, i) = std::conj(x.at(i, j));
    return z;
}

DenseMatrix cross_gram_serial(const std::vector<SparseVector>& A,
                              const std::vector<SparseVector>& B) {
    DenseMatrix g(static_cast<int>(A.size()), static_cast<int>(B.size()));
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j) g.at(i, j) = inner(A[i], B[j]);
    return g;
}

DenseMatrix cross_gram(const std::vector<SparseVector>& A, const std::vector<SparseVector>& B) {
    DenseMatrix g(static_cast<int>(A.size()), static_cast<int>(B.size()));
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j) g.at(i, j) = inner(A[i], B[j]);
    return g;
}

namespace {

double off_diagonal_norm(const DenseMatrix& h) {
    double s = 0.0;
    for (int i = 0; i < h.rows; ++i)
        for (int j = 0; j < h.cols; ++j)
            if (i != j) s += std::norm(h.at(i, j));
    return std::sqrt(s);
}

} // namespace

EigResult hermitian_eig(const DenseMatrix& h) {
    const int n = h.rows;
    DenseMatrix a = h;
    DenseMatrix v(n, n);
    for (int i = 0; i < n; ++i) v.at(i, i) = 1.0;

    if (n > 0) {
        double scale = 0.0;
        for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a.at(i, i)));
        scale = std::max(scale, off_diagonal_norm(a));
        const double stop = std::max(scale, 1.0) * 1e-15 * n;

        for (int sweep = 0; sweep < 80 && off_diagonal_norm(a) > stop; ++sweep) {
            for (int p = 0; p < n - 1; ++p)
                for (int q = p + 1; q < n; ++q) {
                    cplx apq = a.at(p, q);
                    if (std::abs(apq) <= stop / (n * n + 1.0)) continue;
                    double app = a.at(p, p).real();
                    double aqq = a.at(q, q).real();
                    // Unitary 2x2 rotation zeroing the (p,q) entry:
                    // work with the phase of a_pq so the core rotation is real.
                    cplx phase = apq / std::abs(apq);
                    double m = std::abs(apq);
                    double theta = 0.5 * std::atan2(2.0 * m, app - aqq);
                    double c = std::cos(theta), s = std::sin(theta);
                    cplx sp = s * phase;

                    for (int k = 0; k < n; ++k) {
                        cplx akp = a.at(k, p), akq = a.at(k, q);
                        a.at(k, p) = c * akp + std::conj(sp) * akq;
                        a.at(k, q) = -sp * akp + c * akq;
                    }
                    for (int k = 0; k < n; ++k) {
                        cplx apk = a.at(p, k), aqk = a.at(q, k);
                        a.at(p, k) = c * apk + sp * aqk;
                        a.at(q, k) = -std::conj(sp) * apk + c * aqk;
                    }
                    for (int k = 0; k < n; ++k) {
                        cplx vkp = v.at(k, p), vkq = v.at(k, q);
                        v.at(k, p) = c * vkp + std::conj(sp) * vkq;
                        v.at(k, q) = -sp * vkp + c * vkq;
                    }
                }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a.at(i, i).real() < a.at(j, j).real(); });

    EigResult res;
    res.values.resize(n);
    res.vectors = DenseMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        res.values[j] = a.at(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) res.vectors.at(i, j) = v.at(i, order[j]);
    }
    return res;
}

} // namespace wold::kernels
