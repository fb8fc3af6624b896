#include "wold/subspace.hpp"

#include <algorithm>
#include <cmath>

namespace wold {

namespace {

void require_compatible(const SubspaceBasis& A, const SubspaceBasis& B) {
    if (!A.ambient.same_geometry(B.ambient))
        fail("WindowMismatch", "subspace operands live on different windows");
    if (A.tol != B.tol)
        fail("WindowMismatch", "subspace operands carry different tolerances");
}

// Inverted support index: lattice point -> (basis index, amplitude there).
// Makes Gram-Schmidt coefficient sweeps linear in the total fill for the
// near-monomial bases this toolkit produces.
class SupportIndex {
public:
    void add(int idx, const SparseVector& v) {
        for (const auto& [p, a] : v.entries()) index_[p].emplace_back(idx, a);
    }

    // coeffs[i] += <v, basis[i]> for every i sharing support with v.
    void accumulate(const SparseVector& v, std::map<int, cplx>& coeffs) const {
        for (const auto& [p, a] : v.entries()) {
            auto it = index_.find(p);
            if (it == index_.end()) continue;
            for (const auto& [idx, amp] : it->second) coeffs[idx] += a * std::conj(amp);
        }
    }

private:
    std::map<LatticePoint, std::vector<std::pair<int, cplx>>> index_;
};

SparseVector subtract_projection(const SparseVector& v, const std::vector<SparseVector>& basis,
                                 const SupportIndex& index) {
    std::map<int, cplx> coeffs;
    index.accumulate(v, coeffs);
    SparseVector r = v;
    for (const auto& [idx, c] : coeffs) r = r.add_scaled(basis[idx], -c);
    return r;
}

} // namespace

bool SubspaceBasis::monomial() const {
    return std::all_of(vectors.begin(), vectors.end(),
                       [](const SparseVector& v) { return v.is_monomial(); });
}

Projector::Projector(const SubspaceBasis& S) : S_(S), monomial_(S.monomial()) {
    if (monomial_)
        for (int i = 0; i < S.dim(); ++i) {
            const auto& e = S.vectors[i].entries().front();
            index_[e.first] = {i, e.second};
        }
}

SparseVector Projector::project(const SparseVector& v) const {
    if (monomial_) {
        std::vector<SparseVector::Entry> terms;
        for (const auto& [p, a] : v.entries()) {
            auto it = index_.find(p);
            if (it == index_.end()) continue;
            const cplx amp = it->second.second;
            terms.emplace_back(p, a * std::conj(amp) * amp);
        }
        return SparseVector::from_terms(std::move(terms));
    }
    SparseVector out;
    for (const auto& b : S_.vectors) {
        cplx c = inner(v, b);
        if (c != cplx{}) out = out.add_scaled(b, c);
    }
    return out;
}

SparseVector Projector::residual(const SparseVector& v) const {
    return v.add_scaled(project(v), cplx(-1.0, 0.0));
}

double Projector::residual_norm(const SparseVector& v) const { return residual(v).norm(); }

struct IncrementalBasis::Impl {
    SubspaceBasis basis;
    SupportIndex index;
};

IncrementalBasis::IncrementalBasis(Window ambient, double tol) : impl_(new Impl) {
    if (tol <= 0.0) fail("BadTolerance", "orthonormalize needs tol > 0");
    impl_->basis.ambient = std::move(ambient);
    impl_->basis.tol = tol;
}

IncrementalBasis::~IncrementalBasis() = default;
IncrementalBasis::IncrementalBasis(IncrementalBasis&&) noexcept = default;
IncrementalBasis& IncrementalBasis::operator=(IncrementalBasis&&) noexcept = default;

bool IncrementalBasis::add(const SparseVector& v) {
    auto& basis = impl_->basis;
    double scale = std::max(1.0, v.norm());
    SparseVector r = subtract_projection(v, basis.vectors, impl_->index);
    r = subtract_projection(r, basis.vectors, impl_->index); // re-orthogonalization pass
    double n = r.norm();
    if (n <= basis.tol * scale) return false;
    SparseVector b = r.scaled(cplx(1.0 / n, 0.0));
    impl_->index.add(basis.dim(), b);
    basis.vectors.push_back(std::move(b));
    return true;
}

int IncrementalBasis::dim() const { return impl_->basis.dim(); }

SubspaceBasis IncrementalBasis::take() && { return std::move(impl_->basis); }

const SubspaceBasis& IncrementalBasis::current() const { return impl_->basis; }

SubspaceBasis orthonormalize(const Window& ambient, const std::vector<SparseVector>& vectors,
                             double tol) {
    IncrementalBasis acc(ambient, tol);
    for (const auto& v : vectors) acc.add(v);
    return std::move(acc).take();
}

SparseVector project(const SparseVector& v, const SubspaceBasis& S) {
    return Projector(S).project(v);
}

SubspaceBasis intersect(const SubspaceBasis& A, const SubspaceBasis& B) {
    require_compatible(A, B);
    SubspaceBasis out;
    out.ambient = A.ambient;
    out.tol = A.tol;
    if (A.empty() || B.empty()) return out;

    const double keep = 1.0 - A.tol;

    if (A.monomial() && B.monomial()) {
        Projector pb(B);
        for (const auto& a : A.vectors) {
            SparseVector pa = pb.project(a);
            if (pa.norm() >= keep) out.vectors.push_back(a);
        }
        return out;
    }

    // Principal angles via the cross-Gram matrix M = A^H B: eigenvalues of
    // M M^H are cos^2(theta); kept eigenvectors give coefficient vectors in A.
    kernels::DenseMatrix m = kernels::cross_gram(A.vectors, B.vectors);
    kernels::DenseMatrix h = kernels::matmul(m, kernels::adjoint(m));
    auto eig = kernels::hermitian_eig(h);
    for (int j = 0; j < eig.vectors.cols; ++j) {
        if (eig.values[j] < keep * keep) continue;
        SparseVector dir;
        for (int i = 0; i < A.dim(); ++i) dir = dir.add_scaled(A.vectors[i], eig.vectors.at(i, j));
        out.vectors.push_back(std::move(dir));
    }
    return out;
}

SubspaceBasis complement_within(const SubspaceBasis& A, const SubspaceBasis& B) {
    require_compatible(A, B);
    const double slack = 10.0 * A.tol;
    Projector pa(A);
    for (const auto& b : B.vectors)
        if (pa.residual_norm(b) > slack * std::max(1.0, b.norm()))
            fail("NotASubspace", "complement_within: B is not contained in A");

    SubspaceBasis out;
    out.ambient = A.ambient;
    out.tol = A.tol;

    Projector pb(B);
    if (A.monomial() && B.monomial()) {
        for (const auto& a : A.vectors)
            if (pb.project(a).norm() < 0.5) out.vectors.push_back(a);
        return out;
    }

    std::vector<SparseVector> candidates;
    candidates.reserve(A.vectors.size());
    for (const auto& a : A.vectors) candidates.push_back(pb.residual(a));
    return orthonormalize(A.ambient, candidates, A.tol);
}

namespace {

// max over unit v in span(A) of dist(v, span(B)), computed from residual
// vectors so near-zero gaps come out at machine precision instead of
// sqrt(eps).
double directed_gap(const SubspaceBasis& A, const SubspaceBasis& B) {
    if (A.empty()) return 0.0;
    if (B.empty()) return 1.0;
    Projector pb(B);
    std::vector<SparseVector> residuals;
    residuals.reserve(A.vectors.size());
    for (const auto& a : A.vectors) residuals.push_back(pb.residual(a));

    if (A.monomial() && B.monomial()) {
        // Residuals sit on A's distinct points, hence mutually orthogonal.
        double worst = 0.0;
        for (const auto& r : residuals) worst = std::max(worst, r.norm());
        return std::min(worst, 1.0);
    }

    kernels::DenseMatrix g = kernels::cross_gram(residuals, residuals);
    auto eig = kernels::hermitian_eig(g);
    double lam = eig.values.empty() ? 0.0 : eig.values.back();
    return std::sqrt(std::max(0.0, std::min(lam, 1.0)));
}

} // namespace

double principal_angle_gap(const SubspaceBasis& A, const SubspaceBasis& B) {
    require_compatible(A, B);
    if (A.empty() && B.empty()) return 0.0;
    return std::max(directed_gap(A, B), directed_gap(B, A));
}

SubspaceBasis window_basis(const Window& w, double tol) {
    SubspaceBasis out;
    out.ambient = w;
    out.tol = tol;
    for (auto& p : w.points()) out.vectors.push_back(SparseVector::basis(std::move(p)));
    return out;
}

SubspaceBasis restrict_to_window(const SubspaceBasis& A, const Window& target) {
    SubspaceBasis out;
    out.ambient = target;
    out.tol = A.tol;
    if (A.monomial()) {
        for (const auto& a : A.vectors)
            if (target.contains(a.entries().front().first)) out.vectors.push_back(a);
        return out;
    }
    SubspaceBasis tb = window_basis(target, A.tol);
    tb.ambient = A.ambient;
    SubspaceBasis cut = intersect(A, tb);
    for (const auto& v : cut.vectors) {
        // Clip the (at most tol-sized) out-of-window tail and renormalize.
        std::vector<SparseVector::Entry> kept;
        for (const auto& e : v.entries())
            if (target.contains(e.first)) kept.push_back(e);
        SparseVector w = SparseVector::from_terms(std::move(kept));
        double n = w.norm();
        if (n > 0.0) out.vectors.push_back(w.scaled(cplx(1.0 / n, 0.0)));
    }
    return out;
}

SubspaceBasis sum_basis(const SubspaceBasis& A, const SubspaceBasis& B) {
    require_compatible(A, B);
    std::vector<SparseVector> all = A.vectors;
    all.insert(all.end(), B.vectors.begin(), B.vectors.end());
    return orthonormalize(A.ambient, all, A.tol);
}

std::vector<double> projection_residuals_serial(const std::vector<SparseVector>& vs,
                                                const SubspaceBasis& S) {
    Projector p(S);
    std::vector<double> out(vs.size());
    for (size_t i = 0; i < vs.size(); ++i) out[i] = p.residual_norm(vs[i]);
    return out;
}

std::vector<double> projection_residuals(const std::vector<SparseVector>& vs,
                                         const SubspaceBasis& S) {
    Projector p(S);
    std::vector<double> out(vs.size());
    const long long n = static_cast<long long>(vs.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = p.residual_norm(vs[static_cast<size_t>(i)]);
    return out;
}

double max_abs_cross_inner(const SubspaceBasis& A, const SubspaceBasis& B) {
    if (A.empty() || B.empty()) return 0.0;
    if (A.monomial() && B.monomial()) {
        Projector pb(B);
        double worst = 0.0;
        for (const auto& a : A.vectors) worst = std::max(worst, pb.project(a).norm());
        return worst;
    }
    kernels::DenseMatrix g = kernels::cross_gram(A.vectors, B.vectors);
    double worst = 0.0;
    for (const auto& c : g.a) worst = std::max(worst, std::abs(c));
    return worst;
}

} // namespace wold
