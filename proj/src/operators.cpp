#include "wold/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wold {

namespace {

long long floor_mod(long long k, long long m) {
    long long r = k % m;
    return r < 0 ? r + m : r;
}

constexpr double kUnimodularSlack = 1e-12;

} // namespace

cplx WeightRule::at(long long k) const {
    switch (kind) {
        case Kind::Constant: return value;
        case Kind::Periodic: return values[static_cast<size_t>(floor_mod(k, static_cast<long long>(values.size())))];
        case Kind::Geometric: {
            long long m = floor_mod(k * num, den);
            return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) /
                                       static_cast<double>(den));
        }
    }
    return {1.0, 0.0};
}

void WeightRule::validate() const {
    switch (kind) {
        case Kind::Constant:
            if (std::abs(std::abs(value) - 1.0) > kUnimodularSlack)
                fail("BadWeight", "constant weight is not unimodular");
            break;
        case Kind::Periodic:
            if (values.empty()) fail("BadWeight", "periodic weight list is empty");
            for (const auto& v : values)
                if (std::abs(std::abs(v) - 1.0) > kUnimodularSlack)
                    fail("BadWeight", "periodic weight is not unimodular");
            break;
        case Kind::Geometric:
            if (den <= 0) fail("BadWeight", "geometric phase denominator must be positive");
            break;
    }
}

WeightRule WeightRule::ones() { return WeightRule{}; }

WeightRule WeightRule::constant(cplx c) {
    WeightRule r;
    r.kind = Kind::Constant;
    r.value = c;
    r.validate();
    return r;
}

WeightRule WeightRule::periodic(std::vector<cplx> vals) {
    WeightRule r;
    r.kind = Kind::Periodic;
    r.values = std::move(vals);
    r.validate();
    return r;
}

WeightRule WeightRule::geometric(long long num, long long den) {
    WeightRule r;
    r.kind = Kind::Geometric;
    r.num = num;
    r.den = den;
    r.validate();
    return r;
}

namespace {

void require_single_block_axis(const Lattice& lat, int axis, AxisKind expected, const char* what) {
    lat.validate();
    if (lat.block_count() != 1)
        fail("BadOperator", std::string(what) + " must be built on a single-block lattice");
    if (axis < 0 || axis >= lat.axis_count(0))
        fail("BadOperator", std::string(what) + ": axis out of range");
    if (lat.blocks[0].axes[axis] != expected)
        fail("BadOperator", std::string(what) + ": wrong axis kind for this shift");
}

} // namespace

StructuredOperator StructuredOperator::identity(Lattice lat) {
    lat.validate();
    StructuredOperator op;
    op.kind_ = Kind::Identity;
    op.lattice_ = std::move(lat);
    return op;
}

StructuredOperator StructuredOperator::unilateral_shift(Lattice lat, int axis, WeightRule rule) {
    require_single_block_axis(lat, axis, AxisKind::HalfLine, "unilateral shift");
    rule.validate();
    StructuredOperator op;
    op.kind_ = Kind::UnilateralShift;
    op.lattice_ = std::move(lat);
    op.axis_ = axis;
    op.rule_ = std::move(rule);
    return op;
}

StructuredOperator StructuredOperator::bilateral_shift(Lattice lat, int axis, WeightRule rule) {
    require_single_block_axis(lat, axis, AxisKind::FullLine, "bilateral shift");
    rule.validate();
    StructuredOperator op;
    op.kind_ = Kind::BilateralShift;
    op.lattice_ = std::move(lat);
    op.axis_ = axis;
    op.rule_ = std::move(rule);
    return op;
}

StructuredOperator StructuredOperator::diagonal_unitary(Lattice lat, int axis, WeightRule rule) {
    lat.validate();
    if (lat.block_count() != 1) fail("BadOperator", "diagonal must be built on a single-block lattice");
    if (axis < 0 || axis >= lat.axis_count(0)) fail("BadOperator", "diagonal: axis out of range");
    rule.validate();
    StructuredOperator op;
    op.kind_ = Kind::DiagonalUnitary;
    op.lattice_ = std::move(lat);
    op.axis_ = axis;
    op.rule_ = std::move(rule);
    return op;
}

StructuredOperator StructuredOperator::compose(std::vector<StructuredOperator> factors) {
    if (factors.empty()) fail("BadOperator", "compose needs at least one factor");
    for (size_t i = 1; i < factors.size(); ++i)
        if (!(factors[i].lattice_ == factors[0].lattice_))
            fail("BadOperator", "compose factors must share one lattice");
    StructuredOperator op;
    op.kind_ = Kind::Compose;
    op.lattice_ = factors[0].lattice_;
    op.children_ = std::move(factors);
    return op;
}

StructuredOperator StructuredOperator::tensor(std::vector<StructuredOperator> factors) {
    if (factors.empty()) fail("BadOperator", "tensor needs at least one factor");
    std::vector<bool> used(static_cast<size_t>(factors[0].lattice_.axis_count(0)), false);
    for (const auto& f : factors) {
        if (!(f.lattice_ == factors[0].lattice_))
            fail("BadOperator", "tensor factors must share one lattice");
        switch (f.kind_) {
            case Kind::UnilateralShift:
            case Kind::BilateralShift:
            case Kind::DiagonalUnitary: break;
            default: fail("BadOperator", "tensor factors must be single-axis primitives");
        }
        if (used[static_cast<size_t>(f.axis_)])
            fail("BadOperator", "tensor factors must act on distinct axes");
        used[static_cast<size_t>(f.axis_)] = true;
    }
    StructuredOperator op;
    op.kind_ = Kind::TensorAssign;
    op.lattice_ = factors[0].lattice_;
    op.children_ = std::move(factors);
    return op;
}

StructuredOperator StructuredOperator::direct_sum(std::vector<StructuredOperator> summands) {
    if (summands.empty()) fail("BadOperator", "direct sum needs at least one summand");
    Lattice lat;
    for (const auto& s : summands) {
        if (s.lattice_.block_count() != 1)
            fail("BadOperator", "direct-sum summands must be single-block operators");
        lat.blocks.push_back(s.lattice_.blocks[0]);
    }
    StructuredOperator op;
    op.kind_ = Kind::DirectSum;
    op.lattice_ = std::move(lat);
    op.children_ = std::move(summands);
    return op;
}

std::map<std::pair<int, int>, int> StructuredOperator::displacement() const {
    std::map<std::pair<int, int>, int> d;
    switch (kind_) {
        case Kind::Identity:
        case Kind::DiagonalUnitary: break;
        case Kind::UnilateralShift:
        case Kind::BilateralShift: d[{0, axis_}] += 1; break;
        case Kind::Compose:
        case Kind::TensorAssign:
            for (const auto& c : children_)
                for (const auto& [k, v] : c.displacement()) d[k] += v;
            break;
        case Kind::DirectSum:
            for (size_t b = 0; b < children_.size(); ++b)
                for (const auto& [k, v] : children_[b].displacement())
                    d[{static_cast<int>(b), k.second}] += v;
            break;
    }
    return d;
}

int StructuredOperator::displacement_bound() const {
    int worst = 0;
    for (const auto& [k, v] : displacement()) worst = std::max(worst, v);
    return worst;
}

namespace {

using Entry = SparseVector::Entry;

// Every built-in kind maps a basis vector to at most one weighted basis
// vector; nullopt encodes annihilation.
std::optional<Entry> apply_term(const StructuredOperator& op, Entry e, bool adjoint) {
    switch (op.kind()) {
        case StructuredOperator::Kind::Identity: return e;
        case StructuredOperator::Kind::UnilateralShift: {
            int& c = e.first.coords[static_cast<size_t>(op.axis())];
            if (!adjoint) {
                e.second *= op.rule().at(c);
                ++c;
            } else {
                if (c == 0) return std::nullopt;
                --c;
                e.second *= std::conj(op.rule().at(c));
            }
            return e;
        }
        case StructuredOperator::Kind::BilateralShift: {
            int& c = e.first.coords[static_cast<size_t>(op.axis())];
            if (!adjoint) {
                e.second *= op.rule().at(c);
                ++c;
            } else {
                --c;
                e.second *= std::conj(op.rule().at(c));
            }
            return e;
        }
        case StructuredOperator::Kind::DiagonalUnitary: {
            cplx w = op.rule().at(e.first.coords[static_cast<size_t>(op.axis())]);
            e.second *= adjoint ? std::conj(w) : w;
            return e;
        }
        case StructuredOperator::Kind::Compose: {
            const auto& fs = op.children();
            // product F0 F1 ... Fk: Fk acts first; the adjoint reverses order.
            std::optional<Entry> cur = e;
            if (!adjoint) {
                for (auto it = fs.rbegin(); it != fs.rend() && cur; ++it)
                    cur = apply_term(*it, std::move(*cur), false);
            } else {
                for (auto it = fs.begin(); it != fs.end() && cur; ++it)
                    cur = apply_term(*it, std::move(*cur), true);
            }
            return cur;
        }
        case StructuredOperator::Kind::TensorAssign: {
            std::optional<Entry> cur = e;
            for (const auto& f : op.children()) {
                cur = apply_term(f, std::move(*cur), adjoint);
                if (!cur) return std::nullopt;
            }
            return cur;
        }
        case StructuredOperator::Kind::DirectSum: {
            int b = e.first.block;
            if (b < 0 || b >= static_cast<int>(op.children().size()))
                fail("BadOperator", "direct sum applied to a point outside its lattice");
            Entry local{LatticePoint{0, std::move(e.first.coords)}, e.second};
            auto r = apply_term(op.children()[static_cast<size_t>(b)], std::move(local), adjoint);
            if (!r) return std::nullopt;
            r->first.block = b;
            return r;
        }
    }
    return std::nullopt;
}

SparseVector apply_impl(const StructuredOperator& op, const SparseVector& v, bool adjoint) {
    std::vector<Entry> terms;
    terms.reserve(v.size());
    for (const auto& e : v.entries()) {
        auto r = apply_term(op, e, adjoint);
        if (r) terms.push_back(std::move(*r));
    }
    return SparseVector::from_terms(std::move(terms));
}

} // namespace

SparseVector apply(const StructuredOperator& op, const SparseVector& v) {
    return apply_impl(op, v, false);
}

SparseVector apply_adjoint(const StructuredOperator& op, const SparseVector& v) {
    return apply_impl(op, v, true);
}

SparseVector apply_sequence(const OpSequence& seq, const SparseVector& v) {
    SparseVector cur = v;
    for (auto it = seq.rbegin(); it != seq.rend(); ++it)
        for (int k = 0; k < it->power && !cur.empty(); ++k)
            cur = apply_impl(*it->op, cur, it->adjoint);
    return cur;
}

int inflation_needed(const OpSequence& seq) {
    std::map<std::pair<int, int>, long long> total;
    for (const auto& f : seq)
        for (const auto& [k, v] : f.op->displacement())
            total[k] += static_cast<long long>(v) * f.power;
    long long worst = 0;
    for (const auto& [k, v] : total) worst = std::max(worst, v);
    return static_cast<int>(worst);
}

std::vector<SparseVector> apply_sequence_batch_serial(const OpSequence& seq,
                                                      const std::vector<SparseVector>& vs) {
    std::vector<SparseVector> out(vs.size());
    for (size_t i = 0; i < vs.size(); ++i) out[i] = apply_sequence(seq, vs[i]);
    return out;
}

std::vector<SparseVector> apply_sequence_batch(const OpSequence& seq,
                                               const std::vector<SparseVector>& vs) {
    std::vector<SparseVector> out(vs.size());
    const long long n = static_cast<long long>(vs.size());
#pragma omp parallel for schedule(dynamic, 32)
    for (long long i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = apply_sequence(seq, vs[static_cast<size_t>(i)]);
    return out;
}

SubspaceBasis range_of_sequence(const OpSequence& seq, const Window& w, double tol) {
    Window domain = w.inflated(inflation_needed(seq));
    std::vector<SparseVector> kept;
    for (auto& p : domain.points()) {
        SparseVector img = apply_sequence(seq, SparseVector::basis(std::move(p)));
        if (!img.empty() && img.supported_in(w)) kept.push_back(std::move(img));
    }
    return orthonormalize(w, kept, tol);
}

SubspaceBasis range_on_window(const StructuredOperator& op, int power, const Window& w,
                              double tol) {
    if (power < 0) fail("BadOperator", "range_on_window: power must be nonnegative");
    if (power == 0) return window_basis(w, tol);
    return range_of_sequence({fwd(op, power)}, w, tol);
}

SubspaceBasis kernel_of_adjoint(const StructuredOperator& op, const Window& w, double tol) {
    // Built-in adjoints are point-injective where nonzero, so the kernel on
    // the window span is exactly the set of annihilated basis points.
    std::vector<SparseVector> kept;
    std::vector<SparseVector> images;
    bool monomial = true;
    std::vector<LatticePoint> pts = w.points();
    for (const auto& p : pts) {
        SparseVector img = apply_adjoint(op, SparseVector::basis(p));
        if (img.size() > 1) monomial = false;
        images.push_back(std::move(img));
    }
    if (monomial) {
        for (size_t i = 0; i < pts.size(); ++i)
            if (images[i].empty()) kept.push_back(SparseVector::basis(pts[i]));
        return orthonormalize(w, kept, tol);
    }

    // Fallback for non-monomial adjoints: null space of the Gram matrix of
    // the adjoint images.
    kernels::DenseMatrix g = kernels::cross_gram(images, images);
    auto eig = kernels::hermitian_eig(g);
    SubspaceBasis out;
    out.ambient = w;
    out.tol = tol;
    for (int j = 0; j < eig.vectors.cols; ++j) {
        if (eig.values[j] > tol * tol) continue;
        SparseVector dir;
        for (size_t i = 0; i < pts.size(); ++i)
            dir = dir.add_scaled(SparseVector::basis(pts[i]), eig.vectors.at(static_cast<int>(i), j));
        out.vectors.push_back(std::move(dir));
    }
    return out;
}

} // namespace wold
