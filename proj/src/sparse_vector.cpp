#include "wold/sparse_vector.hpp"

#include <algorithm>
#include <cmath>

namespace wold {

namespace {
constexpr double kDropThreshold = 1e-300;

bool negligible(cplx c) { return std::abs(c) < kDropThreshold; }
} // namespace

SparseVector SparseVector::from_terms(std::vector<Entry> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Entry& e) { return negligible(e.second); });
    SparseVector v;
    v.entries_ = std::move(out);
    return v;
}

double SparseVector::norm_sq() const {
    double s = 0.0;
    for (const auto& [p, a] : entries_) s += std::norm(a);
    return s;
}

double SparseVector::norm() const { return std::sqrt(norm_sq()); }

cplx SparseVector::at(const LatticePoint& p) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                               [](const Entry& e, const LatticePoint& q) { return e.first < q; });
    if (it != entries_.end() && it->first == p) return it->second;
    return {0.0, 0.0};
}

SparseVector SparseVector::scaled(cplx c) const {
    SparseVector v;
    if (negligible(c)) return v;
    v.entries_.reserve(entries_.size());
    for (const auto& [p, a] : entries_) {
        cplx s = a * c;
        if (!negligible(s)) v.entries_.emplace_back(p, s);
    }
    return v;
}

SparseVector SparseVector::add_scaled(const SparseVector& other, cplx c) const {
    if (negligible(c)) return *this;
    SparseVector v;
    v.entries_.reserve(entries_.size() + other.entries_.size());
    auto ia = entries_.begin();
    auto ib = other.entries_.begin();
    while (ia != entries_.end() || ib != other.entries_.end()) {
        if (ib == other.entries_.end() || (ia != entries_.end() && ia->first < ib->first)) {
            v.entries_.push_back(*ia++);
        } else if (ia == entries_.end() || ib->first < ia->first) {
            cplx s = ib->second * c;
            if (!negligible(s)) v.entries_.emplace_back(ib->first, s);
            ++ib;
        } else {
            cplx s = ia->second + ib->second * c;
            if (!negligible(s)) v.entries_.emplace_back(ia->first, s);
            ++ia;
            ++ib;
        }
    }
    return v;
}

bool SparseVector::supported_in(const Window& w) const {
    for (const auto& [p, a] : entries_)
        if (!w.contains(p)) return false;
    return true;
}

cplx inner(const SparseVector& u, const SparseVector& v) {
    cplx s{0.0, 0.0};
    auto iu = u.entries().begin();
    auto iv = v.entries().begin();
    while (iu != u.entries().end() && iv != v.entries().end()) {
        if (iu->first < iv->first)
            ++iu;
        else if (iv->first < iu->first)
            ++iv;
        else {
            s += iu->second * std::conj(iv->second);
            ++iu;
            ++iv;
        }
    }
    return s;
}

SparseVector make_sorted_unchecked(std::vector<SparseVector::Entry> entries) {
    SparseVector v;
    v.entries_ = std::move(entries);
    return v;
}

} // namespace wold
