#pragma once

#include <utility>
#include <vector>

#include "wold/lattice.hpp"

namespace wold {

/// Finitely supported vector on the lattice. Entries are kept sorted by point
/// with exact zeros (and magnitudes below 1e-300) dropped, so the norm is
/// computable exactly from the stored data.
class SparseVector {
public:
    using Entry = std::pair<LatticePoint, cplx>;

    SparseVector() = default;

    /// Builds from arbitrary (point, amplitude) terms; combines duplicates.
    static SparseVector from_terms(std::vector<Entry> terms);

    static SparseVector basis(LatticePoint p) {
        SparseVector v;
        v.entries_.emplace_back(std::move(p), cplx(1.0, 0.0));
        return v;
    }

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    size_t size() const { return entries_.size(); }
    bool is_monomial() const { return entries_.size() == 1; }

    double norm_sq() const;
    double norm() const;

    cplx at(const LatticePoint& p) const;

    SparseVector scaled(cplx c) const;

    /// this + c * other
    SparseVector add_scaled(const SparseVector& other, cplx c) const;

    bool supported_in(const Window& w) const;

private:
    std::vector<Entry> entries_;

    friend SparseVector make_sorted_unchecked(std::vector<Entry> entries);
};

/// <u, v> = sum over points of u_p * conj(v_p); linear in the first argument.
cplx inner(const SparseVector& u, const SparseVector& v);

/// Internal fast path: entries already sorted, unique, nonzero.
SparseVector make_sorted_unchecked(std::vector<SparseVector::Entry> entries);

} // namespace wold
