#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "wold/common.hpp"

namespace wold {

/// Axis of a sequence-space index lattice: Z_+ (half line) or Z (full line).
enum class AxisKind { HalfLine, FullLine };

struct Block {
    std::vector<AxisKind> axes;

    auto operator<=>(const Block&) const = default;
};

/// Index set of the ambient sequence space: a finite direct sum of blocks,
/// each block a product of half-line / full-line axes.
struct Lattice {
    std::vector<Block> blocks;

    int block_count() const { return static_cast<int>(blocks.size()); }
    int axis_count(int block) const { return static_cast<int>(blocks[block].axes.size()); }

    /// At least one block, each with at least one axis.
    void validate() const;

    /// Single-block lattice with the given axis kinds.
    static Lattice single(std::vector<AxisKind> axes);

    /// Sub-lattice consisting of one block.
    Lattice block_lattice(int block) const;

    auto operator<=>(const Lattice&) const = default;
};

/// One point of the lattice: block id plus integer coordinates, one per axis.
/// Half-line coordinates are >= 0.
struct LatticePoint {
    int block = 0;
    std::vector<int> coords;

    auto operator<=>(const LatticePoint&) const = default;
};

/// Finite truncation of the lattice. A half-line axis of depth D covers [0, D],
/// a full-line axis covers [-D, D]. Negative depth marks an empty axis (used by
/// interior windows). `guard` bounds how far the window may be inflated for
/// boundary-exact operator application.
struct Window {
    Lattice lattice;
    std::vector<std::vector<int>> depths; // per block, per axis
    int guard = 0;

    static Window uniform(const Lattice& lat, int depth, int guard = -1);

    bool contains(const LatticePoint& p) const;
    long long cardinality() const;

    /// Deterministic enumeration: blocks ascending, coordinates lexicographic.
    std::vector<LatticePoint> points() const;

    /// All depths grown by `extra`; throws GuardTooSmall when extra > guard.
    Window inflated(int extra) const;

    /// Half-line depths reduced by `margin` (full-line axes untouched); the
    /// region at distance >= margin from the truncation edge of shift axes.
    Window interior_halfline(int margin) const;

    /// All depths reduced by `margin`.
    Window shrunk(int margin) const;

    /// Largest number of points on any single axis.
    int max_axis_steps() const;

    /// [lo, hi] coordinate range of one axis (hi < lo when empty).
    std::pair<int, int> axis_bounds(int block, int axis) const;

    bool same_geometry(const Window& other) const {
        return lattice == other.lattice && depths == other.depths;
    }
};

} // namespace wold
