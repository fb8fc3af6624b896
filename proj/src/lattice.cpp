#include "wold/lattice.hpp"

namespace wold {

void Lattice::validate() const {
    if (blocks.empty()) fail("BadLattice", "lattice needs at least one block");
    for (const auto& b : blocks)
        if (b.axes.empty()) fail("BadLattice", "every block needs at least one axis");
}

Lattice Lattice::single(std::vector<AxisKind> axes) {
    Lattice lat;
    lat.blocks.push_back(Block{std::move(axes)});
    lat.validate();
    return lat;
}

Lattice Lattice::block_lattice(int block) const {
    Lattice lat;
    lat.blocks.push_back(blocks.at(static_cast<size_t>(block)));
    return lat;
}

namespace {

// [lo, hi] coordinate range of one axis, empty when depth < 0.
std::pair<int, int> axis_range(AxisKind kind, int depth) {
    if (kind == AxisKind::HalfLine) return {0, depth};
    return {-depth, depth};
}

} // namespace

Window Window::uniform(const Lattice& lat, int depth, int guard) {
    lat.validate();
    if (depth < 0) fail("BadWindow", "depth must be nonnegative");
    Window w;
    w.lattice = lat;
    w.depths.resize(lat.blocks.size());
    for (size_t b = 0; b < lat.blocks.size(); ++b)
        w.depths[b].assign(lat.blocks[b].axes.size(), depth);
    w.guard = guard;
    if (w.guard < 0) w.guard = 4 * w.max_axis_steps() + 8;
    return w;
}

bool Window::contains(const LatticePoint& p) const {
    if (p.block < 0 || p.block >= lattice.block_count()) return false;
    const auto& axes = lattice.blocks[p.block].axes;
    if (p.coords.size() != axes.size()) return false;
    for (size_t a = 0; a < axes.size(); ++a) {
        auto [lo, hi] = axis_range(axes[a], depths[p.block][a]);
        if (p.coords[a] < lo || p.coords[a] > hi) return false;
    }
    return true;
}

long long Window::cardinality() const {
    long long total = 0;
    for (int b = 0; b < lattice.block_count(); ++b) {
        long long prod = 1;
        for (size_t a = 0; a < lattice.blocks[b].axes.size(); ++a) {
            auto [lo, hi] = axis_range(lattice.blocks[b].axes[a], depths[b][a]);
            if (hi < lo) { prod = 0; break; }
            prod *= hi - lo + 1;
        }
        total += prod;
    }
    return total;
}

std::vector<LatticePoint> Window::points() const {
    std::vector<LatticePoint> out;
    out.reserve(static_cast<size_t>(cardinality()));
    for (int b = 0; b < lattice.block_count(); ++b) {
        const auto& axes = lattice.blocks[b].axes;
        const int n = static_cast<int>(axes.size());
        std::vector<int> lo(n), hi(n);
        bool empty = false;
        for (int a = 0; a < n; ++a) {
            auto [l, h] = axis_range(axes[a], depths[b][a]);
            lo[a] = l; hi[a] = h;
            if (h < l) empty = true;
        }
        if (empty) continue;
        LatticePoint p{b, lo};
        while (true) {
            out.push_back(p);
            int a = n - 1;
            while (a >= 0) {
                if (++p.coords[a] <= hi[a]) break;
                p.coords[a] = lo[a];
                --a;
            }
            if (a < 0) break;
        }
    }
    return out;
}

Window Window::inflated(int extra) const {
    if (extra < 0) extra = 0;
    if (extra > guard)
        fail("GuardTooSmall",
             "requested inflation " + std::to_string(extra) + " exceeds guard margin " +
                 std::to_string(guard));
    Window w = *this;
    for (auto& blk : w.depths)
        for (auto& d : blk) d += extra;
    return w;
}

Window Window::interior_halfline(int margin) const {
    Window w = *this;
    for (int b = 0; b < lattice.block_count(); ++b)
        for (size_t a = 0; a < lattice.blocks[b].axes.size(); ++a)
            if (lattice.blocks[b].axes[a] == AxisKind::HalfLine) w.depths[b][a] -= margin;
    return w;
}

Window Window::shrunk(int margin) const {
    Window w = *this;
    for (auto& blk : w.depths)
        for (auto& d : blk) d -= margin;
    return w;
}

std::pair<int, int> Window::axis_bounds(int block, int axis) const {
    return axis_range(lattice.blocks[block].axes[static_cast<size_t>(axis)],
                      depths[block][static_cast<size_t>(axis)]);
}

int Window::max_axis_steps() const {
    int steps = 0;
    for (int b = 0; b < lattice.block_count(); ++b)
        for (size_t a = 0; a < lattice.blocks[b].axes.size(); ++a) {
            auto [lo, hi] = axis_range(lattice.blocks[b].axes[a], depths[b][a]);
            if (hi >= lo) steps = std::max(steps, hi - lo + 1);
        }
    return steps;
}

} // namespace wold
