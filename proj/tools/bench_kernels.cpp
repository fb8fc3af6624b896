// Timing comparison between the OpenMP kernels and their serial reference
// implementations: cross-Gram assembly, batch operator application and
// projection-residual sweeps.

#include <chrono>
#include <cstdio>
#include <random>

#include "wold/models.hpp"
#include "wold/subspace.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace wold;

namespace {

std::vector<SparseVector> random_family(std::mt19937& rng, const Window& w, int count, int fill) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    auto pts = w.points();
    std::uniform_int_distribution<size_t> pick(0, pts.size() - 1);
    std::vector<SparseVector> out;
    for (int i = 0; i < count; ++i) {
        std::vector<SparseVector::Entry> terms;
        for (int j = 0; j < fill; ++j) terms.emplace_back(pts[pick(rng)], cplx(amp(rng), amp(rng)));
        out.push_back(SparseVector::from_terms(std::move(terms)));
    }
    return out;
}

template <typename F>
double time_ms(F&& fn, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled (serial build)\n");
#endif
    std::printf("%-28s %8s %12s %12s %8s\n", "kernel", "size", "serial ms", "parallel ms",
                "speedup");

    std::mt19937 rng(12345);
    Lattice lat = Lattice::single({AxisKind::HalfLine, AxisKind::FullLine});
    Window w = Window::uniform(lat, 16);

    for (int k : {64, 128, 256}) {
        auto A = random_family(rng, w, k, 24);
        auto B = random_family(rng, w, k, 24);
        double ser = time_ms([&] { kernels::cross_gram_serial(A, B); }, 3);
        double par = time_ms([&] { kernels::cross_gram(A, B); }, 3);
        std::printf("%-28s %8d %12.3f %12.3f %8.2f\n", "cross_gram", k, ser, par, ser / par);
    }

    auto pair = models::diagonal_times_shift_pair(WeightRule::geometric(1, 10));
    Window w2 = Window::uniform(pair[0].lattice(), 24);
    for (int k : {2000, 8000}) {
        auto vs = random_family(rng, w2, k, 4);
        OpSequence word = {fwd(pair[0], 2), fwd(pair[1], 3), adj(pair[0], 1)};
        double ser = time_ms([&] { apply_sequence_batch_serial(word, vs); }, 5);
        double par = time_ms([&] { apply_sequence_batch(word, vs); }, 5);
        std::printf("%-28s %8d %12.3f %12.3f %8.2f\n", "apply_sequence_batch", k, ser, par,
                    ser / par);
    }

    {
        auto basis = orthonormalize(w2, random_family(rng, w2, 64, 3), 1e-10);
        auto vs = random_family(rng, w2, 4000, 4);
        double ser = time_ms([&] { projection_residuals_serial(vs, basis); }, 5);
        double par = time_ms([&] { projection_residuals(vs, basis); }, 5);
        std::printf("%-28s %8d %12.3f %12.3f %8.2f\n", "projection_residuals", 4000, ser, par,
                    ser / par);
    }
    return 0;
}
