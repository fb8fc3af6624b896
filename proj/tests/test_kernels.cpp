#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wold/models.hpp"
#include "wold/subspace.hpp"

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

} // namespace

TEST_CASE("parallel cross-Gram is bitwise identical to the serial reference") {
    std::mt19937 rng(31337);
    Lattice lat = Lattice::single({AxisKind::HalfLine, AxisKind::FullLine});
    Window w = Window::uniform(lat, 6);
    auto A = random_family(rng, w, 40, 6);
    auto B = random_family(rng, w, 35, 6);

    auto g_par = kernels::cross_gram(A, B);
    auto g_ser = kernels::cross_gram_serial(A, B);
    REQUIRE(g_par.rows == g_ser.rows);
    REQUIRE(g_par.cols == g_ser.cols);
    for (size_t k = 0; k < g_par.a.size(); ++k) CHECK(g_par.a[k] == g_ser.a[k]);
}

TEST_CASE("parallel batch application matches the serial reference exactly") {
    std::mt19937 rng(99);
    auto pair = models::diagonal_times_shift_pair(WeightRule::geometric(1, 10));
    Window w = Window::uniform(pair[0].lattice(), 6);
    auto vs = random_family(rng, w, 60, 5);
    OpSequence word = {fwd(pair[0], 2), adj(pair[1], 1)};

    auto par = apply_sequence_batch(word, vs);
    auto ser = apply_sequence_batch_serial(word, vs);
    REQUIRE(par.size() == ser.size());
    for (size_t i = 0; i < par.size(); ++i) {
        REQUIRE(par[i].size() == ser[i].size());
        for (size_t k = 0; k < par[i].entries().size(); ++k) {
            CHECK(par[i].entries()[k].first == ser[i].entries()[k].first);
            CHECK(par[i].entries()[k].second == ser[i].entries()[k].second);
        }
    }
}

TEST_CASE("parallel projection residual sweep matches the serial reference") {
    std::mt19937 rng(7);
    Lattice lat = Lattice::single({AxisKind::HalfLine});
    Window w = Window::uniform(lat, 12);
    auto basis = orthonormalize(w, random_family(rng, w, 6, 3), 1e-10);
    auto vs = random_family(rng, w, 50, 4);

    auto par = projection_residuals(vs, basis);
    auto ser = projection_residuals_serial(vs, basis);
    REQUIRE(par.size() == ser.size());
    for (size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
}

TEST_CASE("hermitian_eig recovers a known spectrum") {
    // Gram matrix of {e0+e1, e0-e1, e0} has eigenvalues {0, 2, 3}.
    kernels::DenseMatrix g(3, 3);
    g.at(0, 0) = 2.0; g.at(0, 1) = 0.0; g.at(0, 2) = 1.0;
    g.at(1, 0) = 0.0; g.at(1, 1) = 2.0; g.at(1, 2) = 1.0;
    g.at(2, 0) = 1.0; g.at(2, 1) = 1.0; g.at(2, 2) = 1.0;
    auto eig = kernels::hermitian_eig(g);
    REQUIRE(eig.values.size() == 3);
    CHECK(std::abs(eig.values[0]) < 1e-13);
    CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eig.values[2] == doctest::Approx(3.0).epsilon(1e-12));

    // Eigenvector columns reproduce H v = lambda v.
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            cplx hv{};
            for (int k = 0; k < 3; ++k) hv += g.at(i, k) * eig.vectors.at(k, j);
            CHECK(std::abs(hv - eig.values[static_cast<size_t>(j)] * eig.vectors.at(i, j)) <
                  1e-12);
        }
}

TEST_CASE("hermitian_eig handles complex off-diagonal entries") {
    kernels::DenseMatrix h(2, 2);
    h.at(0, 0) = 1.0;
    h.at(0, 1) = cplx(0.0, -1.0);
    h.at(1, 0) = cplx(0.0, 1.0);
    h.at(1, 1) = 1.0;
    auto eig = kernels::hermitian_eig(h);
    CHECK(eig.values[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-12));
}
