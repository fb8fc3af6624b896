#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wold/subspace.hpp"

using namespace wold;

namespace {

const double kTol = 1e-10;

Window halfline_window(int depth) {
    return Window::uniform(Lattice::single({AxisKind::HalfLine}), depth);
}

SparseVector e(int k) { return SparseVector::basis(LatticePoint{0, {k}}); }

SparseVector combo(std::initializer_list<std::pair<int, cplx>> terms) {
    std::vector<SparseVector::Entry> es;
    for (const auto& [k, a] : terms) es.emplace_back(LatticePoint{0, {k}}, a);
    return SparseVector::from_terms(std::move(es));
}

std::vector<SparseVector> random_vectors(std::mt19937& rng, const Window& w, int count,
                                         int fill) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    auto pts = w.points();
    std::uniform_int_distribution<size_t> pick(0, pts.size() - 1);
    std::vector<SparseVector> out;
    for (int i = 0; i < count; ++i) {
        std::vector<SparseVector::Entry> terms;
        for (int j = 0; j < fill; ++j)
            terms.emplace_back(pts[pick(rng)], cplx(amp(rng), amp(rng)));
        out.push_back(SparseVector::from_terms(std::move(terms)));
    }
    return out;
}

} // namespace

TEST_CASE("window cardinality and nesting") {
    Lattice lat;
    lat.blocks.push_back(Block{{AxisKind::HalfLine, AxisKind::FullLine}});
    lat.blocks.push_back(Block{{AxisKind::HalfLine}});
    Window w = Window::uniform(lat, 3);
    // (3+1)*(2*3+1) + (3+1)
    CHECK(w.cardinality() == 4 * 7 + 4);
    CHECK(w.points().size() == static_cast<size_t>(w.cardinality()));

    Window big = Window::uniform(lat, 5);
    for (const auto& p : w.points()) CHECK(big.contains(p));

    CHECK_THROWS_WITH_AS(Lattice::single({}), doctest::Contains("BadLattice"), Error);
}

TEST_CASE("orthonormalize keeps already orthonormal families") {
    Window w = halfline_window(5);
    auto b = orthonormalize(w, {e(0), e(1)}, kTol);
    CHECK(b.dim() == 2);
    CHECK(std::abs(inner(b.vectors[0], e(0)) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(inner(b.vectors[1], e(1)) - cplx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("orthonormalize collapses duplicates") {
    Window w = halfline_window(5);
    auto b = orthonormalize(w, {e(0), e(0)}, kTol);
    CHECK(b.dim() == 1);
}

TEST_CASE("orthonormalize rank decision matches the Gram eigenvalue oracle") {
    Window w = halfline_window(5);
    std::vector<SparseVector> family = {combo({{0, 1.0}, {1, 1.0}}),
                                        combo({{0, 1.0}, {1, -1.0}}), e(0)};
    // Independent oracle: eigenvalues of the 3x3 Gram matrix are {0, 2, 3}.
    oracle::Mat g(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g.at(i, j) = inner(family[static_cast<size_t>(i)], family[static_cast<size_t>(j)]);
    auto vals = oracle::eig_herm(g);
    REQUIRE(vals.size() == 3);
    CHECK(std::abs(vals[0]) < 1e-12);
    CHECK(vals[1] == doctest::Approx(2.0));
    CHECK(vals[2] == doctest::Approx(3.0));
    int oracle_rank = oracle::count_ge(vals, kTol);
    CHECK(oracle_rank == 2);

    auto b = orthonormalize(w, family, kTol);
    CHECK(b.dim() == oracle_rank);
    // Gram deviation stays within 10*tol.
    for (int i = 0; i < b.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j) {
            cplx g_ij = inner(b.vectors[static_cast<size_t>(i)], b.vectors[static_cast<size_t>(j)]);
            CHECK(std::abs(g_ij - (i == j ? cplx(1.0, 0.0) : cplx{})) < 10 * kTol);
        }
}

TEST_CASE("orthonormalize span contains every input within the rank threshold") {
    std::mt19937 rng(7);
    Window w = halfline_window(6);
    for (int round = 0; round < 10; ++round) {
        auto family = random_vectors(rng, w, 5, 3);
        auto b = orthonormalize(w, family, kTol);
        auto res = projection_residuals_serial(family, b);
        for (size_t i = 0; i < family.size(); ++i)
            CHECK(res[i] <= kTol * std::max(1.0, family[i].norm()) * 1.01);
    }
}

TEST_CASE("project onto a span") {
    Window w = halfline_window(5);
    auto s = orthonormalize(w, {e(0)}, kTol);

    SUBCASE("vector inside the span is fixed") {
        SparseVector v = e(0).scaled(cplx(0.3, -0.2));
        CHECK(project(v, s).add_scaled(v, cplx(-1.0, 0.0)).norm() < 10 * kTol);
    }
    SUBCASE("orthogonal vector maps to zero") {
        CHECK(project(e(3), s).norm() < 10 * kTol);
    }
    SUBCASE("coordinates in an orthonormal basis") {
        SparseVector v = combo({{0, 1.0}, {1, 1.0}});
        SparseVector p = project(v, s);
        CHECK(p.add_scaled(e(0), cplx(-1.0, 0.0)).norm() < 10 * kTol);
    }
    SUBCASE("idempotent") {
        std::mt19937 rng(3);
        auto vs = random_vectors(rng, w, 4, 4);
        auto basis = orthonormalize(w, random_vectors(rng, w, 3, 3), kTol);
        for (const auto& v : vs) {
            SparseVector p1 = project(v, basis);
            SparseVector p2 = project(p1, basis);
            CHECK(p2.add_scaled(p1, cplx(-1.0, 0.0)).norm() <= 10 * kTol * std::max(1.0, v.norm()));
        }
    }
    SUBCASE("linear") {
        std::mt19937 rng(11);
        auto basis = orthonormalize(w, random_vectors(rng, w, 3, 3), kTol);
        auto vs = random_vectors(rng, w, 2, 4);
        cplx a(0.7, -0.4), b(-1.3, 0.2);
        SparseVector lhs = project(vs[0].scaled(a).add_scaled(vs[1], b), basis);
        SparseVector rhs = project(vs[0], basis).scaled(a).add_scaled(project(vs[1], basis), b);
        double bound = 10 * kTol * (std::abs(a) * vs[0].norm() + std::abs(b) * vs[1].norm());
        CHECK(lhs.add_scaled(rhs, cplx(-1.0, 0.0)).norm() <= bound + 1e-14);
    }
}

TEST_CASE("intersect on coordinate spans") {
    Window w = halfline_window(5);
    auto A = orthonormalize(w, {e(0), e(1)}, kTol);
    auto B = orthonormalize(w, {e(1), e(2)}, kTol);
    auto I = intersect(A, B);
    REQUIRE(I.dim() == 1);
    auto target = orthonormalize(w, {e(1)}, kTol);
    CHECK(principal_angle_gap(I, target) < 10 * kTol);

    CHECK(intersect(A, A).dim() == A.dim());
}

TEST_CASE("intersect matches the joint-projection eigenvalue oracle") {
    Window w = halfline_window(5);
    auto A = orthonormalize(w, {combo({{0, 1.0}, {1, 1.0}}), e(2)}, kTol);
    auto B = orthonormalize(w, {combo({{0, 1.0}, {1, -1.0}}), e(2)}, kTol);

    // Oracle: eigenvalues of P_A P_B P_A; the intersection dimension counts
    // eigenvalues >= 1 - tol.
    auto pts = w.points();
    oracle::Mat pa = oracle::projector(oracle::coords_on(A.vectors, pts));
    oracle::Mat pb = oracle::projector(oracle::coords_on(B.vectors, pts));
    auto vals = oracle::eig_herm(oracle::mul(oracle::mul(pa, pb), pa));
    int expected_dim = oracle::count_ge(vals, 1.0 - kTol);
    CHECK(expected_dim == 1);

    auto I = intersect(A, B);
    REQUIRE(I.dim() == expected_dim);
    auto target = orthonormalize(w, {e(2)}, kTol);
    CHECK(principal_angle_gap(I, target) < 10 * kTol);

    // Symmetry of the intersection.
    CHECK(principal_angle_gap(intersect(A, B), intersect(B, A)) < 10 * kTol);
}

TEST_CASE("intersect rejects mismatched windows") {
    auto A = orthonormalize(halfline_window(5), {e(0)}, kTol);
    auto B = orthonormalize(halfline_window(6), {e(0)}, kTol);
    CHECK_THROWS_WITH_AS(intersect(A, B), doctest::Contains("WindowMismatch"), Error);
}

TEST_CASE("complement_within on coordinate spans") {
    Window w = halfline_window(5);
    auto A = orthonormalize(w, {e(0), e(1), e(2)}, kTol);
    auto B = orthonormalize(w, {e(1)}, kTol);
    auto C = complement_within(A, B);
    REQUIRE(C.dim() == 2);
    auto target = orthonormalize(w, {e(0), e(2)}, kTol);
    CHECK(principal_angle_gap(C, target) < 10 * kTol);

    CHECK(complement_within(A, A).dim() == 0);
}

TEST_CASE("complement_within against the adjoint-shift kernel oracle") {
    // A = whole depth-4 window, B = shift image inside the window; the
    // complement should be exactly the kernel of the adjoint shift.
    Window w = halfline_window(4);
    Lattice lat = Lattice::single({AxisKind::HalfLine});
    auto shift = StructuredOperator::unilateral_shift(lat, 0, WeightRule::ones());

    auto A = window_basis(w, kTol);
    auto B = range_on_window(shift, 1, w, kTol);
    auto C = complement_within(A, B);

    // Oracle: null space dimension of the 5x5 adjoint window matrix.
    oracle::Mat s_adj = oracle::window_matrix({adj(shift, 1)}, w);
    auto vals = oracle::eig_herm(oracle::mul(oracle::herm(s_adj), s_adj));
    int null_dim = static_cast<int>(vals.size()) - oracle::count_ge(vals, kTol);
    CHECK(null_dim == 1);

    REQUIRE(C.dim() == null_dim);
    auto target = orthonormalize(w, {e(0)}, kTol);
    CHECK(principal_angle_gap(C, target) < 10 * kTol);
}

TEST_CASE("complement_within rejects non-subspaces") {
    Window w = halfline_window(5);
    auto A = orthonormalize(w, {e(0), e(1)}, kTol);
    auto B = orthonormalize(w, {e(3)}, kTol);
    CHECK_THROWS_WITH_AS(complement_within(A, B), doctest::Contains("NotASubspace"), Error);
}

TEST_CASE("principal_angle_gap basics") {
    Window w = halfline_window(5);
    auto A = orthonormalize(w, {e(0), combo({{1, 1.0}, {2, cplx(0.0, 1.0)}})}, kTol);
    CHECK(principal_angle_gap(A, A) < 10 * kTol);

    auto B = orthonormalize(w, {e(3)}, kTol);
    auto C = orthonormalize(w, {e(4)}, kTol);
    CHECK(principal_angle_gap(B, C) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("principal_angle_gap 45-degree geometry") {
    Window w = halfline_window(5);
    auto A = orthonormalize(w, {e(0)}, kTol);
    auto B = orthonormalize(w, {combo({{0, 1.0}, {1, 1.0}})}, kTol);
    // dist(e0, span{(e0+e1)/sqrt(2)}) = 1/sqrt(2), by explicit 2-d geometry.
    CHECK(principal_angle_gap(A, B) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("dimension formula dim(A^B) + dim(A+B) = dim A + dim B") {
    std::mt19937 rng(2024);
    Window w = halfline_window(5);
    for (int round = 0; round < 12; ++round) {
        auto A = orthonormalize(w, random_vectors(rng, w, 3, 2), kTol);
        auto B = orthonormalize(w, random_vectors(rng, w, 3, 2), kTol);
        auto I = intersect(A, B);
        auto S = sum_basis(A, B);
        CHECK(I.dim() + S.dim() == A.dim() + B.dim());
    }
}

TEST_CASE("double complement projects back") {
    Window w = halfline_window(5);
    auto A = orthonormalize(w, {e(0), e(1), e(2)}, kTol);
    auto B = orthonormalize(w, {combo({{0, 1.0}, {1, 1.0}})}, kTol);
    auto C = complement_within(A, complement_within(A, B));
    // B is inside A here, so the double complement recovers B.
    CHECK(principal_angle_gap(C, B) < 10 * kTol);
}

TEST_CASE("restrict_to_window keeps the inner part of a span") {
    Window w = halfline_window(6);
    Window inner_w = halfline_window(2);
    auto A = orthonormalize(w, {e(0), e(4)}, kTol);
    auto R = restrict_to_window(A, inner_w);
    REQUIRE(R.dim() == 1);
    CHECK(R.vectors[0].entries().front().first == LatticePoint{0, {0}});
}
