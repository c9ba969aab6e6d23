#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>

#include "westervelt/field.hpp"
#include "westervelt/grid.hpp"

using namespace westervelt;
using Catch::Approx;

TEST_CASE("build_grid counts and classification") {
    const Grid g = build_grid(1.0, 1.0, 3, 3);
    REQUIRE(g.size() == 9);
    REQUIRE(g.boundary_count() == 8);
    int interior = 0;
    for (int n = 0; n < 9; ++n)
        if (g.is_interior(n)) ++interior;
    REQUIRE(interior == 1);
    REQUIRE(g.is_interior(g.idx(1, 1)));
}

TEST_CASE("build_grid rejects bad arguments") {
    REQUIRE_THROWS_AS(build_grid(1.0, 1.0, 2, 5), DimensionError);
    REQUIRE_THROWS_AS(build_grid(1.0, 1.0, 5, 2), DimensionError);
    REQUIRE_THROWS_AS(build_grid(0.0, 1.0, 5, 5), DimensionError);
    REQUIRE_THROWS_AS(build_grid(1.0, -2.0, 5, 5), DimensionError);
}

TEST_CASE("quadrature weights sum to area and perimeter") {
    const Grid g = build_grid(2.0, 1.0, 5, 3);
    REQUIRE(g.hx() == Approx(0.5).margin(1e-15));
    REQUIRE(g.hy() == Approx(0.5).margin(1e-15));
    double area = 0.0;
    for (int n = 0; n < static_cast<int>(g.size()); ++n) area += g.area_weight(n);
    REQUIRE(area == Approx(2.0).epsilon(1e-12));
    double per = 0.0;
    for (size_t b = 0; b < g.boundary_count(); ++b) per += g.boundary_weight(static_cast<int>(b));
    REQUIRE(per == Approx(6.0).epsilon(1e-12));

    const Grid fine = build_grid(1.0, 1.0, 65, 65);
    double a2 = 0.0;
    for (int n = 0; n < static_cast<int>(fine.size()); ++n) a2 += fine.area_weight(n);
    REQUIRE(a2 == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("outward normals") {
    const Grid g = build_grid(1.0, 1.0, 5, 5);
    for (const auto& bn : g.boundary()) {
        const double len = std::hypot(bn.normal.x, bn.normal.y);
        REQUIRE(len == Approx(1.0).margin(1e-15));
        const auto [i, j] = g.ij(bn.flat);
        const bool corner = (i == 0 || i == 4) && (j == 0 || j == 4);
        if (corner) {
            REQUIRE(std::abs(bn.normal.x) == Approx(std::abs(bn.normal.y)).margin(1e-15));
        } else {
            REQUIRE((bn.normal.x == 0.0 || bn.normal.y == 0.0));
        }
    }
    // lower-left corner points outward on the diagonal
    const auto& c00 = g.boundary()[0];
    REQUIRE(c00.normal.x < 0.0);
    REQUIRE(c00.normal.y < 0.0);
}

TEST_CASE("node index bijection") {
    const Grid g = build_grid(1.5, 0.7, 7, 9);
    std::set<int> seen;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const int n = g.idx(i, j);
            REQUIRE(seen.insert(n).second);
            const auto p = g.ij(n);
            REQUIRE(p[0] == i);
            REQUIRE(p[1] == j);
        }
    }
    REQUIRE(seen.size() == g.size());
}

TEST_CASE("integrate_interior on simple integrands") {
    const Grid g = build_grid(1.0, 1.0, 33, 33);
    ComplexField one(g.size(), cplx{1.0, 0.0});
    REQUIRE(std::abs(integrate_interior(g, one) - cplx(1.0, 0.0)) < 1e-12);

    ComplexField fx(g.size());
    for (size_t n = 0; n < g.size(); ++n) fx[n] = g.coords(static_cast<int>(n))[0];
    REQUIRE(integrate_interior(g, fx).real() == Approx(0.5).margin(1e-12));

    ComplexField bad(g.size() - 1);
    REQUIRE_THROWS_AS(integrate_interior(g, bad), ShapeMismatchError);
}

TEST_CASE("integrate_interior of sin(pi x) sin(pi y)") {
    const Grid g = build_grid(1.0, 1.0, 129, 129);
    ComplexField f(g.size());
    for (size_t n = 0; n < g.size(); ++n) {
        const auto [x, y] = g.coords(static_cast<int>(n));
        f[n] = std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
    }
    const double exact = 4.0 / (std::numbers::pi * std::numbers::pi);
    REQUIRE(integrate_interior(g, f).real() == Approx(exact).margin(1e-4));
}

TEST_CASE("integrate_boundary") {
    const Grid sq = build_grid(1.0, 1.0, 21, 21);
    std::vector<cplx> one(sq.boundary_count(), cplx{1.0, 0.0});
    REQUIRE(std::abs(integrate_boundary(sq, one) - cplx(4.0, 0.0)) < 1e-12);

    const Grid rect = build_grid(2.0, 1.0, 21, 11);
    std::vector<cplx> imag(rect.boundary_count(), cplx{0.0, 1.0});
    REQUIRE(std::abs(integrate_boundary(rect, imag) - cplx(0.0, 6.0)) < 1e-12);

    std::vector<cplx> fx(sq.boundary_count());
    for (size_t b = 0; b < fx.size(); ++b) fx[b] = sq.coords(sq.boundary()[b].flat)[0];
    REQUIRE(integrate_boundary(sq, fx).real() == Approx(2.0).margin(1e-10));

    std::vector<cplx> bad(3);
    REQUIRE_THROWS_AS(integrate_boundary(sq, bad), ShapeMismatchError);
}

TEST_CASE("refinement consistency of the area quadrature") {
    auto integrate_resolution = [](int n) {
        const Grid g = build_grid(1.0, 1.0, n, n);
        ComplexField f(g.size());
        for (size_t i = 0; i < g.size(); ++i) {
            const auto [x, y] = g.coords(static_cast<int>(i));
            f[i] = std::exp(x) * std::cos(2.0 * y) + std::sin(3.0 * x * y);
        }
        return integrate_interior(g, f).real();
    };
    const double ref = integrate_resolution(513);
    const double e1 = std::abs(integrate_resolution(33) - ref);
    const double e2 = std::abs(integrate_resolution(65) - ref);
    REQUIRE(e1 / e2 == Approx(4.0).margin(1.0));
}

TEST_CASE("boundary arclength walks the perimeter") {
    const Grid g = build_grid(2.0, 1.0, 9, 5);
    REQUIRE(g.arclength(0) == Approx(0.0));
    double prev = -1.0;
    for (size_t b = 0; b < g.boundary_count(); ++b) {
        const double s = g.arclength(static_cast<int>(b));
        REQUIRE(s > prev);
        REQUIRE(s < g.perimeter());
        prev = s;
    }
}
