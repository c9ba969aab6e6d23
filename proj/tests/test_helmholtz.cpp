#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "westervelt/field.hpp"
#include "westervelt/helmholtz.hpp"
#include "westervelt/profiles.hpp"

using namespace westervelt;
using Catch::Approx;

namespace {

Medium constant_medium(const Grid& g, double alpha, double beta, double gamma, double lambda, double eta) {
    Medium m;
    m.alpha.assign(g.size(), alpha);
    m.beta.assign(g.size(), beta);
    m.gamma.assign(g.size(), gamma);
    m.lambda.assign(g.boundary_count(), lambda);
    m.eta.assign(g.boundary_count(), eta);
    return m;
}

/// Plane wave u = exp(i kappa . x) with mu |kappa|^2 = omega^2 (complex kappa).
struct PlaneWave {
    cplx kx, ky;
    cplx eval(double x, double y) const { return std::exp(cplx(0.0, 1.0) * (kx * x + ky * y)); }
};

PlaneWave make_plane_wave(double omega, cplx mu, double angle) {
    const cplx kmag = omega / std::sqrt(mu);
    return {kmag * std::cos(angle), kmag * std::sin(angle)};
}

/// Exact Robin datum of the plane wave: mu d_nu u - (i omega lambda - eta) u.
std::vector<cplx> robin_trace_of(const Grid& g, const Medium& m, const PlaneWave& pw, double omega) {
    std::vector<cplx> out(g.boundary_count());
    for (size_t b = 0; b < out.size(); ++b) {
        const auto& bn = g.boundary()[b];
        const auto [x, y] = g.coords(bn.flat);
        const cplx u = pw.eval(x, y);
        const cplx du = cplx(0.0, 1.0) * (pw.kx * bn.normal.x + pw.ky * bn.normal.y) * u;
        const cplx mu = cplx(m.gamma[bn.flat], -omega * m.beta[bn.flat]);
        out[b] = mu * du - cplx(-m.eta[b], omega * m.lambda[b]) * u;
    }
    return out;
}

double plane_wave_l2_error(int res, double omega, double beta) {
    const Grid g = build_grid(1.0, 1.0, res, res);
    const Medium m = constant_medium(g, 0.0, beta, 1.0, 1.0, 1.0);
    const cplx mu = cplx(1.0, -omega * beta);
    const PlaneWave pw = make_plane_wave(omega, mu, 0.53);
    auto [u, rep] = solve_fundamental(g, m, {robin_trace_of(g, m, pw, omega), omega});
    ComplexField err(g.size());
    for (size_t n = 0; n < g.size(); ++n) {
        const auto [x, y] = g.coords(static_cast<int>(n));
        err[n] = u[n] - pw.eval(x, y);
    }
    ComplexField exact(g.size());
    for (size_t n = 0; n < g.size(); ++n) {
        const auto [x, y] = g.coords(static_cast<int>(n));
        exact[n] = pw.eval(x, y);
    }
    return l2_norm(g, err) / l2_norm(g, exact);
}

}  // namespace

TEST_CASE("operator rows on constant fields") {
    const Grid g = build_grid(1.0, 1.0, 17, 17);
    const Medium m = constant_medium(g, 0.1, 0.2, 1.3, 1.1, 0.7);
    const double omega = 12.0;
    const int k = 3;
    const SparseMatrix a = assemble_harmonic_operator(g, m, k, omega);
    const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(g.size()));
    const Eigen::VectorXcd r = a.eigen() * ones;
    const double kw = k * omega;
    for (int n = 0; n < static_cast<int>(g.size()); ++n) {
        if (g.is_interior(n)) {
            REQUIRE(std::abs(r[n] - cplx(kw * kw, 0.0)) < 1e-9);
        } else {
            const int b = g.boundary_index_of(n);
            const cplx want = -cplx(-m.eta[b], kw * m.lambda[b]);
            REQUIRE(std::abs(r[n] - want) < 1e-9);
        }
    }
}

TEST_CASE("harmonic index enters only the zero-order and Robin terms when beta = 0") {
    const Grid g = build_grid(1.0, 1.0, 9, 9);
    Medium m = constant_medium(g, 0.0, 0.0, 1.0, 1.0, 1.0);  // beta = 0: stencil probe only
    for (size_t n = 0; n < g.size(); ++n) m.gamma[n] = 1.0 + 0.2 * std::sin(3.0 * static_cast<double>(n));
    const double omega = 10.0;
    const auto a1 = detail::assemble_harmonic_operator_unchecked(g, m, 1, omega);
    const auto a2 = detail::assemble_harmonic_operator_unchecked(g, m, 2, omega);
    Eigen::SparseMatrix<cplx> diff = a2.eigen() - a1.eigen();
    diff.prune([](int, int, const cplx& v) { return std::abs(v) > 0.0; });
    for (int c = 0; c < diff.outerSize(); ++c)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(diff, c); it; ++it)
            REQUIRE(it.row() == it.col());
}

TEST_CASE("homogeneous fundamental problem is identically zero") {
    const Grid g = build_grid(1.0, 1.0, 17, 17);
    const Medium m = constant_medium(g, 0.0, 0.1, 1.0, 1.0, 1.0);
    auto [u, rep] = solve_fundamental(g, m, {std::vector<cplx>(g.boundary_count(), cplx{}), 30.0});
    for (const auto& v : u) REQUIRE(v == cplx{0.0, 0.0});
}

TEST_CASE("manufactured plane wave converges at second order") {
    const double omega = 18.0, beta = 0.25;
    const double e1 = plane_wave_l2_error(33, omega, beta);
    const double e2 = plane_wave_l2_error(65, omega, beta);
    const double e3 = plane_wave_l2_error(129, omega, beta);
    REQUIRE(e1 / e2 == Approx(4.0).margin(0.8));
    REQUIRE(e2 / e3 == Approx(4.0).margin(0.8));
    REQUIRE(e3 < 1e-3);
}

TEST_CASE("solve_harmonic zero cases") {
    const Grid g = build_grid(1.0, 1.0, 17, 17);
    const Medium m = constant_medium(g, 0.3, 0.1, 1.0, 1.0, 1.0);
    auto [u, rep] = solve_harmonic(g, m, 2, 25.0, zero_field(g));
    for (const auto& v : u) REQUIRE(v == cplx{0.0, 0.0});

    const Medium m0 = constant_medium(g, 0.0, 0.1, 1.0, 1.0, 1.0);
    const ComplexField f = interior_bump(g);
    auto [u0, rep0] = solve_harmonic(g, m0, 2, 25.0, f);
    for (const auto& v : u0) REQUIRE(v == cplx{0.0, 0.0});  // alpha = 0 kills the source
}

TEST_CASE("solve_auxiliary matches the fundamental solve at doubled frequency") {
    const Grid g = build_grid(1.0, 1.0, 33, 33);
    const Medium m = constant_medium(g, 0.1, 0.08, 1.1, 1.2, 0.9);
    const double omega = 21.0;
    const std::vector<cplx> h = boundary_mode(g, BoundaryModeKind::cosine, 2, 1.5);

    auto [v, repv] = solve_auxiliary(g, m, omega, h);
    std::vector<cplx> neg(h.size());
    for (size_t b = 0; b < h.size(); ++b) neg[b] = -h[b];
    auto [w, repw] = solve_fundamental(g, m, {neg, 2.0 * omega});
    for (size_t n = 0; n < g.size(); ++n) REQUIRE(std::abs(v[n] - w[n]) < 1e-12);

    // h = 0 gives the zero field
    auto [z, repz] = solve_auxiliary(g, m, omega, std::vector<cplx>(h.size(), cplx{}));
    for (const auto& val : z) REQUIRE(val == cplx{0.0, 0.0});
}

TEST_CASE("solve_auxiliary is linear in the datum") {
    const Grid g = build_grid(1.0, 1.0, 25, 25);
    const Medium m = constant_medium(g, 0.0, 0.1, 1.0, 1.0, 1.0);
    const double omega = 15.0;
    const auto h1 = boundary_mode(g, BoundaryModeKind::cosine, 1);
    const auto h2 = boundary_mode(g, BoundaryModeKind::sine, 2, 0.7);
    std::vector<cplx> sum(h1.size());
    for (size_t b = 0; b < sum.size(); ++b) sum[b] = h1[b] + h2[b];

    auto [v1, r1] = solve_auxiliary(g, m, omega, h1);
    auto [v2, r2] = solve_auxiliary(g, m, omega, h2);
    auto [vs, rs] = solve_auxiliary(g, m, omega, sum);
    double num = 0.0, den = 0.0;
    for (size_t n = 0; n < g.size(); ++n) {
        num += std::norm(vs[n] - v1[n] - v2[n]);
        den += std::norm(vs[n]);
    }
    REQUIRE(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("robin_to_neumann_trace") {
    const Grid g = build_grid(1.0, 1.0, 33, 33);
    const Medium m = constant_medium(g, 0.0, 0.15, 1.0, 1.0, 1.0);
    const double omega = 14.0;

    SECTION("zero field, zero datum") {
        const auto tr = robin_to_neumann_trace(g, m, 1, omega, zero_field(g),
                                               std::vector<cplx>(g.boundary_count(), cplx{}));
        for (const auto& v : tr) REQUIRE(v == cplx{0.0, 0.0});
    }

    SECTION("linearity under scaling") {
        const auto gb = boundary_mode(g, BoundaryModeKind::cosine, 1);
        auto [u, rep] = solve_fundamental(g, m, {gb, omega});
        const auto t1 = robin_to_neumann_trace(g, m, 1, omega, u, gb);
        ComplexField cu(u.size());
        std::vector<cplx> cg(gb.size());
        const cplx c{2.0, -1.0};
        for (size_t n = 0; n < u.size(); ++n) cu[n] = c * u[n];
        for (size_t b = 0; b < gb.size(); ++b) cg[b] = c * gb[b];
        const auto t2 = robin_to_neumann_trace(g, m, 1, omega, cu, cg);
        for (size_t b = 0; b < t1.size(); ++b) REQUIRE(std::abs(t2[b] - c * t1[b]) < 1e-12);
    }

    SECTION("manufactured normal derivative converges") {
        auto trace_error = [&](int res) {
            const Grid gr = build_grid(1.0, 1.0, res, res);
            const Medium mr = constant_medium(gr, 0.0, 0.25, 1.0, 1.0, 1.0);
            const cplx mu = cplx(1.0, -omega * 0.25);
            const PlaneWave pw = make_plane_wave(omega, mu, 0.3);
            const auto gb = robin_trace_of(gr, mr, pw, omega);
            auto [u, rep] = solve_fundamental(gr, mr, {gb, omega});
            const auto tr = robin_to_neumann_trace(gr, mr, 1, omega, u, gb);
            double emax = 0.0;
            for (size_t b = 0; b < tr.size(); ++b) {
                const auto& bn = gr.boundary()[b];
                const auto [x, y] = gr.coords(bn.flat);
                const cplx exact =
                    cplx(0.0, 1.0) * (pw.kx * bn.normal.x + pw.ky * bn.normal.y) * pw.eval(x, y);
                emax = std::max(emax, std::abs(tr[b] - exact));
            }
            return emax;
        };
        const double c1 = trace_error(33);
        const double c2 = trace_error(65);
        REQUIRE(c2 < c1 / 1.8);  // at least first-order decay at the boundary
    }
}

TEST_CASE("discrete energy identity of the fundamental solve") {
    const Grid g = build_grid(1.0, 1.0, 65, 65);
    const double omega = 15.0;
    const Medium m = constant_medium(g, 0.0, 0.3, 1.0, 1.0, 1.0);
    const auto gb = boundary_mode(g, BoundaryModeKind::cosine, 1);
    auto [u, rep] = solve_fundamental(g, m, {gb, omega});

    const Gradient gr = gradient(g, u);
    double lhs = 0.0;
    for (size_t n = 0; n < g.size(); ++n)
        lhs += g.area_weight(static_cast<int>(n)) * m.beta[n] *
               (std::norm(gr.gx[n]) + std::norm(gr.gy[n]));
    for (size_t b = 0; b < g.boundary_count(); ++b)
        lhs += g.boundary_weight(static_cast<int>(b)) * m.lambda[b] * std::norm(u[g.boundary()[b].flat]);
    lhs *= omega;

    cplx pairing{};
    for (size_t b = 0; b < g.boundary_count(); ++b)
        pairing += g.boundary_weight(static_cast<int>(b)) * gb[b] * std::conj(u[g.boundary()[b].flat]);
    const double rhs = -pairing.imag();

    const double h2 = g.hx() * g.hx();
    REQUIRE(std::abs(lhs - rhs) / std::abs(rhs) <= 10.0 * h2);
}

TEST_CASE("frequency scaling of the boundary-forced solve stays bounded") {
    const Grid g = build_grid(1.0, 1.0, 97, 97);
    const Medium m = constant_medium(g, 0.0, 0.01, 1.0, 6.0, 1.0);
    double lo = 1e300, hi = 0.0;
    for (double omega : {40.0, 80.0, 160.0}) {
        const auto gb = boundary_mode(g, BoundaryModeKind::cosine, 1);
        auto [u, rep] = solve_fundamental(g, m, {gb, omega});
        const double ratio = std::pow(omega, 1.5) * l2_norm(g, u) / boundary_l2_norm(g, gb);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    REQUIRE(hi / lo <= 3.0);
}

TEST_CASE("harmonic-index scaling of the interior-forced solve stays bounded") {
    const Grid g = build_grid(1.0, 1.0, 97, 97);
    const Medium m = constant_medium(g, 0.2, 0.05, 1.0, 1.0, 1.0);
    const ComplexField f = interior_bump(g);
    ComplexField af(g.size());
    for (size_t n = 0; n < g.size(); ++n) af[n] = m.alpha[n] * f[n];
    const double afn = l2_norm(g, af);
    double lo = 1e300, hi = 0.0;
    for (int k : {2, 4, 8}) {
        auto [u, rep] = solve_harmonic(g, m, k, 40.0, f);
        const double ratio = l2_norm(g, u) / afn;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    REQUIRE(hi / lo <= 3.0);
}

TEST_CASE("direct solves are bit-deterministic") {
    const Grid g = build_grid(1.0, 1.0, 33, 33);
    const Medium m = constant_medium(g, 0.0, 0.1, 1.0, 1.0, 1.0);
    const auto gb = boundary_mode(g, BoundaryModeKind::sine, 2);
    auto [u1, r1] = solve_fundamental(g, m, {gb, 44.0});
    auto [u2, r2] = solve_fundamental(g, m, {gb, 44.0});
    for (size_t n = 0; n < g.size(); ++n) {
        REQUIRE(u1[n].real() == u2[n].real());
        REQUIRE(u1[n].imag() == u2[n].imag());
    }
}

TEST_CASE("medium invariants are enforced") {
    const Grid g = build_grid(1.0, 1.0, 9, 9);
    Medium m = constant_medium(g, 0.0, 0.1, 1.0, 1.0, 1.0);
    m.beta[3] = 0.0;
    REQUIRE_THROWS_AS(assemble_harmonic_operator(g, m, 1, 10.0), InvariantViolationError);
    m.beta[3] = 0.1;
    m.alpha[0] = -0.2;
    REQUIRE_THROWS_AS(assemble_harmonic_operator(g, m, 1, 10.0), InvariantViolationError);
}
