#ifndef WESTERVELT_HELMHOLTZ_HPP
#define WESTERVELT_HELMHOLTZ_HPP

#include <cmath>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "westervelt/field.hpp"
#include "westervelt/grid.hpp"
#include "westervelt/medium.hpp"
#include "westervelt/sparse.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

namespace detail {

/// One-sided second-order normal-derivative stencil at a boundary node.
/// Corner nodes combine both axis stencils through the averaged normal.
template <typename Emit>
void emit_normal_derivative(const Grid& g, const BoundaryNode& bn, Emit&& emit) {
    const auto [i, j] = g.ij(bn.flat);
    const int nx = g.nx(), ny = g.ny();
    const double hx = g.hx(), hy = g.hy();
    if (bn.normal.x != 0.0) {
        const double s = bn.normal.x;
        if (i == 0) {
            // d/dx u = (-3u0 + 4u1 - u2) / (2hx), outward is -x
            emit(g.idx(0, j), s * (-1.0) * (-3.0) / (2.0 * hx));
            emit(g.idx(1, j), s * (-1.0) * 4.0 / (2.0 * hx));
            emit(g.idx(2, j), s * (-1.0) * (-1.0) / (2.0 * hx));
        } else {
            emit(g.idx(nx - 1, j), s * 3.0 / (2.0 * hx));
            emit(g.idx(nx - 2, j), s * (-4.0) / (2.0 * hx));
            emit(g.idx(nx - 3, j), s * 1.0 / (2.0 * hx));
        }
    }
    if (bn.normal.y != 0.0) {
        const double s = bn.normal.y;
        if (j == 0) {
            emit(g.idx(i, 0), s * (-1.0) * (-3.0) / (2.0 * hy));
            emit(g.idx(i, 1), s * (-1.0) * 4.0 / (2.0 * hy));
            emit(g.idx(i, 2), s * (-1.0) * (-1.0) / (2.0 * hy));
        } else {
            emit(g.idx(i, ny - 1), s * 3.0 / (2.0 * hy));
            emit(g.idx(i, ny - 2), s * (-4.0) / (2.0 * hy));
            emit(g.idx(i, ny - 3), s * 1.0 / (2.0 * hy));
        }
    }
}

/// Part of the harmonic operator that is linear in the nodal field m:
/// interior rows carry the divergence-form stencil of div(m grad .) with
/// face-averaged m, boundary rows carry m(b) times the normal derivative.
inline void add_mu_part(SparseMatrix& a, const Grid& g, std::span<const cplx> m) {
    const int nx = g.nx(), ny = g.ny();
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const int n = g.idx(i, j);
            const cplx me = 0.5 * (m[n] + m[g.idx(i + 1, j)]);
            const cplx mw = 0.5 * (m[n] + m[g.idx(i - 1, j)]);
            const cplx mn = 0.5 * (m[n] + m[g.idx(i, j + 1)]);
            const cplx ms = 0.5 * (m[n] + m[g.idx(i, j - 1)]);
            a.add(n, g.idx(i + 1, j), me * ihx2);
            a.add(n, g.idx(i - 1, j), mw * ihx2);
            a.add(n, g.idx(i, j + 1), mn * ihy2);
            a.add(n, g.idx(i, j - 1), ms * ihy2);
            a.add(n, n, -(me + mw) * ihx2 - (mn + ms) * ihy2);
        }
    }
    for (const auto& bn : g.boundary()) {
        const cplx mb = m[bn.flat];
        emit_normal_derivative(g, bn, [&](int col, double w) { a.add(bn.flat, col, mb * w); });
    }
}

/// Assembly without medium validation; used directly only by tests probing
/// the stencil structure.
inline SparseMatrix assemble_harmonic_operator_unchecked(const Grid& g, const Medium& m, int k, double omega) {
    SparseMatrix a(static_cast<int>(g.size()));
    const ComplexField mu = mu_field(m, k, omega);
    add_mu_part(a, g, mu);
    const double kw = static_cast<double>(k) * omega;
    const cplx kw2 = cplx(kw * kw, 0.0);
    for (int n = 0; n < static_cast<int>(g.size()); ++n)
        if (g.is_interior(n)) a.add(n, n, kw2);
    for (size_t b = 0; b < g.boundary_count(); ++b) {
        const int n = g.boundary()[b].flat;
        // -(i k omega lambda - eta)
        a.add(n, n, -cplx(-m.eta[b], kw * m.lambda[b]));
    }
    a.finalize();
    return a;
}

}  // namespace detail

/// Discrete operator of the k-th harmonic problem:
///   (k omega)^2 u + div((gamma - i k omega beta) grad u)   in the interior,
///   mu_k d_nu u - (i k omega lambda - eta) u               on the boundary.
inline SparseMatrix assemble_harmonic_operator(const Grid& g, const Medium& m, int k, double omega) {
    if (k < 1) throw InvariantViolationError("harmonic index must satisfy k >= 1");
    if (!(omega > 0.0)) throw InvariantViolationError("omega must be positive");
    m.validate(g);
    return detail::assemble_harmonic_operator_unchecked(g, m, k, omega);
}

/// Right-hand side with the boundary datum g on Robin rows, zero inside.
inline std::vector<cplx> rhs_boundary(const Grid& grid, std::span<const cplx> gb) {
    if (gb.size() != grid.boundary_count()) throw ShapeMismatchError("boundary datum size mismatch");
    std::vector<cplx> rhs(grid.size(), cplx{0.0, 0.0});
    for (size_t b = 0; b < gb.size(); ++b) rhs[grid.boundary()[b].flat] = gb[b];
    return rhs;
}

/// Right-hand side (k omega)^2 2 alpha f at interior rows, homogeneous Robin rows.
inline std::vector<cplx> rhs_interior(const Grid& grid, const Medium& m, int k, double omega,
                                      std::span<const cplx> f) {
    if (f.size() != grid.size()) throw ShapeMismatchError("interior source size mismatch");
    const double kw = static_cast<double>(k) * omega;
    std::vector<cplx> rhs(grid.size(), cplx{0.0, 0.0});
    for (int n = 0; n < static_cast<int>(grid.size()); ++n)
        if (grid.is_interior(n)) rhs[n] = kw * kw * 2.0 * m.alpha[n] * f[n];
    return rhs;
}

/// Factorized harmonic operator for repeated solves at fixed (k, omega).
class HarmonicOperator {
public:
    HarmonicOperator(const Grid& g, const Medium& m, int k, double omega)
        : grid_(&g), medium_(&m), k_(k), omega_(omega),
          matrix_(assemble_harmonic_operator(g, m, k, omega)), fact_(matrix_) {}

    int k() const { return k_; }
    double omega() const { return omega_; }
    const SparseMatrix& matrix() const { return matrix_; }
    const Factorization& factorization() const { return fact_; }

    std::pair<ComplexField, SolveReport> solve_boundary(std::span<const cplx> gb) const {
        return fact_.solve(rhs_boundary(*grid_, gb));
    }
    std::pair<ComplexField, SolveReport> solve_interior(std::span<const cplx> f) const {
        return fact_.solve(rhs_interior(*grid_, *medium_, k_, omega_, f));
    }

private:
    const Grid* grid_;
    const Medium* medium_;
    int k_;
    double omega_;
    SparseMatrix matrix_;
    Factorization fact_;
};

/// Cache of factorized operators keyed by harmonic index, for a fixed
/// (grid, medium, omega) triple. Read-only reuse across solves.
class OperatorCache {
public:
    OperatorCache(const Grid& g, const Medium& m, double omega) : grid_(&g), medium_(&m), omega_(omega) {}

    const HarmonicOperator& get(int k) {
        auto it = ops_.find(k);
        if (it == ops_.end())
            it = ops_.emplace(k, std::make_unique<HarmonicOperator>(*grid_, *medium_, k, omega_)).first;
        return *it->second;
    }
    double omega() const { return omega_; }

private:
    const Grid* grid_;
    const Medium* medium_;
    double omega_;
    std::map<int, std::unique_ptr<HarmonicOperator>> ops_;
};

/// Fundamental harmonic: omega^2 u1 + div(mu grad u1) = 0 with Robin datum g.
inline std::pair<ComplexField, SolveReport> solve_fundamental(const Grid& g, const Medium& m,
                                                              const BoundarySource& src) {
    src.validate(g);
    HarmonicOperator op(g, m, 1, src.omega);
    return op.solve_boundary(src.g);
}

/// k-th harmonic (k >= 2) driven by the interior source f (without the
/// 2 alpha (k omega)^2 prefactor), homogeneous Robin condition.
inline std::pair<ComplexField, SolveReport> solve_harmonic(const Grid& g, const Medium& m, int k, double omega,
                                                           std::span<const cplx> f) {
    if (k < 2) throw InvariantViolationError("solve_harmonic requires k >= 2");
    HarmonicOperator op(g, m, k, omega);
    return op.solve_interior(f);
}

/// Auxiliary problem: the k = 2 operator with boundary datum -h.
inline std::pair<ComplexField, SolveReport> solve_auxiliary(const Grid& g, const Medium& m, double omega,
                                                            std::span<const cplx> h) {
    if (h.size() != g.boundary_count()) throw ShapeMismatchError("auxiliary datum size mismatch");
    std::vector<cplx> neg(h.size());
    for (size_t b = 0; b < h.size(); ++b) neg[b] = -h[b];
    HarmonicOperator op(g, m, 2, omega);
    return op.solve_boundary(neg);
}

/// Neumann trace recovered from the Robin relation:
///   d_nu u = (g + (i k omega lambda - eta) u) / mu_k  on the boundary.
inline std::vector<cplx> robin_to_neumann_trace(const Grid& grid, const Medium& m, int k, double omega,
                                                std::span<const cplx> u, std::span<const cplx> g_or_zero) {
    if (u.size() != grid.size()) throw ShapeMismatchError("field size does not match grid");
    std::vector<cplx> gb(grid.boundary_count(), cplx{0.0, 0.0});
    if (!g_or_zero.empty()) {
        if (g_or_zero.size() != grid.boundary_count()) throw ShapeMismatchError("boundary datum size mismatch");
        for (size_t b = 0; b < gb.size(); ++b) gb[b] = g_or_zero[b];
    }
    const double kw = static_cast<double>(k) * omega;
    std::vector<cplx> out(grid.boundary_count());
    for (size_t b = 0; b < out.size(); ++b) {
        const int n = grid.boundary()[b].flat;
        const cplx mu = cplx(m.gamma[n], -kw * m.beta[n]);
        const cplx robin = cplx(-m.eta[b], kw * m.lambda[b]);
        out[b] = (gb[b] + robin * u[n]) / mu;
    }
    return out;
}

}  // namespace westervelt

#endif
