#ifndef WESTERVELT_FIELD_HPP
#define WESTERVELT_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <span>

#include "westervelt/grid.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

inline ComplexField zero_field(const Grid& g) { return ComplexField(g.size(), cplx{0.0, 0.0}); }

inline double l2_norm(const Grid& g, std::span<const cplx> f) {
    if (f.size() != g.size()) throw ShapeMismatchError("field size does not match grid");
    double acc = 0.0;
    for (size_t n = 0; n < f.size(); ++n) acc += g.area_weight(static_cast<int>(n)) * std::norm(f[n]);
    return std::sqrt(acc);
}

inline double boundary_l2_norm(const Grid& g, std::span<const cplx> fb) {
    if (fb.size() != g.boundary_count()) throw ShapeMismatchError("boundary field size mismatch");
    double acc = 0.0;
    for (size_t b = 0; b < fb.size(); ++b) acc += g.boundary_weight(static_cast<int>(b)) * std::norm(fb[b]);
    return std::sqrt(acc);
}

inline double max_abs(std::span<const cplx> f) {
    double m = 0.0;
    for (const auto& v : f) m = std::max(m, std::abs(v));
    return m;
}

/// Gradient component fields; centered differences in the interior,
/// one-sided second-order at the edges.
struct Gradient {
    ComplexField gx, gy;
};

inline Gradient gradient(const Grid& g, std::span<const cplx> f) {
    if (f.size() != g.size()) throw ShapeMismatchError("field size does not match grid");
    Gradient out{ComplexField(g.size()), ComplexField(g.size())};
    const int nx = g.nx(), ny = g.ny();
    const double hx = g.hx(), hy = g.hy();
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int n = g.idx(i, j);
            if (i == 0)
                out.gx[n] = (-3.0 * f[n] + 4.0 * f[g.idx(1, j)] - f[g.idx(2, j)]) / (2.0 * hx);
            else if (i == nx - 1)
                out.gx[n] = (3.0 * f[n] - 4.0 * f[g.idx(nx - 2, j)] + f[g.idx(nx - 3, j)]) / (2.0 * hx);
            else
                out.gx[n] = (f[g.idx(i + 1, j)] - f[g.idx(i - 1, j)]) / (2.0 * hx);
            if (j == 0)
                out.gy[n] = (-3.0 * f[n] + 4.0 * f[g.idx(i, 1)] - f[g.idx(i, 2)]) / (2.0 * hy);
            else if (j == ny - 1)
                out.gy[n] = (3.0 * f[n] - 4.0 * f[g.idx(i, ny - 2)] + f[g.idx(i, ny - 3)]) / (2.0 * hy);
            else
                out.gy[n] = (f[g.idx(i, j + 1)] - f[g.idx(i, j - 1)]) / (2.0 * hy);
        }
    }
    return out;
}

inline double h1_seminorm(const Grid& g, std::span<const cplx> f) {
    const Gradient gr = gradient(g, f);
    double acc = 0.0;
    for (size_t n = 0; n < f.size(); ++n)
        acc += g.area_weight(static_cast<int>(n)) * (std::norm(gr.gx[n]) + std::norm(gr.gy[n]));
    return std::sqrt(acc);
}

inline double h1_norm(const Grid& g, std::span<const cplx> f) {
    const double l2 = l2_norm(g, f);
    const double s = h1_seminorm(g, f);
    return std::sqrt(l2 * l2 + s * s);
}

/// Five-point discrete Laplacian; defined at interior nodes, zero on the
/// boundary entries.
inline ComplexField laplacian5(const Grid& g, std::span<const cplx> f) {
    if (f.size() != g.size()) throw ShapeMismatchError("field size does not match grid");
    ComplexField out(g.size(), cplx{0.0, 0.0});
    const int nx = g.nx(), ny = g.ny();
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const int n = g.idx(i, j);
            out[n] = (f[g.idx(i + 1, j)] - 2.0 * f[n] + f[g.idx(i - 1, j)]) * ihx2 +
                     (f[g.idx(i, j + 1)] - 2.0 * f[n] + f[g.idx(i, j - 1)]) * ihy2;
        }
    }
    return out;
}

inline double laplacian_l2_norm(const Grid& g, std::span<const cplx> f) {
    const ComplexField lap = laplacian5(g, f);
    return l2_norm(g, lap);
}

/// Surrogate for the H^2 norm: L^2 norm of the five-point Laplacian plus the
/// full H^1 norm. Shared by the cascade diagnostics and the scaling sweeps.
inline double h2_proxy_norm(const Grid& g, std::span<const cplx> f) {
    return laplacian_l2_norm(g, f) + h1_norm(g, f);
}

inline std::vector<cplx> boundary_restrict(const Grid& g, std::span<const cplx> f) {
    if (f.size() != g.size()) throw ShapeMismatchError("field size does not match grid");
    std::vector<cplx> out(g.boundary_count());
    for (size_t b = 0; b < out.size(); ++b) out[b] = f[g.boundary()[b].flat];
    return out;
}

}  // namespace westervelt

#endif
