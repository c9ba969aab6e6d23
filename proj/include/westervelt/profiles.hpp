#ifndef WESTERVELT_PROFILES_HPP
#define WESTERVELT_PROFILES_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "westervelt/grid.hpp"
#include "westervelt/medium.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

/// Named analytic coefficient profiles; exact ground truth for synthetic media.
struct FieldProfile {
    enum class Kind { constant, gaussian_bump, smooth_inclusion };
    Kind kind = Kind::constant;
    double value = 1.0;      // constant, or base level for bumps
    double amplitude = 0.0;
    double cx = 0.5, cy = 0.5;
    double width = 0.1;      // gaussian std dev, or inclusion radius

    double eval(double x, double y) const {
        switch (kind) {
            case Kind::constant:
                return value;
            case Kind::gaussian_bump: {
                const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                return value + amplitude * std::exp(-r2 / (2.0 * width * width));
            }
            case Kind::smooth_inclusion: {
                const double r2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (width * width);
                if (r2 >= 1.0) return value;
                return value + amplitude * std::exp(1.0 - 1.0 / (1.0 - r2));
            }
        }
        return value;
    }

    static FieldProfile constant(double v) { return {Kind::constant, v, 0.0, 0.5, 0.5, 0.1}; }
    static FieldProfile gaussian(double base, double amp, double cx, double cy, double width) {
        return {Kind::gaussian_bump, base, amp, cx, cy, width};
    }
    static FieldProfile inclusion(double base, double amp, double cx, double cy, double radius) {
        return {Kind::smooth_inclusion, base, amp, cx, cy, radius};
    }
};

struct MediumSpec {
    FieldProfile alpha = FieldProfile::constant(0.0);
    FieldProfile beta = FieldProfile::constant(0.05);
    FieldProfile gamma = FieldProfile::constant(1.0);
    double lambda = 1.0;
    double eta = 1.0;

    Medium materialize(const Grid& g) const {
        Medium m;
        m.alpha.resize(g.size());
        m.beta.resize(g.size());
        m.gamma.resize(g.size());
        for (size_t n = 0; n < g.size(); ++n) {
            const auto [x, y] = g.coords(static_cast<int>(n));
            m.alpha[n] = alpha.eval(x, y);
            m.beta[n] = beta.eval(x, y);
            m.gamma[n] = gamma.eval(x, y);
        }
        m.lambda.assign(g.boundary_count(), lambda);
        m.eta.assign(g.boundary_count(), eta);
        m.validate(g);
        return m;
    }
};

/// Trigonometric boundary mode in the arclength parameter of the boundary walk.
enum class BoundaryModeKind { cosine, sine };

inline std::vector<cplx> boundary_mode(const Grid& g, BoundaryModeKind kind, int order, double amplitude = 1.0) {
    std::vector<cplx> v(g.boundary_count());
    const double P = g.perimeter();
    for (size_t b = 0; b < v.size(); ++b) {
        const double phase = 2.0 * std::numbers::pi * order * g.arclength(static_cast<int>(b)) / P;
        v[b] = amplitude * (kind == BoundaryModeKind::cosine ? std::cos(phase) : std::sin(phase));
    }
    return v;
}

/// Family of low-order boundary modes: constant, then cos/sin pairs of
/// increasing order, truncated to `count` members.
inline std::vector<std::vector<cplx>> boundary_mode_family(const Grid& g, int count, double amplitude = 1.0) {
    std::vector<std::vector<cplx>> fam;
    fam.push_back(boundary_mode(g, BoundaryModeKind::cosine, 0, amplitude));
    for (int m = 1; static_cast<int>(fam.size()) < count; ++m) {
        fam.push_back(boundary_mode(g, BoundaryModeKind::cosine, m, amplitude));
        if (static_cast<int>(fam.size()) < count)
            fam.push_back(boundary_mode(g, BoundaryModeKind::sine, m, amplitude));
    }
    fam.resize(count);
    return fam;
}

struct SourceProfile {
    int order = 1;
    double amplitude = 1.0;
    BoundaryModeKind kind = BoundaryModeKind::cosine;

    BoundarySource materialize(const Grid& g, double omega) const {
        return BoundarySource{boundary_mode(g, kind, order, amplitude), omega};
    }
};

/// Smooth interior bump used as the fixed source of the interior-forced sweeps.
inline ComplexField interior_bump(const Grid& g, double cx = 0.5, double cy = 0.5, double width = 0.15,
                                  double amplitude = 1.0) {
    ComplexField f(g.size());
    for (size_t n = 0; n < g.size(); ++n) {
        const auto [x, y] = g.coords(static_cast<int>(n));
        const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        f[n] = amplitude * std::exp(-r2 / (2.0 * width * width));
    }
    return f;
}

}  // namespace westervelt

#endif
