#ifndef WESTERVELT_CASCADE_HPP
#define WESTERVELT_CASCADE_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "westervelt/field.hpp"
#include "westervelt/grid.hpp"
#include "westervelt/helmholtz.hpp"
#include "westervelt/medium.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

using bigint = boost::multiprecision::cpp_int;

enum class TruncationReason { tolerance_met, k_max_reached, divergence_detected };

inline const char* to_string(TruncationReason r) {
    switch (r) {
        case TruncationReason::tolerance_met: return "tolerance_met";
        case TruncationReason::k_max_reached: return "k_max_reached";
        case TruncationReason::divergence_detected: return "divergence_detected";
    }
    return "unknown";
}

struct HarmonicNorms {
    double l2 = 0.0;
    double h1_semi = 0.0;
    double max_abs = 0.0;
};

/// Ordered harmonics u_0..u_K of one time-periodic solution at fixed omega.
/// u_0 is stored explicitly and is identically zero.
struct HarmonicStack {
    double omega = 0.0;
    BoundarySource source;
    std::vector<ComplexField> harmonics;   // index k = 0..K
    std::vector<HarmonicNorms> norms;      // aligned with harmonics
    TruncationReason truncation_reason = TruncationReason::k_max_reached;

    int highest() const { return static_cast<int>(harmonics.size()) - 1; }
};

struct CascadeDiagnostics {
    std::vector<double> ratio_sequence;  // ||u_{k+1}|| / ||u_k||, k = 1..K-1
    double empirical_r = 0.0;
    double degeneracy_margin = 0.0;      // max over (t, x) of 2 alpha |u|
    bool degeneracy_warning = false;
};

/// Convolution source f_k = sum_{l=1}^{k-1} (l/k) u_l u_{k-l}.
inline ComplexField cauchy_source(const std::vector<ComplexField>& harmonics, int k) {
    if (k < 2) throw InvariantViolationError("cauchy source requires k >= 2");
    if (static_cast<int>(harmonics.size()) < k)
        throw MissingHarmonicError("cauchy source for k = " + std::to_string(k) +
                                   " needs harmonics u_1..u_" + std::to_string(k - 1));
    const size_t n = harmonics[1].size();
    ComplexField f(n, cplx{0.0, 0.0});
    for (int l = 1; l <= k - 1; ++l) {
        const double w = static_cast<double>(l) / static_cast<double>(k);
        const ComplexField& a = harmonics[l];
        const ComplexField& b = harmonics[k - l];
        for (size_t i = 0; i < n; ++i) f[i] += w * a[i] * b[i];
    }
    return f;
}

/// Partial sum u(t, x) = sum_k u_k(x) e^{-i k omega t}.
inline ComplexField synthesize_time(const HarmonicStack& stack, double t) {
    const size_t n = stack.harmonics.empty() ? 0 : stack.harmonics[0].size();
    ComplexField out(n, cplx{0.0, 0.0});
    for (int k = 0; k <= stack.highest(); ++k) {
        const cplx phase = std::exp(cplx(0.0, -static_cast<double>(k) * stack.omega * t));
        const ComplexField& uk = stack.harmonics[k];
        for (size_t i = 0; i < n; ++i) out[i] += uk[i] * phase;
    }
    return out;
}

namespace detail {

inline HarmonicNorms compute_norms(const Grid& g, const ComplexField& u) {
    return {l2_norm(g, u), h1_seminorm(g, u), max_abs(u)};
}

inline CascadeDiagnostics compute_diagnostics(const Grid& g, const Medium& m, const HarmonicStack& stack) {
    CascadeDiagnostics d;
    const int kmax = stack.highest();
    for (int k = 1; k + 1 <= kmax; ++k) {
        const double denom = stack.norms[k].l2;
        d.ratio_sequence.push_back(denom > kNormFloor ? stack.norms[k + 1].l2 / denom : 0.0);
    }
    for (double r : d.ratio_sequence) d.empirical_r = std::max(d.empirical_r, r);

    const int nt = 4 * std::max(kmax, 1);
    const double period = 2.0 * std::numbers::pi / stack.omega;
    double margin = 0.0;
    for (int s = 0; s < nt; ++s) {
        const ComplexField u = synthesize_time(stack, period * s / nt);
        for (size_t n = 0; n < u.size(); ++n)
            margin = std::max(margin, 2.0 * m.alpha[n] * std::abs(u[n]));
    }
    d.degeneracy_margin = margin;
    d.degeneracy_warning = margin >= 0.5;
    return d;
}

}  // namespace detail

/// Recursive multi-harmonic construction: u_1 from the boundary-forced
/// problem, u_k from the convolution of lower harmonics, until the relative
/// tolerance is met, k_max is reached, or two consecutive norm ratios
/// exceed one (divergence).
inline std::pair<HarmonicStack, CascadeDiagnostics> run_cascade(const Grid& g, const Medium& m,
                                                                const BoundarySource& src, int k_max,
                                                                double tol, OperatorCache* cache = nullptr) {
    if (k_max < 2) throw InvariantViolationError("run_cascade requires k_max >= 2");
    if (!(tol > 0.0)) throw InvariantViolationError("run_cascade requires tol > 0");
    m.validate(g);
    src.validate(g);

    HarmonicStack stack;
    stack.omega = src.omega;
    stack.source = src;
    stack.harmonics.push_back(zero_field(g));
    stack.norms.push_back({0.0, 0.0, 0.0});

    OperatorCache local(g, m, src.omega);
    OperatorCache& ops = cache ? *cache : local;

    {
        auto [u1, rep] = ops.get(1).solve_boundary(src.g);
        stack.harmonics.push_back(std::move(u1));
        stack.norms.push_back(detail::compute_norms(g, stack.harmonics.back()));
    }
    const double u1_norm = stack.norms[1].l2;

    stack.truncation_reason = TruncationReason::k_max_reached;
    int rising = 0;
    for (int k = 2; k <= k_max; ++k) {
        const ComplexField fk = cauchy_source(stack.harmonics, k);
        auto [uk, rep] = ops.get(k).solve_interior(fk);
        stack.harmonics.push_back(std::move(uk));
        stack.norms.push_back(detail::compute_norms(g, stack.harmonics.back()));

        const double cur = stack.norms[k].l2;
        const double prev = stack.norms[k - 1].l2;
        if (cur <= tol * u1_norm) {
            stack.truncation_reason = TruncationReason::tolerance_met;
            break;
        }
        rising = (prev > kNormFloor && cur / prev > 1.0) ? rising + 1 : 0;
        if (rising >= 2) {
            stack.truncation_reason = TruncationReason::divergence_detected;
            break;
        }
    }

    CascadeDiagnostics diag = detail::compute_diagnostics(g, m, stack);
    return {std::move(stack), std::move(diag)};
}

/// Relative L^2 residuals of the per-harmonic equations, Robin rows included.
inline std::vector<double> mode_residuals(const Grid& g, const Medium& m, const HarmonicStack& stack) {
    std::vector<double> out;
    for (int k = 1; k <= stack.highest(); ++k) {
        const SparseMatrix a = assemble_harmonic_operator(g, m, k, stack.omega);
        std::vector<cplx> rhs;
        if (k == 1) {
            rhs = rhs_boundary(g, stack.source.g);
        } else {
            const ComplexField fk = cauchy_source(stack.harmonics, k);
            rhs = rhs_interior(g, m, k, stack.omega, fk);
        }
        const Eigen::VectorXcd r = a.apply(to_eigen(stack.harmonics[k])) - to_eigen(rhs);
        const ComplexField rf = from_eigen(r);
        const double rn = l2_norm(g, rf);
        const double un = stack.norms[k].l2;
        out.push_back(un < 1e-14 ? rn : rn / un);
    }
    return out;
}

/// Convolution-counting sequence: h_1 = 1, h_k = sum_{l=1}^{k-1} h_l h_{k-l}.
inline std::vector<bigint> h_sequence(int K) {
    if (K < 1) throw InvariantViolationError("h_sequence requires K >= 1");
    std::vector<bigint> h(static_cast<size_t>(K) + 1);
    h[1] = 1;
    for (int k = 2; k <= K; ++k) {
        bigint acc = 0;
        for (int l = 1; l <= k - 1; ++l) acc += h[l] * h[k - l];
        h[k] = acc;
    }
    return std::vector<bigint>(h.begin() + 1, h.end());  // h_1..h_K
}

/// Norm-decay bound h_k / (C k omega |alpha|) (C^2 omega^{-1/2} |g| |alpha|)^k
/// evaluated literally.
inline double predicted_norm_bound(int k, double omega, double norm_alpha, double norm_g, double C) {
    if (k < 1 || !(omega > 0.0) || !(norm_alpha > 0.0) || !(norm_g > 0.0) || !(C > 0.0))
        throw InvariantViolationError("predicted_norm_bound requires positive arguments");
    const double hk = h_sequence(k)[k - 1].convert_to<double>();
    const double base = C * C * norm_g * norm_alpha / std::sqrt(omega);
    return hk / (C * k * omega * norm_alpha) * std::pow(base, k);
}

/// Constant calibrated from the fundamental solve:
/// C = omega^{1/2} |u1|_{H2 proxy} / |g|_{L2(boundary)}.
inline double calibrate_bound_constant(const Grid& g, const BoundarySource& src, const ComplexField& u1) {
    const double gn = boundary_l2_norm(g, src.g);
    if (!(gn > 0.0)) throw InvariantViolationError("calibration requires a nonzero boundary source");
    return std::sqrt(src.omega) * h2_proxy_norm(g, u1) / gn;
}

}  // namespace westervelt

#endif
