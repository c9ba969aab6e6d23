#ifndef WESTERVELT_ESTIMATES_HPP
#define WESTERVELT_ESTIMATES_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "westervelt/cascade.hpp"
#include "westervelt/field.hpp"
#include "westervelt/grid.hpp"
#include "westervelt/helmholtz.hpp"
#include "westervelt/profiles.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

/// Least-squares fit of y ~ c * x^e on log-log axes.
struct PowerLawFit {
    double exponent = 0.0;
    double log_prefactor = 0.0;
    double residual = 0.0;  // rms residual of log y
};

inline PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InvariantViolationError("power-law fit requires >= 2 matching samples");
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    PowerLawFit f;
    f.exponent = (n * sxy - sx * sy) / denom;
    f.log_prefactor = (sy - f.exponent * sx) / n;
    double rss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double pred = f.log_prefactor + f.exponent * std::log(x[i]);
        rss += (std::log(y[i]) - pred) * (std::log(y[i]) - pred);
    }
    f.residual = std::sqrt(rss / n);
    return f;
}

struct SweepSpec {
    std::vector<double> omega_values;
    std::vector<int> grid_resolutions;  // nodes per axis; first entry used per sweep
    MediumSpec medium;
    SourceProfile source;
    std::vector<int> k_values = {2, 4, 8};

    void validate() const {
        if (omega_values.size() < 3)
            throw InvariantViolationError("sweep requires at least 3 omega values");
        for (size_t i = 1; i < omega_values.size(); ++i)
            if (!(omega_values[i] > omega_values[i - 1]))
                throw InvariantViolationError("omega values must be strictly ascending");
        if (!(omega_values.front() > 0.0)) throw InvariantViolationError("omega values must be positive");
        if (grid_resolutions.empty()) throw InvariantViolationError("sweep requires a grid resolution");
    }
    int resolution() const { return grid_resolutions.front(); }
};

struct SweepRow {
    double omega = 0.0;
    int k = 1;
    double raw = 0.0;    // measured norm
    double ratio = 0.0;  // frequency-scaled ratio against the source norm
};

struct QuantityTable {
    std::string name;
    std::vector<SweepRow> rows;
    double max_min_ratio = 0.0;
    bool bounded = false;
    PowerLawFit fit;  // of the raw values against omega (or k omega)
};

struct SweepReport {
    std::vector<QuantityTable> tables;
    std::vector<std::string> skipped;  // flagged sweep points
    bool all_bounded = true;

    const QuantityTable& table(const std::string& name) const {
        for (const auto& t : tables)
            if (t.name == name) return t;
        throw InvariantViolationError("no sweep table named " + name);
    }
};

namespace detail {

inline void finalize_table(QuantityTable& t, double bound_factor = 3.0) {
    double lo = 1e308, hi = 0.0;
    std::vector<double> xs, ys;
    for (const auto& r : t.rows) {
        if (r.ratio > 0.0) {
            lo = std::min(lo, r.ratio);
            hi = std::max(hi, r.ratio);
        }
        if (r.raw > 0.0) {
            xs.push_back(r.omega * r.k);
            ys.push_back(r.raw);
        }
    }
    t.max_min_ratio = (hi > 0.0 && lo < 1e308) ? hi / lo : 0.0;
    t.bounded = t.max_min_ratio <= bound_factor;
    if (xs.size() >= 2) t.fit = fit_power_law(xs, ys);
}

}  // namespace detail

/// Boundary-forced scaling sweep: omega |v|_bdry, omega^{3/2} |v|, omega |grad v|
/// and omega^{1/2} |lap v| against |g|, over the requested frequencies.
inline SweepReport run_lemma1_sweep(const SweepSpec& spec) {
    spec.validate();
    const Grid g = build_grid(1.0, 1.0, spec.resolution(), spec.resolution());
    const Medium m = spec.medium.materialize(g);

    SweepReport rep;
    QuantityTable c0{"C0"}, c1{"C1"}, c2{"C2"}, c3{"C3"};
    for (double w : spec.omega_values) {
        const BoundarySource src = spec.source.materialize(g, w);
        const double gn = boundary_l2_norm(g, src.g);
        auto [v, sr] = solve_fundamental(g, m, src);
        const double vb = boundary_l2_norm(g, boundary_restrict(g, v));
        const double v0 = l2_norm(g, v);
        const double v1 = h1_seminorm(g, v);
        const double vl = laplacian_l2_norm(g, v);
        const double inv_g = gn > 0.0 ? 1.0 / gn : 0.0;
        c0.rows.push_back({w, 1, vb, w * vb * inv_g});
        c1.rows.push_back({w, 1, v0, std::pow(w, 1.5) * v0 * inv_g});
        c2.rows.push_back({w, 1, v1, w * v1 * inv_g});
        c3.rows.push_back({w, 1, vl, std::sqrt(w) * vl * inv_g});
    }
    for (auto* t : {&c0, &c1, &c2, &c3}) {
        detail::finalize_table(*t);
        rep.all_bounded = rep.all_bounded && t->bounded;
        rep.tables.push_back(std::move(*t));
    }
    return rep;
}

/// Interior-forced scaling sweep over harmonic index and frequency with a
/// fixed source field f.
inline SweepReport run_lemma2_sweep(const SweepSpec& spec, const ComplexField& f_template) {
    spec.validate();
    const Grid g = build_grid(1.0, 1.0, spec.resolution(), spec.resolution());
    const Medium m = spec.medium.materialize(g);
    if (f_template.size() != g.size())
        throw ShapeMismatchError("lemma-2 source field does not match the sweep grid");

    ComplexField alpha_f(g.size());
    for (size_t n = 0; n < g.size(); ++n) alpha_f[n] = m.alpha[n] * f_template[n];
    const double afn = l2_norm(g, alpha_f);
    const double inv_af = afn > 0.0 ? 1.0 / afn : 0.0;

    SweepReport rep;
    QuantityTable d0{"D0"}, d1{"D1"}, d2{"D2"}, d3{"D3"};
    for (double w : spec.omega_values) {
        for (int k : spec.k_values) {
            auto [v, sr] = solve_harmonic(g, m, k, w, f_template);
            const double kw = k * w;
            const double v0 = l2_norm(g, v);
            const double vb = boundary_l2_norm(g, boundary_restrict(g, v));
            const double v1 = h1_seminorm(g, v);
            const double vl = laplacian_l2_norm(g, v);
            d0.rows.push_back({w, k, v0, v0 * inv_af});
            d1.rows.push_back({w, k, vb, vb / std::sqrt(kw) * inv_af});
            d2.rows.push_back({w, k, v1, v1 / std::sqrt(kw) * inv_af});
            d3.rows.push_back({w, k, vl, vl / kw * inv_af});
        }
    }
    for (auto* t : {&d0, &d1, &d2, &d3}) {
        detail::finalize_table(*t);
        rep.all_bounded = rep.all_bounded && t->bounded;
        rep.tables.push_back(std::move(*t));
    }
    return rep;
}

/// Pointwise agreement of mu^{±1/2}, mu^{-1} and the Liouville potential with
/// their leading high-frequency forms.
struct MuAsymptoticsReport {
    double dev_sqrt = 0.0;      // mu^{1/2} vs (1-i)/sqrt(2) (omega beta)^{1/2}
    double dev_inv_sqrt = 0.0;  // mu^{-1/2} vs (1+i)/sqrt(2) (omega beta)^{-1/2}
    double dev_inv = 0.0;       // mu^{-1} vs i/(omega beta)
    double dev_p = 0.0;         // p vs i/(omega beta), interior nodes
    double sqrt_identity_err = 0.0;  // max |(mu^{1/2})^2 - mu| / |mu|
};

inline MuAsymptoticsReport mu_asymptotics(const Grid& g, const Medium& m, double omega) {
    if (!(omega > 0.0)) throw InvariantViolationError("omega must be positive");
    MuAsymptoticsReport rep;
    const ComplexField mu = mu_field(m, 1, omega);
    ComplexField sq(g.size());
    const cplx root_neg_i = cplx(1.0, -1.0) / std::sqrt(2.0);
    for (size_t n = 0; n < g.size(); ++n) {
        sq[n] = std::sqrt(mu[n]);
        const double wb = std::sqrt(omega * m.beta[n]);
        rep.dev_sqrt = std::max(rep.dev_sqrt, std::abs(sq[n] - root_neg_i * wb) / wb);
        rep.dev_inv_sqrt =
            std::max(rep.dev_inv_sqrt, std::abs(1.0 / sq[n] - std::conj(root_neg_i) / wb) * wb);
        const cplx lead_inv = cplx(0.0, 1.0) / (omega * m.beta[n]);
        rep.dev_inv = std::max(rep.dev_inv, std::abs(1.0 / mu[n] - lead_inv) / std::abs(lead_inv));
        rep.sqrt_identity_err =
            std::max(rep.sqrt_identity_err, std::abs(sq[n] * sq[n] - mu[n]) / std::abs(mu[n]));
    }
    const ComplexField lap_sq = laplacian5(g, sq);
    for (int n = 0; n < static_cast<int>(g.size()); ++n) {
        const auto [i, j] = g.ij(n);
        if (i < 1 || i > g.nx() - 2 || j < 1 || j > g.ny() - 2) continue;
        const cplx p = 1.0 / mu[n] - lap_sq[n] / (omega * omega * sq[n]);
        const cplx lead = cplx(0.0, 1.0) / (omega * m.beta[n]);
        rep.dev_p = std::max(rep.dev_p, std::abs(p - lead) / std::abs(lead));
    }
    return rep;
}

/// Frequency sweep of the max-in-time H^2-proxy norms of the time
/// derivatives d_t^m u for m = 0, 1, 2, fitted as power laws in omega.
struct StabilitySweepReport {
    std::vector<double> omegas_used;
    std::vector<std::string> skipped;
    PowerLawFit fit_m0, fit_m1, fit_m2;
    std::vector<std::array<double, 3>> max_norms;  // per omega: m = 0, 1, 2
};

inline StabilitySweepReport run_stability_sweep(const SweepSpec& spec, int k_max = 12, double tol = 1e-10) {
    spec.validate();
    const Grid g = build_grid(1.0, 1.0, spec.resolution(), spec.resolution());
    const Medium m = spec.medium.materialize(g);

    StabilitySweepReport rep;
    std::vector<double> n0, n1, n2;
    for (double w : spec.omega_values) {
        const BoundarySource src = spec.source.materialize(g, w);
        auto [stack, diag] = run_cascade(g, m, src, k_max, tol);
        if (diag.empirical_r >= 1.0 || stack.truncation_reason == TruncationReason::divergence_detected) {
            rep.skipped.push_back("omega = " + std::to_string(w) + ": cascade not contracting");
            continue;
        }
        const int K = stack.highest();
        const int nt = 4 * std::max(K, 1);
        const double T = 2.0 * std::numbers::pi / w;
        std::array<double, 3> best{0.0, 0.0, 0.0};
        ComplexField dm(g.size());
        for (int s = 0; s < nt; ++s) {
            const double t = T * s / nt;
            for (int mord = 0; mord <= 2; ++mord) {
                std::fill(dm.begin(), dm.end(), cplx{});
                for (int k = 1; k <= K; ++k) {
                    const cplx fac = std::pow(cplx(0.0, -k * w), mord) *
                                     std::exp(cplx(0.0, -k * w * t));
                    const ComplexField& uk = stack.harmonics[k];
                    for (size_t i = 0; i < dm.size(); ++i) dm[i] += fac * uk[i];
                }
                best[mord] = std::max(best[mord], h2_proxy_norm(g, dm));
            }
        }
        rep.omegas_used.push_back(w);
        rep.max_norms.push_back(best);
        n0.push_back(best[0]);
        n1.push_back(best[1]);
        n2.push_back(best[2]);
    }
    if (rep.omegas_used.size() >= 2) {
        rep.fit_m0 = fit_power_law(rep.omegas_used, n0);
        rep.fit_m1 = fit_power_law(rep.omegas_used, n1);
        rep.fit_m2 = fit_power_law(rep.omegas_used, n2);
    }
    return rep;
}

}  // namespace westervelt

#endif
