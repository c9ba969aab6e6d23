#ifndef WESTERVELT_TIME_ORACLE_HPP
#define WESTERVELT_TIME_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "westervelt/field.hpp"
#include "westervelt/grid.hpp"
#include "westervelt/helmholtz.hpp"
#include "westervelt/medium.hpp"
#include "westervelt/sparse.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

struct TimeStepperConfig {
    int steps_per_period = 256;
    int n_periods_max = 60;
    double periodicity_tol = 1e-8;
    double picard_tol = 1e-10;
    int picard_max_iters = 25;
    int ramp_periods = 2;  // smooth turn-on of the forcing, reduces transients

    void validate() const {
        if (steps_per_period < 64) throw InvariantViolationError("steps_per_period must be >= 64");
        if (n_periods_max < 1) throw InvariantViolationError("n_periods_max must be >= 1");
        if (!(periodicity_tol > 0.0) || !(picard_tol > 0.0))
            throw InvariantViolationError("time stepper tolerances must be positive");
        if (picard_max_iters < 1) throw InvariantViolationError("picard_max_iters must be >= 1");
        if (ramp_periods < 0) throw InvariantViolationError("ramp_periods must be >= 0");
    }
};

struct ConvergenceReport {
    int periods_run = 0;
    double periodicity_gap = 0.0;
    bool periodicity_reached = false;
    int max_picard_iters = 0;
    long total_steps = 0;
};

/// Uniform time samples of the final simulated period.
struct PeriodicOrbit {
    double omega = 0.0;
    std::vector<double> times;
    std::vector<ComplexField> samples;
    ConvergenceReport report;
};

/// Crank-Nicolson integrator for the time-dependent problem
///   d_tt (u - alpha u^2) = div(gamma grad u) + div(beta grad u_t)
/// with the dynamic Robin row
///   gamma d_nu u + beta d_nu u_t + lambda u_t + eta u = g e^{-i omega t}.
/// The evolved variable is w = u - alpha u^2 with q = w_t; u is recovered
/// per node on the branch with 2 alpha u < 1, and the alpha-dependent
/// couplings are handled by a per-step fixed-point iteration.
class TimeIntegrator {
public:
    TimeIntegrator(const Grid& g, const Medium& m, const BoundarySource& src, const TimeStepperConfig& cfg)
        : grid_(g), medium_(m), source_(src), cfg_(cfg),
          dt_(2.0 * std::numbers::pi / src.omega / cfg.steps_per_period) {
        cfg.validate();
        m.validate(g);
        src.validate(g);
        build_system();
        const size_t n = g.size();
        w_.assign(n, cplx{});
        q_.assign(n, cplx{});
        u_.assign(n, cplx{});
        ut_.assign(n, cplx{});
        alpha_zero_ = true;
        for (double a : m.alpha)
            if (a != 0.0) alpha_zero_ = false;
    }

    double dt() const { return dt_; }
    double time() const { return t_; }
    const ComplexField& u() const { return u_; }
    const ComplexField& ut() const { return ut_; }

    void set_state(std::span<const cplx> u0, std::span<const cplx> ut0) {
        if (u0.size() != grid_.size() || ut0.size() != grid_.size())
            throw ShapeMismatchError("initial state size mismatch");
        for (size_t n = 0; n < grid_.size(); ++n) {
            const double a = medium_.alpha[n];
            u_[n] = u0[n];
            ut_[n] = ut0[n];
            w_[n] = u0[n] - a * u0[n] * u0[n];
            q_[n] = (1.0 - 2.0 * a * u0[n]) * ut0[n];
        }
    }

    /// Advance one step; returns the number of fixed-point iterations used.
    int step() {
        const size_t n = grid_.size();
        const double tmid = t_ + 0.5 * dt_;
        const cplx forcing_phase = forcing(tmid);

        // Predictor-frozen quantities.
        ComplexField delta(n), corr(n);
        for (size_t i = 0; i < n; ++i) {
            delta[i] = medium_.alpha[i] * u_[i] * u_[i];
            const cplx s = cplx(1.0, 0.0) - 2.0 * medium_.alpha[i] * u_[i];
            corr[i] = q_[i] * (cplx(1.0, 0.0) / s - cplx(1.0, 0.0));
        }

        Eigen::VectorXcd x_prev = to_eigen(q_);
        Eigen::VectorXcd x;
        int iters = 0;
        ComplexField w_new(n);
        while (true) {
            ++iters;
            // h = u^n + w^n + (dt/2) q^n + delta*, ht = u_t^n + corr*
            Eigen::VectorXcd h(n), ht(n);
            for (size_t i = 0; i < n; ++i) {
                h[i] = u_[i] + w_[i] + 0.5 * dt_ * q_[i] + delta[i];
                ht[i] = ut_[i] + corr[i];
            }
            Eigen::VectorXcd s_vec = gmat_ * h + bmat_ * ht;
            Eigen::VectorXcd rhs(n);
            for (size_t i = 0; i < n; ++i) {
                if (grid_.is_interior(static_cast<int>(i))) {
                    rhs[i] = q_[i] + 0.5 * dt_ * s_vec[i];
                } else {
                    const int b = grid_.boundary_index_of(static_cast<int>(i));
                    rhs[i] = source_.g[b] * forcing_phase - 0.5 * s_vec[i] -
                             0.5 * medium_.lambda[b] * ht[i] - 0.5 * medium_.eta[b] * h[i];
                }
            }
            x = lu_->solve_vec(rhs);

            for (size_t i = 0; i < n; ++i) w_new[i] = w_[i] + 0.5 * dt_ * (q_[i] + x[i]);

            if (alpha_zero_) break;

            double change = 0.0, scale = 0.0;
            for (size_t i = 0; i < n; ++i) {
                change = std::max(change, std::abs(x[i] - x_prev[i]));
                scale = std::max(scale, std::abs(x[i]));
            }
            if (change <= cfg_.picard_tol * std::max(scale, 1e-30)) break;
            if (iters >= cfg_.picard_max_iters)
                throw PicardError("fixed-point iteration did not converge within " +
                                  std::to_string(cfg_.picard_max_iters) + " iterations");
            x_prev = x;
            for (size_t i = 0; i < n; ++i) {
                const cplx ui = recover_u(w_new[i], medium_.alpha[i]);
                delta[i] = medium_.alpha[i] * ui * ui;
                const cplx s = cplx(1.0, 0.0) - 2.0 * medium_.alpha[i] * ui;
                corr[i] = x[i] * (cplx(1.0, 0.0) / s - cplx(1.0, 0.0));
            }
        }

        for (size_t i = 0; i < n; ++i) {
            w_[i] = w_new[i];
            q_[i] = x[i];
            u_[i] = recover_u(w_[i], medium_.alpha[i]);
            const cplx s = cplx(1.0, 0.0) - 2.0 * medium_.alpha[i] * u_[i];
            ut_[i] = q_[i] / s;
        }
        t_ += dt_;
        return iters;
    }

    /// Discrete energy |u_t|^2 + |sqrt(gamma) grad u|^2 + |sqrt(eta) u|^2_boundary.
    double energy() const {
        const Gradient gr = gradient(grid_, u_);
        double acc = 0.0;
        for (size_t i = 0; i < grid_.size(); ++i)
            acc += grid_.area_weight(static_cast<int>(i)) *
                   (std::norm(ut_[i]) + medium_.gamma[i] * (std::norm(gr.gx[i]) + std::norm(gr.gy[i])));
        for (size_t b = 0; b < grid_.boundary_count(); ++b)
            acc += grid_.boundary_weight(static_cast<int>(b)) * medium_.eta[b] *
                   std::norm(u_[grid_.boundary()[b].flat]);
        return acc;
    }

private:
    cplx forcing(double t) const {
        double ramp = 1.0;
        const double ramp_len = cfg_.ramp_periods * 2.0 * std::numbers::pi / source_.omega;
        if (t < ramp_len) ramp = 0.5 * (1.0 - std::cos(std::numbers::pi * t / ramp_len));
        return ramp * std::exp(cplx(0.0, -source_.omega * t));
    }

    static cplx recover_u(cplx w, double a) {
        if (a < 1e-14) return w + a * w * w;
        const cplx z = cplx(1.0, 0.0) - 4.0 * a * w;
        const cplx s = std::sqrt(z);
        if (std::abs(s) < 0.05)
            throw PicardError("state left the admissible branch 2 alpha u < 1");
        return (cplx(1.0, 0.0) - s) / (2.0 * a);
    }

    void build_system() {
        const int n = static_cast<int>(grid_.size());
        SparseMatrix gm(n), bm(n);
        ComplexField gf(grid_.size()), bf(grid_.size());
        for (size_t i = 0; i < grid_.size(); ++i) {
            gf[i] = cplx(medium_.gamma[i], 0.0);
            bf[i] = cplx(medium_.beta[i], 0.0);
        }
        detail::add_mu_part(gm, grid_, gf);
        detail::add_mu_part(bm, grid_, bf);
        gm.finalize();
        bm.finalize();
        gmat_ = gm.eigen();
        bmat_ = bm.eigen();

        // M: interior rows I - (dt^2/4) Lgamma - (dt/2) Lbeta,
        //    boundary rows (dt/4) gamma Dnu + (1/2) beta Dnu + (lambda/2 + eta dt/4) I.
        SparseMatrix msys(n);
        auto scatter = [&](const Eigen::SparseMatrix<cplx>& src, cplx c_int, cplx c_bdry) {
            for (int col = 0; col < src.outerSize(); ++col)
                for (Eigen::SparseMatrix<cplx>::InnerIterator it(src, col); it; ++it)
                    msys.add(static_cast<int>(it.row()), static_cast<int>(it.col()),
                             (grid_.is_interior(static_cast<int>(it.row())) ? c_int : c_bdry) * it.value());
        };
        scatter(gmat_, cplx(-dt_ * dt_ / 4.0, 0.0), cplx(dt_ / 4.0, 0.0));
        scatter(bmat_, cplx(-dt_ / 2.0, 0.0), cplx(0.5, 0.0));
        for (int i = 0; i < n; ++i) {
            if (grid_.is_interior(i)) {
                msys.add(i, i, cplx(1.0, 0.0));
            } else {
                const int b = grid_.boundary_index_of(i);
                msys.add(i, i, cplx(0.5 * medium_.lambda[b] + 0.25 * dt_ * medium_.eta[b], 0.0));
            }
        }
        msys.finalize();
        lu_ = std::make_unique<StepSolver>(msys);
    }

    struct StepSolver {
        explicit StepSolver(const SparseMatrix& m) : a(m.eigen()) {
            lu.compute(a);
            if (lu.info() != Eigen::Success)
                throw SingularMatrixError("time-step system factorization failed");
        }
        Eigen::VectorXcd solve_vec(const Eigen::VectorXcd& b) const { return lu.solve(b); }
        Eigen::SparseMatrix<cplx> a;
        Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
    };

    const Grid& grid_;
    const Medium& medium_;
    BoundarySource source_;
    TimeStepperConfig cfg_;
    double dt_;
    double t_ = 0.0;
    bool alpha_zero_ = false;
    ComplexField w_, q_, u_, ut_;
    Eigen::SparseMatrix<cplx> gmat_, bmat_;
    std::unique_ptr<StepSolver> lu_;
};

/// Integrate from rest to a time-periodic state; returns the samples over the
/// final period. Non-convergence within n_periods_max is reported, not thrown.
inline PeriodicOrbit timestep_to_periodic(const Grid& g, const Medium& m, const BoundarySource& src,
                                          const TimeStepperConfig& cfg) {
    TimeIntegrator ti(g, m, src, cfg);
    const int nsteps = cfg.steps_per_period;

    PeriodicOrbit orbit;
    orbit.omega = src.omega;
    std::vector<ComplexField> cur(nsteps), prev(nsteps);
    std::vector<double> cur_t(nsteps);

    ConvergenceReport rep;
    for (int p = 0; p < cfg.n_periods_max; ++p) {
        for (int s = 0; s < nsteps; ++s) {
            rep.max_picard_iters = std::max(rep.max_picard_iters, ti.step());
            ++rep.total_steps;
            cur[s] = ti.u();
            cur_t[s] = ti.time();
        }
        rep.periods_run = p + 1;
        if (p >= 1) {
            double num = 0.0, den = 0.0;
            for (int s = 0; s < nsteps; ++s) {
                for (size_t i = 0; i < g.size(); ++i) {
                    const double w = g.area_weight(static_cast<int>(i));
                    num += w * std::norm(cur[s][i] - prev[s][i]);
                    den += w * std::norm(cur[s][i]);
                }
            }
            rep.periodicity_gap = std::sqrt(num) / std::max(std::sqrt(den), kNormFloor);
            if (p >= cfg.ramp_periods + 1 && rep.periodicity_gap <= cfg.periodicity_tol) {
                rep.periodicity_reached = true;
                break;
            }
        }
        std::swap(cur, prev);
    }
    // converged: cur holds the final period; otherwise the swap moved the
    // last completed period into prev. Times always belong to that period.
    orbit.samples = rep.periodicity_reached ? cur : prev;
    orbit.times = cur_t;
    orbit.report = rep;
    return orbit;
}

/// Per-node DFT over one period: u_hat_k = (1/N) sum_n u(t_n) e^{+i k omega t_n}.
inline std::vector<ComplexField> extract_harmonics(const PeriodicOrbit& orbit, double omega, int K) {
    const int N = static_cast<int>(orbit.samples.size());
    if (N < 4 * K)
        throw InsufficientSamplesError("need at least 4K samples per period for K harmonics");
    const size_t n = orbit.samples.empty() ? 0 : orbit.samples[0].size();
    std::vector<ComplexField> out(static_cast<size_t>(K) + 1, ComplexField(n, cplx{}));
    for (int s = 0; s < N; ++s) {
        for (int k = 0; k <= K; ++k) {
            const cplx ph = std::exp(cplx(0.0, k * omega * orbit.times[s])) / static_cast<double>(N);
            const ComplexField& us = orbit.samples[s];
            ComplexField& ok = out[k];
            for (size_t i = 0; i < n; ++i) ok[i] += us[i] * ph;
        }
    }
    return out;
}

}  // namespace westervelt

#endif
