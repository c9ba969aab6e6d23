#ifndef WESTERVELT_INVERSE_HPP
#define WESTERVELT_INVERSE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "westervelt/cascade.hpp"
#include "westervelt/field.hpp"
#include "westervelt/grid.hpp"
#include "westervelt/helmholtz.hpp"
#include "westervelt/medium.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

struct RtDRecord {
    std::vector<cplx> g;       // boundary source values
    std::vector<cplx> trace1;  // u_1 on the boundary
    std::vector<cplx> trace2;  // u_2 on the boundary
};

/// Boundary measurement set at fixed omega: per source, the first- and
/// second-harmonic Dirichlet traces.
struct RtDDataset {
    double omega = 0.0;
    std::vector<std::array<double, 2>> boundary_xy;
    std::vector<RtDRecord> records;
    std::string medium_tag;
    double noise_level = 0.0;
};

/// Synthesize the Robin-to-Dirichlet dataset by running the cascade per
/// source; optional additive complex Gaussian noise scaled to the trace RMS.
inline RtDDataset synthesize_rtd(const Grid& grid, const Medium& m,
                                 const std::vector<std::vector<cplx>>& sources, double omega,
                                 double noise_level = 0.0, uint64_t seed = 0, int k_max = 12,
                                 double tol = 1e-10) {
    m.validate(grid);
    RtDDataset ds;
    ds.omega = omega;
    ds.noise_level = noise_level;
    for (const auto& bn : grid.boundary()) {
        const auto c = grid.coords(bn.flat);
        ds.boundary_xy.push_back({c[0], c[1]});
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto add_noise = [&](std::vector<cplx>& t) {
        if (noise_level <= 0.0) return;
        double rms = 0.0;
        for (const auto& v : t) rms += std::norm(v);
        rms = std::sqrt(rms / std::max<size_t>(t.size(), 1));
        const double s = noise_level * rms / std::sqrt(2.0);
        for (auto& v : t) v += cplx(s * gauss(rng), s * gauss(rng));
    };

    OperatorCache cache(grid, m, omega);
    for (const auto& gsrc : sources) {
        BoundarySource src{gsrc, omega};
        auto [stack, diag] = run_cascade(grid, m, src, k_max, tol, &cache);
        if (stack.truncation_reason == TruncationReason::divergence_detected)
            throw CascadeDivergenceError("cascade diverged while synthesizing boundary data");
        RtDRecord rec;
        rec.g = gsrc;
        rec.trace1 = boundary_restrict(grid, stack.harmonics[1]);
        rec.trace2 = stack.highest() >= 2 ? boundary_restrict(grid, stack.harmonics[2])
                                          : std::vector<cplx>(grid.boundary_count(), cplx{});
        add_noise(rec.trace1);
        add_noise(rec.trace2);
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

/// Coarse partition of the rectangle into px x py cells.
class PixelBasis {
public:
    PixelBasis(const Grid& g, int px, int py) : px_(px), py_(py) {
        if (px < 1 || py < 1) throw InvariantViolationError("pixel basis requires px, py >= 1");
        cell_of_.resize(g.size());
        for (size_t n = 0; n < g.size(); ++n) {
            const auto [x, y] = g.coords(static_cast<int>(n));
            const int cx = std::min(px - 1, static_cast<int>(px * (x - g.x0()) / g.width()));
            const int cy = std::min(py - 1, static_cast<int>(py * (y - g.y0()) / g.height()));
            cell_of_[n] = cy * px + cx;
        }
    }
    int px() const { return px_; }
    int py() const { return py_; }
    int cells() const { return px_ * py_; }
    int cell_of(int node) const { return cell_of_[node]; }

    RealField expand(const Grid& g, const std::vector<double>& cell_values) const {
        if (static_cast<int>(cell_values.size()) != cells())
            throw ShapeMismatchError("cell value count does not match basis");
        RealField f(g.size());
        for (size_t n = 0; n < g.size(); ++n) f[n] = cell_values[cell_of_[static_cast<int>(n)]];
        return f;
    }

    /// Quadrature-weighted cell averages of a nodal field.
    std::vector<double> cell_average(const Grid& g, const RealField& f) const {
        std::vector<double> acc(cells(), 0.0), wsum(cells(), 0.0);
        for (size_t n = 0; n < g.size(); ++n) {
            const double w = g.area_weight(static_cast<int>(n));
            acc[cell_of_[n]] += w * f[n];
            wsum[cell_of_[n]] += w;
        }
        for (int c = 0; c < cells(); ++c) acc[c] /= std::max(wsum[c], kNormFloor);
        return acc;
    }

    /// Rows of the discrete cell-gradient operator (pairs of adjacent cells).
    std::vector<std::pair<int, int>> gradient_pairs() const {
        std::vector<std::pair<int, int>> out;
        for (int cy = 0; cy < py_; ++cy)
            for (int cx = 0; cx + 1 < px_; ++cx) out.push_back({cy * px_ + cx, cy * px_ + cx + 1});
        for (int cy = 0; cy + 1 < py_; ++cy)
            for (int cx = 0; cx < px_; ++cx) out.push_back({cy * px_ + cx, (cy + 1) * px_ + cx});
        return out;
    }

private:
    int px_, py_;
    std::vector<int> cell_of_;
};

struct AlphaReconstruction {
    std::vector<double> cell_values;
    RealField field;
    std::vector<double> misfit_history;
    double reg_weight = 0.0;
    int effective_rank = 0;
    bool rank_deficient = false;
    bool projection_active = false;
    std::optional<double> rel_error_vs_truth;
};

/// Linear least-squares recovery of the nonlinearity from second-harmonic
/// traces through the bilinear boundary identity
///   (2w)^2 int alpha u1^2 v = int_bdry h u2.
inline AlphaReconstruction recover_alpha(const Grid& grid, const RtDDataset& ds, const Medium& known,
                                         const std::vector<std::vector<cplx>>& probes,
                                         const PixelBasis& basis, double reg_weight = -1.0,
                                         const RealField* truth = nullptr) {
    known.validate(grid);
    if (ds.records.empty() || probes.empty())
        throw InvariantViolationError("alpha recovery needs at least one record and one probe");
    const int nrec = static_cast<int>(ds.records.size());
    const int nprobe = static_cast<int>(probes.size());
    const int ncell = basis.cells();
    if (nrec * nprobe < ncell)
        throw UnderdeterminedError("alpha recovery has fewer rows than unknown cells");

    const double w = ds.omega;
    HarmonicOperator op1(grid, known, 1, w);
    HarmonicOperator op2(grid, known, 2, w);

    std::vector<ComplexField> u1(nrec), v(nprobe);
    for (int i = 0; i < nrec; ++i) u1[i] = op1.solve_boundary(ds.records[i].g).first;
    for (int j = 0; j < nprobe; ++j) {
        std::vector<cplx> neg(probes[j].size());
        for (size_t b = 0; b < neg.size(); ++b) neg[b] = -probes[j][b];
        v[j] = op2.solve_boundary(neg).first;
    }

    const int nrows = nrec * nprobe;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(nrows, ncell);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(nrows);
    const double pref = 4.0 * w * w;  // (2 omega)^2
    for (int i = 0; i < nrec; ++i) {
        for (int j = 0; j < nprobe; ++j) {
            const int row = i * nprobe + j;
            for (int n = 0; n < static_cast<int>(grid.size()); ++n)
                A(row, basis.cell_of(n)) +=
                    pref * grid.area_weight(n) * u1[i][n] * u1[i][n] * v[j][n];
            cplx acc{};
            for (size_t bi = 0; bi < grid.boundary_count(); ++bi)
                acc += grid.boundary_weight(static_cast<int>(bi)) * probes[j][bi] * ds.records[i].trace2[bi];
            b(row) = acc;
        }
    }

    Eigen::MatrixXd Ar(2 * nrows, ncell);
    Ar.topRows(nrows) = A.real();
    Ar.bottomRows(nrows) = A.imag();
    Eigen::VectorXd br(2 * nrows);
    br.head(nrows) = b.real();
    br.tail(nrows) = b.imag();

    Eigen::MatrixXd nm = Ar.transpose() * Ar;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(nm);
    const double lam_max = es.eigenvalues().maxCoeff();
    AlphaReconstruction out;
    out.effective_rank = 0;
    for (int c = 0; c < ncell; ++c)
        if (es.eigenvalues()(c) > lam_max * 1e-24) ++out.effective_rank;
    out.rank_deficient = out.effective_rank < ncell;

    out.reg_weight = reg_weight >= 0.0 ? reg_weight : 1e-6 * lam_max;
    const auto pairs = basis.gradient_pairs();
    Eigen::MatrixXd reg = Eigen::MatrixXd::Zero(ncell, ncell);
    for (const auto& [a, c] : pairs) {
        reg(a, a) += 1.0;
        reg(c, c) += 1.0;
        reg(a, c) -= 1.0;
        reg(c, a) -= 1.0;
    }
    const Eigen::VectorXd x = (nm + out.reg_weight * reg).ldlt().solve(Ar.transpose() * br);

    out.cell_values.assign(x.data(), x.data() + ncell);
    for (double& av : out.cell_values) {
        if (av < 0.0) {
            out.projection_active = true;
            av = 0.0;
        }
    }
    out.field = basis.expand(grid, out.cell_values);
    const double bn = br.norm();
    out.misfit_history.push_back((Ar * x - br).norm() / std::max(bn, kNormFloor));

    if (truth) {
        double num = 0.0, den = 0.0;
        for (size_t n = 0; n < grid.size(); ++n) {
            const double wq = grid.area_weight(static_cast<int>(n));
            num += wq * (out.field[n] - (*truth)[n]) * (out.field[n] - (*truth)[n]);
            den += wq * (*truth)[n] * (*truth)[n];
        }
        out.rel_error_vs_truth = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    }
    return out;
}

namespace detail {

/// Per-cell pieces of the operator sensitivity: P_c = d(mu part)/d(m restricted
/// to cell c), so that MuPart(m) = sum_c m_c-weighted combinations.
inline std::vector<Eigen::SparseMatrix<cplx>> mu_part_per_cell(const Grid& g, const PixelBasis& basis) {
    std::vector<std::vector<Eigen::Triplet<cplx>>> trips(basis.cells());
    const int nx = g.nx(), ny = g.ny();
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    auto face = [&](int row, int nbr, double iw) {
        // coefficient (m_row + m_nbr)/2 multiplies (u_nbr - u_row) * iw
        for (int owner : {row, nbr}) {
            trips[basis.cell_of(owner)].emplace_back(row, nbr, cplx(0.5 * iw, 0.0));
            trips[basis.cell_of(owner)].emplace_back(row, row, cplx(-0.5 * iw, 0.0));
        }
    };
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const int n = g.idx(i, j);
            face(n, g.idx(i + 1, j), ihx2);
            face(n, g.idx(i - 1, j), ihx2);
            face(n, g.idx(i, j + 1), ihy2);
            face(n, g.idx(i, j - 1), ihy2);
        }
    }
    for (const auto& bn : g.boundary()) {
        const int cell = basis.cell_of(bn.flat);
        emit_normal_derivative(g, bn, [&](int col, double wgt) {
            trips[cell].emplace_back(bn.flat, col, cplx(wgt, 0.0));
        });
    }
    std::vector<Eigen::SparseMatrix<cplx>> out;
    out.reserve(basis.cells());
    for (int c = 0; c < basis.cells(); ++c) {
        Eigen::SparseMatrix<cplx> m(static_cast<int>(g.size()), static_cast<int>(g.size()));
        m.setFromTriplets(trips[c].begin(), trips[c].end());
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace detail

struct MuRecoveryOptions {
    int max_iters = 50;
    double rel_tol = 1e-6;
    double beta_floor = 1e-4;
    double gamma_floor = 1e-4;
    double misfit_floor_rel = 1e-20;  // relative to the squared data norm
    int max_sources = 0;              // 0: use all records
};

struct MuReconstruction {
    std::vector<double> beta_cells, gamma_cells;
    RealField beta_field, gamma_field;
    std::vector<double> misfit_history;
    int iterations = 0;
    double initial_grad_norm = 0.0;
    double final_grad_norm = 0.0;
    int bound_projections = 0;
    std::optional<double> rel_error_beta, rel_error_gamma;
};

/// Output-least-squares recovery of (beta, gamma) from first-harmonic traces:
/// Gauss-Newton on a pixel parameterization with gradients from the discrete
/// adjoint of the fundamental-harmonic operator, bounds kept by projection.
class MuRecovery {
public:
    MuRecovery(const Grid& g, const RtDDataset& ds, RealField lambda, RealField eta,
               const PixelBasis& basis, MuRecoveryOptions opts = {})
        : grid_(g), basis_(basis), opts_(opts), omega_(ds.omega), lambda_(std::move(lambda)),
          eta_(std::move(eta)) {
        const int ns = opts.max_sources > 0
                           ? std::min<int>(opts.max_sources, static_cast<int>(ds.records.size()))
                           : static_cast<int>(ds.records.size());
        if (ns < 4) throw InvariantViolationError("mu recovery needs trace data from >= 4 sources");
        for (int i = 0; i < ns; ++i) {
            sources_.push_back(ds.records[i].g);
            data_.push_back(ds.records[i].trace1);
        }
        parts_ = detail::mu_part_per_cell(g, basis);
        data_sq_ = 0.0;
        for (const auto& d : data_)
            for (size_t b = 0; b < d.size(); ++b)
                data_sq_ += g.boundary_weight(static_cast<int>(b)) * std::norm(d[b]);
    }

    struct State {
        Eigen::VectorXd theta;  // [beta cells; gamma cells]
        double misfit = 0.0;
        std::vector<ComplexField> u;
        std::unique_ptr<Factorization> fact;
    };

    Medium medium_for(const Eigen::VectorXd& theta) const {
        const int nc = basis_.cells();
        Medium m;
        m.alpha.assign(grid_.size(), 0.0);
        m.beta = basis_.expand(grid_, std::vector<double>(theta.data(), theta.data() + nc));
        m.gamma = basis_.expand(grid_, std::vector<double>(theta.data() + nc, theta.data() + 2 * nc));
        m.lambda = lambda_;
        m.eta = eta_;
        return m;
    }

    double misfit(const Eigen::VectorXd& theta) const { return evaluate(theta).misfit; }

    State evaluate(const Eigen::VectorXd& theta) const {
        State st;
        st.theta = theta;
        const Medium m = medium_for(theta);
        m.validate(grid_);
        SparseMatrix a = assemble_harmonic_operator(grid_, m, 1, omega_);
        st.fact = std::make_unique<Factorization>(a);
        st.misfit = 0.0;
        for (size_t i = 0; i < sources_.size(); ++i) {
            auto [u, rep] = st.fact->solve(rhs_boundary(grid_, sources_[i]));
            for (size_t b = 0; b < grid_.boundary_count(); ++b) {
                const cplx r = u[grid_.boundary()[b].flat] - data_[i][b];
                st.misfit += 0.5 * grid_.boundary_weight(static_cast<int>(b)) * std::norm(r);
            }
            st.u.push_back(std::move(u));
        }
        return st;
    }

    /// Exact gradient of the discrete misfit via one adjoint solve per source.
    Eigen::VectorXd gradient(const State& st) const {
        const int nc = basis_.cells();
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(2 * nc);
        for (size_t i = 0; i < sources_.size(); ++i) {
            std::vector<cplx> y(grid_.size(), cplx{});
            for (size_t b = 0; b < grid_.boundary_count(); ++b) {
                const int n = grid_.boundary()[b].flat;
                y[n] = grid_.boundary_weight(static_cast<int>(b)) * (st.u[i][n] - data_[i][b]);
            }
            const std::vector<cplx> p = st.fact->solve_adjoint(y);
            const Eigen::VectorXcd pe = to_eigen(p);
            const Eigen::VectorXcd ue = to_eigen(st.u[i]);
            for (int c = 0; c < nc; ++c) {
                const cplx s = pe.dot(parts_[c] * ue);  // p^H P_c u
                grad(c) += -std::real(cplx(0.0, -omega_) * s);  // d mu / d beta = -i omega
                grad(nc + c) += -std::real(s);                  // d mu / d gamma = 1
            }
        }
        return grad;
    }

    MuReconstruction run(const std::vector<double>& beta0, const std::vector<double>& gamma0,
                         const RealField* truth_beta = nullptr, const RealField* truth_gamma = nullptr) const {
        const int nc = basis_.cells();
        if (static_cast<int>(beta0.size()) != nc || static_cast<int>(gamma0.size()) != nc)
            throw ShapeMismatchError("initial guess does not match the pixel basis");
        Eigen::VectorXd theta(2 * nc);
        for (int c = 0; c < nc; ++c) {
            theta(c) = beta0[c];
            theta(nc + c) = gamma0[c];
        }
        project(theta);

        MuReconstruction out;
        State st = evaluate(theta);
        out.misfit_history.push_back(st.misfit);
        Eigen::VectorXd grad = gradient(st);
        out.initial_grad_norm = grad.norm();

        for (int it = 0; it < opts_.max_iters; ++it) {
            if (st.misfit <= opts_.misfit_floor_rel * data_sq_) break;

            const Eigen::MatrixXd G = jacobian(st);
            const Eigen::VectorXd r = weighted_residual(st);
            Eigen::MatrixXd nm = G.transpose() * G;
            const double damping = 1e-12 * nm.trace() / (2 * nc);
            nm.diagonal().array() += damping;
            Eigen::VectorXd step = nm.ldlt().solve(-G.transpose() * r);
            const double slope = grad.dot(step);
            if (slope > 0.0) step = -grad;  // fall back to steepest descent

            double t = 1.0;
            bool accepted = false;
            while (t > 1e-10) {
                Eigen::VectorXd cand = st.theta + t * step;
                project(cand);
                State nst = evaluate(cand);
                if (nst.misfit <= st.misfit - 1e-4 * t * std::abs(grad.dot(step))) {
                    st = std::move(nst);
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) {
                if (st.misfit <= opts_.misfit_floor_rel * data_sq_ * 1e6) break;
                throw LineSearchError("line search failed to reduce the trace misfit");
            }
            ++out.iterations;
            const double prev = out.misfit_history.back();
            out.misfit_history.push_back(st.misfit);
            grad = gradient(st);
            if (prev - st.misfit < opts_.rel_tol * std::max(prev, kNormFloor)) break;
        }

        out.final_grad_norm = grad.norm();
        out.beta_cells.assign(st.theta.data(), st.theta.data() + nc);
        out.gamma_cells.assign(st.theta.data() + nc, st.theta.data() + 2 * nc);
        out.beta_field = basis_.expand(grid_, out.beta_cells);
        out.gamma_field = basis_.expand(grid_, out.gamma_cells);
        out.bound_projections = bound_projections_;
        auto rel_err = [&](const std::vector<double>& got, const RealField& truth) {
            const std::vector<double> avg = basis_.cell_average(grid_, truth);
            double num = 0.0, den = 0.0;
            for (int c = 0; c < nc; ++c) {
                num += (got[c] - avg[c]) * (got[c] - avg[c]);
                den += avg[c] * avg[c];
            }
            return std::sqrt(num / std::max(den, kNormFloor));
        };
        if (truth_beta) out.rel_error_beta = rel_err(out.beta_cells, *truth_beta);
        if (truth_gamma) out.rel_error_gamma = rel_err(out.gamma_cells, *truth_gamma);
        return out;
    }

private:
    Eigen::VectorXd weighted_residual(const State& st) const {
        const int nb = static_cast<int>(grid_.boundary_count());
        const int ns = static_cast<int>(sources_.size());
        Eigen::VectorXd r(2 * nb * ns);
        for (int i = 0; i < ns; ++i) {
            for (int b = 0; b < nb; ++b) {
                const double sw = std::sqrt(grid_.boundary_weight(b));
                const cplx d = st.u[i][grid_.boundary()[b].flat] - data_[i][b];
                r(2 * (i * nb + b)) = sw * d.real();
                r(2 * (i * nb + b) + 1) = sw * d.imag();
            }
        }
        return r;
    }

    Eigen::MatrixXd jacobian(const State& st) const {
        const int nc = basis_.cells();
        const int nb = static_cast<int>(grid_.boundary_count());
        const int ns = static_cast<int>(sources_.size());
        Eigen::MatrixXd jac(2 * nb * ns, 2 * nc);
        for (int i = 0; i < ns; ++i) {
            const Eigen::VectorXcd ue = to_eigen(st.u[i]);
            for (int c = 0; c < nc; ++c) {
                const Eigen::VectorXcd t = parts_[c] * ue;
                const std::vector<cplx> tv = from_eigen(t);
                const std::vector<cplx> du_dgamma = st.fact->solve_raw(tv);
                for (int b = 0; b < nb; ++b) {
                    const double sw = std::sqrt(grid_.boundary_weight(b));
                    const cplx dg = -du_dgamma[grid_.boundary()[b].flat];
                    const cplx db = cplx(0.0, -omega_) * dg;  // chain through mu
                    jac(2 * (i * nb + b), c) = sw * db.real();
                    jac(2 * (i * nb + b) + 1, c) = sw * db.imag();
                    jac(2 * (i * nb + b), nc + c) = sw * dg.real();
                    jac(2 * (i * nb + b) + 1, nc + c) = sw * dg.imag();
                }
            }
        }
        return jac;
    }

    void project(Eigen::VectorXd& theta) const {
        const int nc = basis_.cells();
        for (int c = 0; c < nc; ++c) {
            if (theta(c) < opts_.beta_floor) {
                theta(c) = opts_.beta_floor;
                ++bound_projections_;
            }
            if (theta(nc + c) < opts_.gamma_floor) {
                theta(nc + c) = opts_.gamma_floor;
                ++bound_projections_;
            }
        }
    }

    const Grid& grid_;
    const PixelBasis& basis_;
    MuRecoveryOptions opts_;
    double omega_;
    RealField lambda_, eta_;
    std::vector<std::vector<cplx>> sources_, data_;
    std::vector<Eigen::SparseMatrix<cplx>> parts_;
    double data_sq_ = 0.0;
    mutable int bound_projections_ = 0;
};

/// Liouville potential p = mu^{-1} - omega^{-2} mu^{-1/2} lap(mu^{1/2});
/// the Laplacian term is evaluated at interior nodes.
inline ComplexField compute_potential(const Grid& g, const Medium& m, double omega) {
    const ComplexField mu = mu_field(m, 1, omega);
    ComplexField sq(g.size());
    for (size_t n = 0; n < g.size(); ++n) sq[n] = std::sqrt(mu[n]);
    const ComplexField lap = laplacian5(g, sq);
    ComplexField p(g.size());
    for (size_t n = 0; n < g.size(); ++n)
        p[n] = 1.0 / mu[n] - lap[n] / (omega * omega * sq[n]);
    return p;
}

/// Relative interior residual of lap(U) + omega^2 p U for U = mu^{1/2} u1.
inline double liouville_residual(const Grid& g, const Medium& m, double omega, const ComplexField& u1) {
    const ComplexField mu = mu_field(m, 1, omega);
    ComplexField U(g.size());
    for (size_t n = 0; n < g.size(); ++n) U[n] = std::sqrt(mu[n]) * u1[n];
    const ComplexField p = compute_potential(g, m, omega);
    const ComplexField lapU = laplacian5(g, U);
    double num = 0.0, den = 0.0;
    for (int n = 0; n < static_cast<int>(g.size()); ++n) {
        const auto [i, j] = g.ij(n);
        if (i < 1 || i > g.nx() - 2 || j < 1 || j > g.ny() - 2) continue;
        const cplx scale_term = omega * omega * p[n] * U[n];
        const cplx res = lapU[n] + scale_term;
        const double w = g.area_weight(n);
        num += w * std::norm(res);
        den += w * std::norm(scale_term);
    }
    return std::sqrt(num) / std::max(std::sqrt(den), kNormFloor);
}

struct DistinguishabilityReport {
    double trace1_rel_diff = 0.0;
    double trace2_rel_diff = 0.0;
    bool indistinguishable = false;
};

/// Contrapositive check of uniqueness: interior-perturbed media must move the
/// harmonic traces.
inline DistinguishabilityReport distinguishability_test(const Grid& g, const Medium& a, const Medium& b,
                                                        const std::vector<std::vector<cplx>>& sources,
                                                        double omega, int k_max = 4, double tol = 1e-10) {
    DistinguishabilityReport rep;
    OperatorCache ca(g, a, omega), cb(g, b, omega);
    for (const auto& src : sources) {
        BoundarySource bs{src, omega};
        auto [sa, da] = run_cascade(g, a, bs, k_max, tol, &ca);
        auto [sb, db] = run_cascade(g, b, bs, k_max, tol, &cb);
        auto rel_diff = [&](const std::vector<cplx>& x, const std::vector<cplx>& y) {
            double num = 0.0, den = 0.0;
            for (size_t i = 0; i < x.size(); ++i) {
                num += std::norm(x[i] - y[i]);
                den += std::norm(x[i]);
            }
            return std::sqrt(num) / std::max(std::sqrt(den), kNormFloor);
        };
        const auto t1a = boundary_restrict(g, sa.harmonics[1]);
        const auto t1b = boundary_restrict(g, sb.harmonics[1]);
        rep.trace1_rel_diff = std::max(rep.trace1_rel_diff, rel_diff(t1a, t1b));
        if (sa.highest() >= 2 && sb.highest() >= 2) {
            const auto t2a = boundary_restrict(g, sa.harmonics[2]);
            const auto t2b = boundary_restrict(g, sb.harmonics[2]);
            rep.trace2_rel_diff = std::max(rep.trace2_rel_diff, rel_diff(t2a, t2b));
        }
    }
    rep.indistinguishable = rep.trace1_rel_diff < 1e-10 && rep.trace2_rel_diff < 1e-10;
    return rep;
}

}  // namespace westervelt

#endif
