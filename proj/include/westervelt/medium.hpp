#ifndef WESTERVELT_MEDIUM_HPP
#define WESTERVELT_MEDIUM_HPP

#include <cmath>
#include <string>
#include <vector>

#include "westervelt/grid.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

/// Coefficient bundle: alpha (nonlinearity), beta (diffusivity) and gamma
/// (squared wave speed) on the nodes; lambda and eta on the boundary walk.
/// alpha >= 0 and beta, gamma, lambda, eta must be bounded away from zero.
struct Medium {
    RealField alpha, beta, gamma;   // one value per grid node
    RealField lambda, eta;          // one value per boundary node

    void validate(const Grid& g) const {
        auto check_size = [&](const RealField& f, size_t want, const char* name) {
            if (f.size() != want)
                throw ShapeMismatchError(std::string("medium field ") + name + " has wrong size");
        };
        check_size(alpha, g.size(), "alpha");
        check_size(beta, g.size(), "beta");
        check_size(gamma, g.size(), "gamma");
        check_size(lambda, g.boundary_count(), "lambda");
        check_size(eta, g.boundary_count(), "eta");
        auto check_positive = [](const RealField& f, const char* name, const char* bound) {
            for (double v : f) {
                if (!std::isfinite(v))
                    throw InvariantViolationError(std::string("medium field ") + name + " is not finite");
                if (!(v > 0.0))
                    throw InvariantViolationError(std::string("medium requires ") + bound);
            }
        };
        for (double v : alpha) {
            if (!std::isfinite(v)) throw InvariantViolationError("medium field alpha is not finite");
            if (v < 0.0) throw InvariantViolationError("medium requires alpha >= 0");
        }
        check_positive(beta, "beta", "beta >= beta_0 > 0");
        check_positive(gamma, "gamma", "gamma >= gamma_0 > 0");
        check_positive(lambda, "lambda", "lambda >= lambda_0 > 0");
        check_positive(eta, "eta", "eta >= eta_0 > 0");
    }
};

/// mu_k = gamma - i k omega beta, evaluated at every node.
inline ComplexField mu_field(const Medium& m, int k, double omega) {
    ComplexField mu(m.gamma.size());
    const double kw = static_cast<double>(k) * omega;
    for (size_t n = 0; n < mu.size(); ++n) mu[n] = cplx(m.gamma[n], -kw * m.beta[n]);
    return mu;
}

struct BoundarySource {
    std::vector<cplx> g;  // ordered like Grid::boundary()
    double omega = 0.0;

    void validate(const Grid& grid) const {
        if (g.size() != grid.boundary_count())
            throw ShapeMismatchError("boundary source size does not match grid boundary");
        if (!(omega > 0.0)) throw InvariantViolationError("boundary source requires omega > 0");
    }
};

}  // namespace westervelt

#endif
