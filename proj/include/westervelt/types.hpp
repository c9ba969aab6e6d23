#ifndef WESTERVELT_TYPES_HPP
#define WESTERVELT_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace westervelt {

using cplx = std::complex<double>;
using ComplexField = std::vector<cplx>;
using RealField = std::vector<double>;

constexpr double kNormFloor = 1e-300;

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};
struct ShapeMismatchError : Error {
    using Error::Error;
};
struct InvariantViolationError : Error {
    using Error::Error;
};
struct SingularMatrixError : Error {
    using Error::Error;
};
struct SolverToleranceError : Error {
    double residual;
    SolverToleranceError(const std::string& msg, double r) : Error(msg), residual(r) {}
};
struct NonConvergenceError : Error {
    double best_residual;
    NonConvergenceError(const std::string& msg, double r) : Error(msg), best_residual(r) {}
};
struct MissingHarmonicError : Error {
    using Error::Error;
};
struct CascadeDivergenceError : Error {
    using Error::Error;
};
struct PicardError : Error {
    using Error::Error;
};
struct InsufficientSamplesError : Error {
    using Error::Error;
};
struct UnderdeterminedError : Error {
    using Error::Error;
};
struct LineSearchError : Error {
    using Error::Error;
};

}  // namespace westervelt

#endif
