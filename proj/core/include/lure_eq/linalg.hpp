#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace lure {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Raised when operand shapes do not line up.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a model object violates a structural requirement
/// (non-monotone D, indefinite P, empty box, ...).
struct InvalidProblem : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a requested scheme/system combination is not supported.
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised by inner evaluations that failed to reach their tolerance
/// in a context that has no report to carry the flag.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Outcome of an inner solve (resolvent, pointwise evaluation, ...).
///
/// `value` is the computed point. `multiplier`, when non-empty, is a
/// witness element that certifies the inclusion the solve targets
/// (e.g. lambda in B(Cy) for a resolvent of G).
struct InnerSolve {
    Vec value;
    Vec multiplier;
    double residual = 0.0;
    int iterations = 0;
    bool converged = true;
};

double spectral_norm(const Mat& m);

/// Eigenvalues of the symmetric part (M + M^T)/2 in ascending order.
Vec symmetric_eigenvalues(const Mat& m);

double min_symmetric_eigenvalue(const Mat& m);

bool is_diagonal(const Mat& m, double tol = 0.0);

bool is_identity(const Mat& m, double tol = 0.0);

bool all_finite(const Vec& v);

void require_dim(Index got, Index want, const std::string& what);

void require_finite(const Vec& v, const std::string& what);

void require_positive(double value, const std::string& what);

}  // namespace lure
