#include "lure_eq/linalg.hpp"

#include <cmath>

namespace lure {

double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

Vec symmetric_eigenvalues(const Mat& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("symmetric_eigenvalues: matrix must be square");
    }
    if (m.size() == 0) return Vec{};
    const Mat sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double min_symmetric_eigenvalue(const Mat& m) {
    const Vec ev = symmetric_eigenvalues(m);
    return ev.size() == 0 ? 0.0 : ev(0);
}

bool is_diagonal(const Mat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            if (i != j && std::abs(m(i, j)) > tol) return false;
        }
    }
    return true;
}

bool is_identity(const Mat& m, double tol) {
    if (!is_diagonal(m, tol)) return false;
    for (Index i = 0; i < m.rows(); ++i) {
        if (std::abs(m(i, i) - 1.0) > tol) return false;
    }
    return true;
}

bool all_finite(const Vec& v) { return v.allFinite(); }

void require_dim(Index got, Index want, const std::string& what) {
    if (got != want) {
        throw DimensionError(what + ": expected dimension " + std::to_string(want) +
                             ", got " + std::to_string(got));
    }
}

void require_finite(const Vec& v, const std::string& what) {
    if (!v.allFinite()) throw std::invalid_argument(what + ": non-finite entry");
}

void require_positive(double value, const std::string& what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(what + " must be positive and finite");
    }
}

}  // namespace lure
