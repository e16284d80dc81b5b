// states.hpp — validated density matrices and standard state constructors.

#pragma once

#include "qnd/operators.hpp"

namespace qnd {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;

// Hermitian, unit-trace wrapper. Construction checks Hermiticity entrywise
// to 1e-12 and normalizes the trace; positivity is checked on demand only
// (the eigensolve is too expensive for per-step use).
class DensityMatrix {
public:
    explicit DensityMatrix(const Mat& rho);

    const Mat& mat() const { return rho_; }
    Eigen::Index dim() const { return rho_.rows(); }

    double min_eigenvalue() const;
    double purity() const { return (rho_ * rho_).trace().real(); }

private:
    Mat rho_;
};

inline DensityMatrix::DensityMatrix(const Mat& rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 1)
        throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
    const double herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > kHermTol)
        throw std::invalid_argument("DensityMatrix: not Hermitian (deviation " +
                                    std::to_string(herm_dev) + ")");
    const Complex tr = rho.trace();
    if (std::abs(tr) < kTraceTol)
        throw std::invalid_argument("DensityMatrix: trace too small to normalize");
    rho_ = (rho + rho.adjoint()) / (2.0 * tr.real());
}

inline double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline DensityMatrix pure_state(const Vec& psi) {
    const double n2 = psi.squaredNorm();
    if (n2 <= 0.0) throw std::invalid_argument("pure_state: zero vector");
    return DensityMatrix(Mat(psi * psi.adjoint() / n2));
}

inline DensityMatrix fock_state(Eigen::Index n, Eigen::Index n_levels) {
    return pure_state(basis_ket(n_levels, n));
}

// Truncated thermal state: p_n ∝ (nbar/(nbar+1))^n, renormalized over the
// first n_levels Fock states.
inline DensityMatrix thermal_state(double nbar, Eigen::Index n_levels) {
    if (nbar < 0.0) throw std::invalid_argument("thermal_state: nbar must be >= 0");
    if (n_levels < 1) throw std::invalid_argument("thermal_state: n_levels must be >= 1");
    Mat rho = Mat::Zero(n_levels, n_levels);
    const double r = nbar / (nbar + 1.0);
    double w = 1.0;
    for (Eigen::Index n = 0; n < n_levels; ++n, w *= r) rho(n, n) = w;
    return DensityMatrix(rho);
}

}  // namespace qnd
