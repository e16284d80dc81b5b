// superop.hpp — the two superoperators of diffusive conditional dynamics and
// basic state functionals.

#pragma once

#include "qnd/states.hpp"

namespace qnd {

// Lindblad dissipator D[s]rho = s rho s† - 1/2 {s†s, rho}. Traceless.
inline Mat dissipator(const Mat& s, const Mat& rho) {
    if (s.rows() != rho.rows())
        throw std::invalid_argument("dissipator: dimension mismatch");
    const Mat ss = s.adjoint() * s;
    return s * rho * s.adjoint() - 0.5 * (ss * rho + rho * ss);
}

inline Mat dissipator(const Mat& s, const DensityMatrix& rho) {
    return dissipator(s, rho.mat());
}

// Measurement superoperator H[s]rho = s rho + rho s† - tr(s rho + rho s†) rho.
// Traceless; vanishes on eigen-projectors of Hermitian s.
inline Mat meas_superop(const Mat& s, const Mat& rho) {
    if (s.rows() != rho.rows())
        throw std::invalid_argument("meas_superop: dimension mismatch");
    const Mat x = s * rho + rho * s.adjoint();
    return x - x.trace() * rho;
}

inline Mat meas_superop(const Mat& s, const DensityMatrix& rho) {
    return meas_superop(s, rho.mat());
}

inline Complex expectation(const Mat& a, const Mat& rho) {
    if (a.rows() != rho.rows())
        throw std::invalid_argument("expectation: dimension mismatch");
    return (a * rho).trace();
}

inline Complex expectation(const Mat& a, const DensityMatrix& rho) {
    return expectation(a, rho.mat());
}

inline double expectation_real(const Mat& a, const Mat& rho) {
    return expectation(a, rho).real();
}

// Trace distance (1/2)||rho - sigma||_1 for Hermitian arguments.
inline double trace_distance(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho - sigma, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qnd
