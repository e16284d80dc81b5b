// operators.hpp — dense complex operator algebra on truncated Hilbert spaces:
// Pauli matrices, ladder operators, tensor products, superoperators.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qnd {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr Complex kImag{0.0, 1.0};

// Product dimensions above this are rejected by tensor(); dense storage
// of anything larger is a configuration mistake, not a use case.
constexpr Eigen::Index kMaxTensorDim = 4096;

// --------------------------- basics ----------------------------------------

inline Mat identity(Eigen::Index n) { return Mat::Identity(n, n); }

inline Mat dag(const Mat& a) { return a.adjoint(); }

inline Mat commutator(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows())
        throw std::invalid_argument("commutator: dimension mismatch");
    return a * b - b * a;
}

// |i><j| in an n-dimensional space
inline Mat basis_op(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
    if (n < 1) throw std::invalid_argument("basis_op: n must be >= 1");
    if (i >= n || j >= n) throw std::out_of_range("basis_op: index out of range");
    Mat m = Mat::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

inline Mat projector(Eigen::Index n, Eigen::Index i) { return basis_op(n, i, i); }

inline Vec basis_ket(Eigen::Index n, Eigen::Index i) {
    if (i >= n) throw std::out_of_range("basis_ket: index out of range");
    Vec v = Vec::Zero(n);
    v(i) = 1.0;
    return v;
}

// --------------------------- ladder operators ------------------------------

// <n-1| b |n> = sqrt(n); the number operator b†b is diag(0, 1, ..., n_levels-1).
inline Mat annihilation_op(Eigen::Index n_levels) {
    if (n_levels < 1) throw std::invalid_argument("annihilation_op: n_levels must be >= 1");
    Mat b = Mat::Zero(n_levels, n_levels);
    for (Eigen::Index n = 1; n < n_levels; ++n)
        b(n - 1, n) = std::sqrt(static_cast<double>(n));
    return b;
}

inline Mat creation_op(Eigen::Index n_levels) { return annihilation_op(n_levels).adjoint(); }

inline Mat number_op(Eigen::Index n_levels) {
    if (n_levels < 1) throw std::invalid_argument("number_op: n_levels must be >= 1");
    Mat n = Mat::Zero(n_levels, n_levels);
    for (Eigen::Index k = 0; k < n_levels; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

// --------------------------- qubit operators -------------------------------
// Basis ordering is (|e>, |g>): sigma_z |e> = +|e>, sigma_minus = |g><e|.

inline Mat sigma_x() {
    Mat m(2, 2);
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

inline Mat sigma_y() {
    Mat m(2, 2);
    m << 0.0, Complex(0.0, -1.0),
         Complex(0.0, 1.0), 0.0;
    return m;
}

inline Mat sigma_z() {
    Mat m(2, 2);
    m << 1.0, 0.0,
         0.0, -1.0;
    return m;
}

inline Mat sigma_minus() {
    Mat m = Mat::Zero(2, 2);
    m(1, 0) = 1.0;  // |g><e|
    return m;
}

inline Mat sigma_plus() { return sigma_minus().adjoint(); }

inline Vec ket_e() { return basis_ket(2, 0); }
inline Vec ket_g() { return basis_ket(2, 1); }

// +1 eigenstate of sigma_y: (|e> + i|g>)/sqrt(2)
inline Vec ket_plus_y() {
    Vec v(2);
    v << Complex(1.0, 0.0), Complex(0.0, 1.0);
    return v / std::sqrt(2.0);
}

// --------------------------- tensor product --------------------------------

inline Mat tensor(const Mat& a, const Mat& b) {
    const Eigen::Index da = a.rows(), db = b.rows();
    if (da * db > kMaxTensorDim)
        throw std::invalid_argument("tensor: product dimension " +
                                    std::to_string(da * db) + " exceeds limit " +
                                    std::to_string(kMaxTensorDim));
    Mat out(da * db, a.cols() * b.cols());
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * db, j * b.cols(), db, b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace qnd
