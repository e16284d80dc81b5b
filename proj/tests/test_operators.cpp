#include "qnd/space.hpp"
#include "qnd/superop.hpp"

#include <doctest.h>

#include <random>

using namespace qnd;

namespace {

std::mt19937_64 rng(12345);

Mat random_matrix(Eigen::Index d) {
    std::normal_distribution<double> n;
    Mat m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
    return m;
}

Mat random_hermitian(Eigen::Index d) {
    Mat m = random_matrix(d);
    return 0.5 * (m + m.adjoint());
}

DensityMatrix random_state(Eigen::Index d) {
    const Mat m = random_matrix(d);
    return DensityMatrix(Mat(m * m.adjoint()));
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("annihilation operator entries and number operator") {
    const Mat b2 = annihilation_op(2);
    Mat expect(2, 2);
    expect << 0, 1, 0, 0;
    CHECK(max_abs(b2 - expect) == 0.0);

    const Mat b4 = annihilation_op(4);
    const Mat n4 = b4.adjoint() * b4;
    for (int k = 0; k < 4; ++k) CHECK(n4(k, k).real() == doctest::Approx(k).epsilon(1e-15));
    CHECK(max_abs(n4 - number_op(4)) < 1e-14);

    CHECK_THROWS_AS(annihilation_op(0), std::invalid_argument);
}

TEST_CASE("truncated commutation relation [b, b†]") {
    const int n = 5;
    const Mat b = annihilation_op(n);
    const Mat c = commutator(b, Mat(b.adjoint()));
    Mat expect = Mat::Identity(n, n);
    expect(n - 1, n - 1) = 1.0 - n;  // = -4
    CHECK(max_abs(c - expect) == 0.0);
}

TEST_CASE("pauli algebra in the (|e>, |g>) ordering") {
    const Mat sx = sigma_x(), sy = sigma_y(), sz = sigma_z();
    const Mat sm = sigma_minus(), sp = sigma_plus();

    CHECK(max_abs(sm - 0.5 * (sx - kImag * sy)) < 1e-15);
    CHECK(max_abs(sp - sm.adjoint()) == 0.0);
    CHECK(max_abs(commutator(sx, sy) - 2.0 * kImag * sz) < 1e-15);

    // sigma_z |e> = +|e>, sigma_- |e> = |g>
    CHECK((sz * ket_e() - ket_e()).norm() == 0.0);
    CHECK((sm * ket_e() - ket_g()).norm() == 0.0);

    // sigma_x sigma_- = sigma_+ sigma_x exactly; this is what removes the
    // Hamiltonian correction from the feedback equation.
    CHECK(max_abs(Mat(sx * sm - sp * sx)) == 0.0);

    // sigma_- - sigma_x/2 = -i sigma_y / 2
    CHECK(max_abs(Mat(sm - 0.5 * sx + 0.5 * kImag * sy)) < 1e-15);
}

TEST_CASE("tensor products") {
    CHECK(max_abs(tensor(identity(2), identity(3)) - identity(6)) == 0.0);

    // <e, 2| sz ⊗ n |e, 2> = +2
    const Mat szn = tensor(sigma_z(), number_op(3));
    const Mat rho = tensor(Mat(ket_e() * ket_e().adjoint()),
                           Mat(basis_ket(3, 2) * basis_ket(3, 2).adjoint()));
    CHECK(expectation(szn, rho).real() == doctest::Approx(2.0).epsilon(1e-14));

    // tr(sx ⊗ n) = tr(sx) tr(n) = 0
    CHECK(std::abs(tensor(sigma_x(), number_op(3)).trace()) < 1e-14);

    // trace multiplicativity on random factors
    const Mat a = random_matrix(3), b = random_matrix(4);
    CHECK(std::abs(tensor(a, b).trace() - a.trace() * b.trace()) < 1e-12);

    // associativity is exact
    const Mat c = random_matrix(2);
    CHECK(max_abs(tensor(tensor(a, b), c) - tensor(a, tensor(b, c))) == 0.0);

    CHECK_THROWS_AS(tensor(identity(100), identity(100)), std::invalid_argument);
}

TEST_CASE("thermal state") {
    const auto vac = thermal_state(0.0, 10);
    CHECK(max_abs(vac.mat() - tensor(Mat::Identity(1, 1), projector(10, 0))) < 1e-15);

    const auto th = thermal_state(2.0, 30);
    const Mat n = number_op(30);
    // truncated geometric series oracle
    double z = 0.0, mean = 0.0, purity = 0.0;
    for (int k = 0; k < 30; ++k) z += std::pow(2.0 / 3.0, k);
    for (int k = 0; k < 30; ++k) {
        const double p = std::pow(2.0 / 3.0, k) / z;
        mean += k * p;
        purity += p * p;
    }
    CHECK(expectation(n, th).real() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(expectation(n, th).real() == doctest::Approx(2.0).epsilon(5e-4));
    CHECK(th.purity() == doctest::Approx(purity).epsilon(1e-12));
    CHECK(th.purity() == doctest::Approx(0.2).epsilon(5e-3));
    CHECK(std::abs(th.mat().trace() - 1.0) < 1e-15);

    // strictly decreasing populations for nbar > 0
    for (int k = 0; k + 1 < 30; ++k)
        CHECK(th.mat()(k, k).real() > th.mat()(k + 1, k + 1).real());

    CHECK_THROWS_AS(thermal_state(-0.1, 10), std::invalid_argument);
}

TEST_CASE("density matrix validation") {
    CHECK_THROWS_AS(DensityMatrix(random_matrix(4)), std::invalid_argument);
    CHECK_THROWS_AS(DensityMatrix(Mat::Zero(3, 3)), std::invalid_argument);
    const auto rho = random_state(5);
    CHECK(std::abs(rho.mat().trace() - 1.0) < 1e-14);
    CHECK(rho.min_eigenvalue() > -1e-12);
}

TEST_CASE("dissipator") {
    const Mat sm = sigma_minus();
    const Mat ee = ket_e() * ket_e().adjoint();
    const Mat gg = ket_g() * ket_g().adjoint();
    CHECK(max_abs(dissipator(sm, ee) - (gg - ee)) < 1e-15);

    const Mat b = annihilation_op(4);
    const Mat one = projector(4, 1), zero = projector(4, 0);
    CHECK(max_abs(dissipator(b, Mat(one)) - (zero - one)) < 1e-15);

    // phase invariance on a random 4x4 case
    const auto rho = random_state(4);
    const Mat s = random_matrix(4);
    const Mat d1 = dissipator(s, rho);
    const Mat d2 = dissipator(Mat(std::exp(kImag * 0.7) * s), rho);
    CHECK(max_abs(d1 - d2) < 1e-13);

    CHECK_THROWS_AS(dissipator(sigma_x(), random_state(3).mat()), std::invalid_argument);
}

TEST_CASE("measurement superoperator") {
    const Mat sy2 = 0.5 * sigma_y();
    const Mat py = ket_plus_y() * ket_plus_y().adjoint();
    CHECK(max_abs(meas_superop(sy2, py)) < 1e-14);

    const Mat gg = ket_g() * ket_g().adjoint();
    CHECK(max_abs(meas_superop(sy2, gg) - sy2) < 1e-14);
}

TEST_CASE("superoperator properties on random inputs") {
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng() % 7);
        const auto rho = random_state(d);
        const Mat s = random_matrix(d);
        CHECK(std::abs(dissipator(s, rho).trace()) < 1e-12);
        CHECK(std::abs(meas_superop(s, rho).trace()) < 1e-12);

        // Hermiticity preservation
        CHECK(max_abs(dissipator(s, rho) - dissipator(s, rho).adjoint()) < 1e-12);
        const Mat h = random_hermitian(d);
        CHECK(max_abs(meas_superop(h, rho) - meas_superop(h, rho).adjoint()) < 1e-12);
    }
}

TEST_CASE("H[s] vanishes on eigen-projectors of Hermitian s") {
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index d = 3 + static_cast<Eigen::Index>(rng() % 4);
        const Mat h = random_hermitian(d);
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        for (Eigen::Index k = 0; k < d; ++k) {
            const Vec v = es.eigenvectors().col(k);
            CHECK(max_abs(meas_superop(h, Mat(v * v.adjoint()))) < 1e-12);
        }
    }
}

TEST_CASE("expectation values") {
    const Mat n = number_op(5);
    CHECK(expectation(n, fock_state(3, 5)).real() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(std::abs(expectation(sigma_y(), pure_state(ket_g()))) < 1e-14);

    const SpaceLayout layout({{"qubit", 2}, {"resonator", 30}});
    const Mat rho = tensor(Mat(ket_e() * ket_e().adjoint()), thermal_state(2.0, 30).mat());
    CHECK(expectation(layout.embed(sigma_z(), "qubit"), rho).real() ==
          doctest::Approx(1.0).epsilon(1e-12));

    // Hermitian observable on random state: real expectation
    const auto rho5 = random_state(5);
    const Mat h = random_hermitian(5);
    CHECK(std::abs(expectation(h, rho5).imag()) < 1e-12);

    CHECK_THROWS_AS(expectation(n, random_state(4).mat()), std::invalid_argument);
}

TEST_CASE("partial trace") {
    const SpaceLayout layout({{"qubit", 2}, {"resonator", 4}});
    const Mat prod = tensor(Mat(ket_e() * ket_e().adjoint()),
                            Mat(basis_ket(4, 2) * basis_ket(4, 2).adjoint()));
    CHECK(max_abs(layout.partial_trace(prod, {"resonator"}) - projector(4, 2)) < 1e-14);

    // Bell-like (|e,0> + |g,1>)/sqrt(2): reduced qubit state is I/2
    Vec bell = Vec::Zero(8);
    const SpaceLayout l2({{"qubit", 2}, {"resonator", 4}});
    bell(0 * 4 + 0) = 1.0 / std::sqrt(2.0);
    bell(1 * 4 + 1) = 1.0 / std::sqrt(2.0);
    const Mat rho_bell = bell * bell.adjoint();
    CHECK(max_abs(l2.partial_trace(rho_bell, {"qubit"}) - 0.5 * identity(2)) < 1e-14);

    // random three-factor state: reduced traces are 1, embedding test
    const SpaceLayout l3({{"a", 2}, {"b", 3}, {"c", 4}});
    const auto rho3 = random_state(24);
    for (const auto& keep :
         std::vector<std::vector<std::string>>{{"a"}, {"b"}, {"c"}, {"a", "c"}, {"b", "c"}}) {
        const Mat red = l3.partial_trace(rho3.mat(), keep);
        CHECK(std::abs(red.trace() - 1.0) < 1e-12);
    }

    // partial_trace(tensor(A, rho_B)) over A recovers tr(A) rho_B
    const Mat a = random_matrix(2);
    const auto rb = random_state(3);
    const SpaceLayout lab({{"a", 2}, {"b", 3}});
    CHECK(max_abs(lab.partial_trace(tensor(a, rb.mat()), {"b"}) - a.trace() * rb.mat()) < 1e-12);

    // spectrum preservation under identity embedding
    const Mat h = random_hermitian(3);
    const SpaceLayout lh({{"x", 2}, {"y", 3}});
    Eigen::SelfAdjointEigenSolver<Mat> es_h(h), es_e(lh.embed(h, "y"));
    for (Eigen::Index i = 0; i < 3; ++i) {
        const double lam = es_h.eigenvalues()(i);
        // each eigenvalue of h appears in the embedded spectrum
        CHECK((es_e.eigenvalues().array() - lam).abs().minCoeff() < 1e-12);
    }

    CHECK_THROWS_AS(l3.partial_trace(rho3.mat(), {"nope"}), std::invalid_argument);
}
