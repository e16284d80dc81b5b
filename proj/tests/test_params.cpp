#include "qnd/params.hpp"

#include <doctest.h>

#include <cmath>

using namespace qnd;

namespace {

PhysicalParams section6_params() {
    PhysicalParams pp;
    pp.omega_m = 2.0 * M_PI * 1e7;
    pp.mass = 1e-15;
    pp.Delta = 5e10;
    pp.epsilon = 0.0;
    pp.omega_c = 5e10;
    pp.mu = 1e7;
    pp.Q_m = 2e7;
    pp.Gamma_q = 1e4;
    pp.chi_override = 2.56e3;
    pp.gprime_override = -7.56e5;
    pp.n0m = 2.0;
    pp.eta = 1.0;
    return pp;
}

}  // namespace

TEST_CASE("ground-state half-width at the quoted mass and frequency") {
    const auto dp = derive_params(section6_params());
    CHECK(dp.delta_x == doctest::Approx(29e-15).epsilon(0.02));
}

TEST_CASE("measurement rate from the quoted effective coupling") {
    const auto dp = derive_params(section6_params());
    CHECK(dp.Gamma == doctest::Approx(2.29e5).epsilon(0.01));
    // exact identity Gamma = 4 g'^2 / mu
    CHECK(dp.Gamma == doctest::Approx(4.0 * dp.gprime * dp.gprime / 1e7).epsilon(1e-15));
}

TEST_CASE("resonant tuning gives zero detuning") {
    const auto dp = derive_params(section6_params());
    CHECK(dp.Omega == doctest::Approx(5e10).epsilon(1e-15));
    CHECK(dp.delta == doctest::Approx(0.0));
}

TEST_CASE("chi formula at epsilon = 0") {
    PhysicalParams pp = section6_params();
    pp.chi_override.reset();
    pp.lambda = 1e6;
    const auto dp = derive_params(pp);
    // 4 lambda^2 / Omega
    CHECK(dp.chi == doctest::Approx(4.0 * 1e12 / 5e10).epsilon(1e-12));
    CHECK(dp.chi == doctest::Approx(80.0).epsilon(1e-12));
}

TEST_CASE("mechanical decay from quality factor") {
    const auto dp = derive_params(section6_params());
    CHECK(dp.gamma == doctest::Approx(2.0 * M_PI * 1e7 / 2e7).epsilon(1e-12));
}

TEST_CASE("scale consistency of the derivation") {
    PhysicalParams pp = section6_params();
    pp.chi_override.reset();
    pp.gprime_override.reset();
    pp.lambda = 2.0 * M_PI * 1.5e6;
    pp.g = 2.0 * M_PI * 2e5;
    pp.Q_m.reset();
    pp.gamma = 3.14;
    const auto dp1 = derive_params(pp);

    const double k = 3.7;
    PhysicalParams ps = pp;
    ps.omega_c *= k;
    ps.omega_m *= k;
    ps.Delta *= k;
    ps.epsilon *= k;
    *ps.g *= k;
    *ps.lambda *= k;
    ps.mu *= k;
    *ps.gamma *= k;
    ps.Gamma_q *= k;
    const auto dp2 = derive_params(ps);

    CHECK(dp2.Omega == doctest::Approx(k * dp1.Omega).epsilon(1e-12));
    CHECK(dp2.delta == doctest::Approx(k * dp1.delta).epsilon(1e-12));
    CHECK(dp2.gprime == doctest::Approx(k * dp1.gprime).epsilon(1e-12));
    CHECK(dp2.chi == doctest::Approx(k * dp1.chi).epsilon(1e-12));
    CHECK(dp2.Gamma == doctest::Approx(k * dp1.Gamma).epsilon(1e-12));
    CHECK(dp2.gamma == doctest::Approx(k * dp1.gamma).epsilon(1e-12));
    CHECK(*dp2.small_param == doctest::Approx(*dp1.small_param).epsilon(1e-12));
}

TEST_CASE("sign of g' follows -sign(g Delta)") {
    PhysicalParams pp = section6_params();
    pp.gprime_override.reset();
    pp.g = 2.0 * M_PI * 2e5;
    CHECK(derive_params(pp).gprime < 0.0);
    pp.Delta = -5e10;
    CHECK(derive_params(pp).gprime > 0.0);
}

TEST_CASE("regime warnings") {
    PhysicalParams pp = section6_params();
    CHECK(derive_params(pp).warnings.empty());

    // mu barely above g': hierarchy flag
    pp.mu = 1e6;
    const auto dp = derive_params(pp);
    CHECK(!dp.warnings.empty());

    // large dispersive parameter flag
    PhysicalParams ps = section6_params();
    ps.chi_override.reset();
    ps.lambda = 5e9;  // s = 0.1
    CHECK(!derive_params(ps).warnings.empty());
}

TEST_CASE("parameter validation errors") {
    PhysicalParams pp = section6_params();
    pp.Delta = 0.0;  // Omega = 0 with epsilon = 0
    CHECK_THROWS_AS(derive_params(pp), std::invalid_argument);

    pp = section6_params();
    pp.mu = 0.0;
    CHECK_THROWS_AS(derive_params(pp), std::invalid_argument);

    pp = section6_params();
    pp.gamma = 1.0;  // both Q_m and gamma set
    CHECK_THROWS_AS(derive_params(pp), std::invalid_argument);

    pp = section6_params();
    pp.eta = 1.5;
    CHECK_THROWS_AS(derive_params(pp), std::invalid_argument);

    pp = section6_params();
    pp.chi_override.reset();  // no lambda either
    CHECK_THROWS_AS(derive_params(pp), std::invalid_argument);
}

TEST_CASE("circuit couplings") {
    CircuitParams cp;
    cp.charging_energy = 4e-24;  // J
    cp.gate_charge = 0.5;
    cp.cap_ratio = 0.01;
    cp.cap_per_length = 1.6e-10;
    cp.cavity_length = 0.01;
    cp.separation = 1e-7;

    const auto cc = couplings_from_circuit(cp, 5e10, 1e-15, 2.0 * M_PI * 1e7);
    CHECK(cc.delta_x == doctest::Approx(29e-15).epsilon(0.02));

    // dimensional-analysis oracle, frozen:
    //   g = e (Cg/Cs) sqrt(omega_c / (hbar c L)) with the constants above
    //     = 1.602176634e-19 * 0.01 * sqrt(5e10 / (1.054571817e-34*1.6e-10*0.01))
    const double g_expected = 1.602176634e-19 * 0.01 *
                              std::sqrt(5e10 / (1.054571817e-34 * 1.6e-10 * 0.01));
    CHECK(cc.g == doctest::Approx(g_expected).epsilon(1e-12));
    CHECK(cc.g == doctest::Approx(2.758019e7).epsilon(1e-4));  // regression constant

    // lambda = 4 E_C n_g dx / (hbar d), frozen against the same oracle
    const double lam_expected = 4.0 * 4e-24 * 0.5 * cc.delta_x / (1.054571817e-34 * 1e-7);
    CHECK(cc.lambda == doctest::Approx(lam_expected).epsilon(1e-12));

    // doubling the separation halves lambda
    CircuitParams cp2 = cp;
    cp2.separation *= 2.0;
    const auto cc2 = couplings_from_circuit(cp2, 5e10, 1e-15, 2.0 * M_PI * 1e7);
    CHECK(cc2.lambda == doctest::Approx(0.5 * cc.lambda).epsilon(1e-12));

    CircuitParams bad = cp;
    bad.cavity_length = 0.0;
    CHECK_THROWS_AS(couplings_from_circuit(bad, 5e10, 1e-15, 1e7), std::invalid_argument);
}
