#include "qnd/feedback.hpp"
#include "qnd/model.hpp"

#include <doctest.h>

using namespace qnd;

namespace {

PhysicalParams paper_params(double eta) {
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
    pp.eta = eta;
    return pp;
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// Deterministic generator as a dense superoperator matrix.
Mat drift_matrix(const SmeSpec& spec) {
    const Eigen::Index d = spec.layout.total_dim();
    Mat sup(d * d, d * d);
    Mat basis = Mat::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) {
            basis(i, j) = 1.0;
            Mat out = -kImag * (spec.hamiltonian * basis - basis * spec.hamiltonian);
            for (const auto& ch : spec.channels) {
                if (ch.rate == 0.0) continue;
                const Mat ss = ch.op.adjoint() * ch.op;
                out += ch.rate * (ch.op * basis * ch.op.adjoint() -
                                  0.5 * (ss * basis + basis * ss));
            }
            sup.col(j * d + i) = Eigen::Map<const Vec>(out.data(), d * d);
            basis(i, j) = 0.0;
        }
    return sup;
}

FeedbackTerms section5_feedback(const SmeSpec& base, const DerivedParams& dp, double eta) {
    FeedbackTerms fb;
    fb.k = dp.Gamma;
    fb.c = base.meas.op;  // i sigma_-
    fb.F = base.layout.embed(sigma_x(), "qubit");
    fb.lambda = eta * dp.Gamma / 2.0;  // lambda F = (eta Gamma / 2) sigma_x
    fb.eta = eta;
    return fb;
}

}  // namespace

TEST_CASE("zero feedback gain returns the base equation") {
    const auto pp = paper_params(0.8);
    const auto dp = derive_params(pp);
    const auto base = build_reduced_sme(dp, pp, false, 6);
    auto fb = section5_feedback(base, dp, 0.8);
    fb.lambda = 0.0;
    const auto out = assemble_feedback_me(base, fb);
    CHECK(out.fingerprint() == base.fingerprint());
}

TEST_CASE("feedback assembly reproduces the direct feedback equation") {
    for (double eta : {0.3, 0.7, 1.0}) {
        const auto pp = paper_params(eta);
        const auto dp = derive_params(pp);
        const auto base = build_reduced_sme(dp, pp, false, 6);
        const auto direct = build_reduced_sme(dp, pp, true, 6);
        const auto assembled = assemble_feedback_me(base, section5_feedback(base, dp, eta));

        // identical measurement channel: sqrt(eta Gamma) H[sigma_y/2]
        CHECK(assembled.meas.rate == doctest::Approx(direct.meas.rate));
        CHECK(assembled.meas.eta == doctest::Approx(eta));
        CHECK(max_abs(assembled.meas.op - direct.meas.op) < 1e-12);

        // identical deterministic generator (channel sets match as
        // superoperators; individual operators may differ by phase)
        const Mat da = drift_matrix(assembled);
        const Mat dd = drift_matrix(direct);
        CHECK(max_abs(da - dd) / dp.Gamma < 1e-12);

        // no Hamiltonian correction: c†F + F c = i(sx sm - sp sx) = 0
        CHECK(max_abs(assembled.hamiltonian - base.hamiltonian) / dp.Gamma < 1e-14);
    }
}

TEST_CASE("feedback dephasing channel rate") {
    const double eta = 0.4;
    const auto pp = paper_params(eta);
    const auto dp = derive_params(pp);
    const auto base = build_reduced_sme(dp, pp, false, 6);
    const auto out = assemble_feedback_me(base, section5_feedback(base, dp, eta));

    // (lambda^2/k)(1-eta)/eta with lambda = eta Gamma / 2 acting on sigma_x:
    // rate * F^2 scaling equals (1-eta) eta Gamma / 4 on the unit-normalized op
    bool found = false;
    for (const auto& ch : out.channels)
        if (ch.tag == "fb_dephasing") {
            found = true;
            CHECK(ch.rate == doctest::Approx((eta * dp.Gamma / 2.0) * (eta * dp.Gamma / 2.0) /
                                             dp.Gamma * (1.0 - eta) / eta));
        }
    CHECK(found);
}

TEST_CASE("feedback assembly rejects degenerate inputs") {
    const auto pp = paper_params(1.0);
    const auto dp = derive_params(pp);
    const auto base = build_reduced_sme(dp, pp, false, 6);
    auto fb = section5_feedback(base, dp, 1.0);

    fb.eta = 0.0;
    CHECK_THROWS_AS(assemble_feedback_me(base, fb), std::invalid_argument);

    fb = section5_feedback(base, dp, 1.0);
    fb.F = base.layout.embed(sigma_minus(), "qubit");  // not Hermitian
    CHECK_THROWS_AS(assemble_feedback_me(base, fb), std::invalid_argument);

    fb = section5_feedback(base, dp, 1.0);
    fb.k = 0.0;
    CHECK_THROWS_AS(assemble_feedback_me(base, fb), std::invalid_argument);
}
