#include "qnd/model.hpp"

#include <cmath>

namespace qnd {

namespace {

std::uint64_t digest_doubles(const char* tag, std::initializer_list<double> vals) {
    std::uint64_t h = fnv1a(tag, std::string(tag).size());
    for (double v : vals) h = fnv1a(&v, sizeof v, h);
    return h;
}

}  // namespace

SmeSpec build_reduced_sme(const DerivedParams& dp, const PhysicalParams& pp,
                          bool feedback, Eigen::Index n_levels) {
    if (n_levels < 2) throw std::invalid_argument("build_reduced_sme: n_levels must be >= 2");
    if (feedback && dp.eta == 0.0)
        throw std::invalid_argument("build_reduced_sme: eta = 0 degenerates the feedback gain");

    SmeSpec spec;
    spec.layout = qubit_resonator_layout(n_levels);
    const Mat sm = spec.layout.embed(sigma_minus(), "qubit");
    const Mat sx = spec.layout.embed(sigma_x(), "qubit");
    const Mat sy = spec.layout.embed(sigma_y(), "qubit");
    const Mat sz = spec.layout.embed(sigma_z(), "qubit");
    const Mat b = spec.layout.embed(annihilation_op(n_levels), "resonator");
    const Mat nb = spec.layout.embed(number_op(n_levels), "resonator");

    spec.hamiltonian = dp.delta * sz + dp.chi * (sz * nb);

    spec.channels.push_back({pp.Gamma_q, sm, "qubit_decay"});
    spec.channels.push_back({dp.gamma * (pp.n0m + 1.0), b, "thermal_down"});
    spec.channels.push_back({dp.gamma * pp.n0m, Mat(b.adjoint()), "thermal_up"});

    const double eta = dp.eta;
    if (!feedback) {
        spec.channels.push_back({dp.Gamma, sm, "meas_backaction"});
        spec.backaction_index = static_cast<int>(spec.channels.size()) - 1;
        // theta = -pi turns the Eq.-form measurement operator into i sigma_-.
        spec.meas = {dp.Gamma, Mat(kImag * sm), eta};
    } else {
        spec.channels.push_back({dp.Gamma, Mat(sm - 0.5 * eta * sx), "meas_backaction_fb"});
        spec.backaction_index = static_cast<int>(spec.channels.size()) - 1;
        const double dephasing = (1.0 - eta) * dp.Gamma * eta / 4.0;
        if (dephasing > 0.0) spec.channels.push_back({dephasing, sx, "fb_dephasing"});
        spec.meas = {dp.Gamma, Mat(0.5 * sy), eta};
    }

    spec.record_gain = std::sqrt(dp.Gamma / dp.mu);
    spec.record_noise = 1.0 / std::sqrt(eta * dp.mu);
    spec.build_digest = digest_doubles(
        feedback ? "reduced_fb" : "reduced",
        {static_cast<double>(n_levels), dp.delta, dp.chi, dp.Gamma, dp.gamma, pp.n0m,
         pp.Gamma_q, dp.mu});
    spec.validate();
    return spec;
}

SmeSpec build_full_sme(const DerivedParams& dp, const PhysicalParams& pp,
                       Eigen::Index n_levels, Eigen::Index n_cavity, double theta) {
    if (n_levels < 2) throw std::invalid_argument("build_full_sme: n_levels must be >= 2");
    if (n_cavity < 2) throw std::invalid_argument("build_full_sme: n_cavity must be >= 2");

    SmeSpec spec;
    spec.layout = qubit_resonator_cavity_layout(n_levels, n_cavity);
    const Mat sm = spec.layout.embed(sigma_minus(), "qubit");
    const Mat sp = spec.layout.embed(sigma_plus(), "qubit");
    const Mat sz = spec.layout.embed(sigma_z(), "qubit");
    const Mat b = spec.layout.embed(annihilation_op(n_levels), "resonator");
    const Mat nb = spec.layout.embed(number_op(n_levels), "resonator");
    const Mat a = spec.layout.embed(annihilation_op(n_cavity), "cavity");

    spec.hamiltonian = dp.delta * sz + dp.chi * (sz * nb) +
                       dp.gprime * (a * sp + a.adjoint() * sm);

    spec.channels.push_back({dp.gamma * (pp.n0m + 1.0), b, "thermal_down"});
    spec.channels.push_back({dp.gamma * pp.n0m, Mat(b.adjoint()), "thermal_up"});
    spec.channels.push_back({dp.mu, a, "cavity_decay"});
    spec.backaction_index = static_cast<int>(spec.channels.size()) - 1;
    spec.channels.push_back({pp.Gamma_q, sm, "qubit_decay"});

    spec.meas = {dp.mu, Mat(std::exp(-kImag * theta) * a), dp.eta};
    spec.record_gain = 1.0;
    spec.record_noise = 1.0 / std::sqrt(dp.eta * dp.mu);
    spec.build_digest = digest_doubles(
        "full", {static_cast<double>(n_levels), static_cast<double>(n_cavity), dp.delta,
                 dp.chi, dp.gprime, dp.gamma, pp.n0m, pp.Gamma_q, dp.mu, theta});
    spec.validate();
    return spec;
}

double sw_dispersive_check(double lambda, double Delta, double epsilon,
                           double omega_m, Eigen::Index n_levels) {
    if (n_levels < 6) throw std::invalid_argument("sw_dispersive_check: n_levels must be >= 6");
    const double Omega = std::hypot(epsilon, Delta);
    if (Omega == 0.0) throw std::invalid_argument("sw_dispersive_check: Omega = 0");
    const double s = lambda * Delta / (Omega * Omega);
    if (std::abs(s) > 0.1)
        throw std::invalid_argument("sw_dispersive_check: expansion parameter too large");

    const SpaceLayout layout = qubit_resonator_layout(n_levels);
    const Mat b = annihilation_op(n_levels);
    const Mat x = b + b.adjoint();
    const Mat xf = layout.embed(x, "resonator");
    const Mat nf = layout.embed(number_op(n_levels), "resonator");
    const Mat szf = layout.embed(sigma_z(), "qubit");
    const Mat sxf = layout.embed(sigma_x(), "qubit");

    const Mat h = omega_m * nf + 0.5 * Omega * szf +
                  lambda * ((epsilon / Omega) * szf - (Delta / Omega) * sxf) * xf;

    // S = exp(i s G) with G = sigma_y (b + b†) Hermitian, via eigendecomposition.
    const Mat g = layout.embed(sigma_y(), "qubit") * xf;
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    const Vec phases =
        (kImag * s * es.eigenvalues().array()).exp().matrix().cast<Complex>();
    const Mat S = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

    const Mat hp = S.adjoint() * h * S;

    // sigma_z component of the conjugated Hamiltonian, as a resonator operator.
    const Mat rz = 0.5 * layout.partial_trace(szf * hp, {"resonator"});

    // Secular coefficient of b†b: difference of the two lowest diagonal
    // entries (levels far from the truncation edge).
    return (rz(1, 1) - rz(0, 0)).real();
}

}  // namespace qnd
