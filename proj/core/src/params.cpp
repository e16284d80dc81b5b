#include "qnd/params.hpp"

#include <cmath>
#include <stdexcept>

namespace qnd {

CircuitCouplings couplings_from_circuit(const CircuitParams& cp, double omega_c,
                                        double mass, double omega_m) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string("couplings_from_circuit: ") +
                                                    name + " must be positive");
    };
    positive(cp.charging_energy, "charging_energy");
    positive(cp.gate_charge, "gate_charge");
    positive(cp.cap_ratio, "cap_ratio");
    positive(cp.cap_per_length, "cap_per_length");
    positive(cp.cavity_length, "cavity_length");
    positive(cp.separation, "separation");
    positive(omega_c, "omega_c");
    positive(mass, "mass");
    positive(omega_m, "omega_m");
    if (cp.gate_charge > 1.0)
        throw std::invalid_argument("couplings_from_circuit: gate_charge must be in [0, 1]");

    using namespace constants;
    CircuitCouplings out;
    out.delta_x = std::sqrt(kHbar / (2.0 * mass * omega_m));
    out.g = kElementaryCharge * cp.cap_ratio *
            std::sqrt(omega_c / (kHbar * cp.cap_per_length * cp.cavity_length));
    out.lambda = 4.0 * cp.charging_energy * cp.gate_charge * out.delta_x /
                 (kHbar * cp.separation);
    return out;
}

DerivedParams derive_params(const PhysicalParams& pp) {
    if (pp.omega_c < 0 || pp.omega_m < 0 || pp.mu < 0 || pp.Gamma_q < 0 || pp.n0m < 0)
        throw std::invalid_argument("derive_params: rates and frequencies must be >= 0");
    if (pp.eta < 0.0 || pp.eta > 1.0)
        throw std::invalid_argument("derive_params: eta must be in [0, 1]");
    if (pp.Q_m.has_value() == pp.gamma.has_value())
        throw std::invalid_argument("derive_params: supply exactly one of Q_m, gamma");

    DerivedParams dp;
    dp.Omega = std::hypot(pp.epsilon, pp.Delta);
    if (dp.Omega == 0.0) throw std::invalid_argument("derive_params: Omega = 0");
    if (pp.mu == 0.0) throw std::invalid_argument("derive_params: mu = 0");

    dp.delta = 0.5 * (dp.Omega - pp.omega_c);
    dp.mu = pp.mu;
    dp.eta = pp.eta;

    if (pp.gprime_override) {
        dp.gprime = *pp.gprime_override;
    } else if (pp.g) {
        dp.gprime = -(*pp.g) * pp.Delta / dp.Omega;
    } else {
        throw std::invalid_argument("derive_params: need bare g or gprime_override");
    }

    if (pp.chi_override) {
        dp.chi = *pp.chi_override;
    } else if (pp.lambda) {
        dp.chi = 4.0 * (*pp.lambda) * (*pp.lambda) * pp.Delta * pp.Delta /
                 (dp.Omega * dp.Omega * dp.Omega);
    } else {
        throw std::invalid_argument("derive_params: need bare lambda or chi_override");
    }
    if (dp.chi < 0.0) throw std::invalid_argument("derive_params: chi must be >= 0");

    dp.Gamma = 4.0 * dp.gprime * dp.gprime / pp.mu;
    dp.gamma = pp.gamma ? *pp.gamma : pp.omega_m / *pp.Q_m;
    if (pp.mass > 0.0 && pp.omega_m > 0.0)
        dp.delta_x = std::sqrt(constants::kHbar / (2.0 * pp.mass * pp.omega_m));
    if (pp.lambda)
        dp.small_param = (*pp.lambda) * pp.Delta / (dp.Omega * dp.Omega);

    auto check_fast = [&](double rate, const char* name) {
        if (rate != 0.0 && pp.mu / std::abs(rate) < 10.0)
            dp.warnings.push_back(std::string("adiabatic hierarchy weak: mu/|") + name +
                                  "| < 10");
    };
    check_fast(dp.delta, "delta");
    check_fast(dp.chi, "chi");
    check_fast(dp.gprime, "g'");
    if (dp.small_param && *dp.small_param > 0.05)
        dp.warnings.push_back("dispersive expansion parameter lambda*Delta/Omega^2 > 0.05");

    return dp;
}

}  // namespace qnd
