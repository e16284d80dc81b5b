// params.hpp — experiment-level parameters and the effective constants of the
// dispersive readout chain derived from them.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qnd {

namespace constants {
constexpr double kElementaryCharge = 1.602176634e-19;  // C
constexpr double kHbar = 1.054571817e-34;              // J s
}  // namespace constants

// Circuit-level inputs for the two bare couplings.
struct CircuitParams {
    double charging_energy = 0.0;   // E_C (J)
    double gate_charge = 0.0;       // n_g^m, dimensionless, in [0, 1]
    double cap_ratio = 0.0;         // C_g / C_Sigma
    double cap_per_length = 0.0;    // c (F/m)
    double cavity_length = 0.0;     // L (m)
    double separation = 0.0;        // d (m)
};

struct CircuitCouplings {
    double g = 0.0;        // bare qubit-cavity coupling (rad/s)
    double lambda = 0.0;   // bare qubit-resonator coupling (rad/s)
    double delta_x = 0.0;  // resonator ground-state half-width (m)
};

// hbar*g = e (C_g/C_Sigma) sqrt(hbar*omega_c / (c L)),
// hbar*lambda = 4 E_C n_g^m Delta_x / d, Delta_x = sqrt(hbar / (2 m omega_m)).
CircuitCouplings couplings_from_circuit(const CircuitParams& cp, double omega_c,
                                        double mass, double omega_m);

struct PhysicalParams {
    double omega_c = 0.0;   // cavity frequency (rad/s)
    double omega_m = 0.0;   // mechanical frequency (rad/s)
    double Delta = 0.0;     // Josephson splitting (rad/s)
    double epsilon = 0.0;   // charge-bias splitting (rad/s)
    double mu = 0.0;        // cavity decay rate (1/s)
    double Gamma_q = 0.0;   // qubit spontaneous emission (1/s)
    double n0m = 0.0;       // mechanical bath occupation
    double eta = 1.0;       // detection efficiency in [0, 1]
    double mass = 0.0;      // resonator mass (kg)

    // Exactly one of (Q_m, gamma) must be supplied.
    std::optional<double> Q_m;
    std::optional<double> gamma;

    // Bare couplings (rad/s); either may be replaced by a direct override of
    // the corresponding effective constant.
    std::optional<double> g;
    std::optional<double> lambda;
    std::optional<double> chi_override;     // chi (1/s)
    std::optional<double> gprime_override;  // g' (1/s)

    bool operator==(const PhysicalParams&) const = default;
};

struct DerivedParams {
    double Omega = 0.0;    // qubit splitting sqrt(eps^2 + Delta^2) (rad/s)
    double delta = 0.0;    // (Omega - omega_c)/2 (rad/s)
    double gprime = 0.0;   // -g Delta / Omega (rad/s)
    double chi = 0.0;      // 4 lambda^2 Delta^2 / Omega^3 (rad/s)
    double Gamma = 0.0;    // measurement rate 4 g'^2 / mu (1/s)
    double gamma = 0.0;    // mechanical decay omega_m / Q_m (1/s)
    double delta_x = 0.0;  // sqrt(hbar / (2 m omega_m)) (m)
    double mu = 0.0;       // carried through for the record coefficients
    double eta = 1.0;

    // lambda Delta / Omega^2, known only when a bare lambda was supplied
    std::optional<double> small_param;

    // Regime conditions that failed (informative, not fatal): the adiabatic
    // hierarchy mu >> |delta|, chi, |g'| (ratio >= 10) and small_param <= 0.05.
    std::vector<std::string> warnings;
};

DerivedParams derive_params(const PhysicalParams& pp);

}  // namespace qnd
