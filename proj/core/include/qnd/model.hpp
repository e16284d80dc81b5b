// model.hpp — assembly of the three master-equation variants of the readout
// chain (full three-mode, reduced dissipative, reduced with feedback) and a
// numerical check of the dispersive coupling extraction.

#pragma once

#include "qnd/params.hpp"
#include "qnd/sme.hpp"

namespace qnd {

// Reduced qubit ⊗ resonator equation. feedback = false gives the dissipative
// homodyne measurement of the qubit (local-oscillator phase fixed at -pi);
// feedback = true gives the feedback-modified equation whose measurement
// channel is sqrt(eta Gamma) H[sigma_y / 2].
SmeSpec build_reduced_sme(const DerivedParams& dp, const PhysicalParams& pp,
                          bool feedback, Eigen::Index n_levels);

// Full qubit ⊗ resonator ⊗ cavity equation with homodyne detection on the
// cavity output at local-oscillator phase theta.
SmeSpec build_full_sme(const DerivedParams& dp, const PhysicalParams& pp,
                       Eigen::Index n_levels, Eigen::Index n_cavity,
                       double theta = -M_PI);

// Conjugates the cavity-free interaction Hamiltonian by
// S = exp[i (lambda Delta / Omega^2) sigma_y (b + b†)] using a matrix
// exponential and returns the secular coefficient of b†b sigma_z.
double sw_dispersive_check(double lambda, double Delta, double epsilon,
                           double omega_m, Eigen::Index n_levels);

}  // namespace qnd
