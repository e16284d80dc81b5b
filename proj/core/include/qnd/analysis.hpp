// analysis.hpp — physics extraction from states and homodyne records: Fock
// distributions, conditioning detection, record-based phonon estimation,
// jump detection, ensemble statistics.

#pragma once

#include "qnd/engine.hpp"

#include <optional>

namespace qnd {

// p_n = <n|rho|n> for a state already reduced to the resonator. Small negative
// populations (within tolerance) are clipped to zero.
std::vector<double> fock_distribution(const DensityMatrix& rho_resonator);

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;
};

MeanVar phonon_stats(const DensityMatrix& rho_resonator);
// From precomputed moment series <b†b>, <(b†b)^2>.
std::vector<MeanVar> phonon_stats(const std::vector<double>& n1,
                                  const std::vector<double>& n2);

// First time the variance stays below `threshold` for at least `hold`;
// returns the start of the qualifying interval.
std::optional<double> detect_conditioning(const std::vector<double>& times,
                                          const std::vector<double>& var,
                                          double threshold, double hold);

struct JumpEvent {
    double time = 0.0;
    int n_before = 0;
    int n_after = 0;
    double confidence = 0.0;
};

// Change points of the rounded level that persist for at least `debounce`.
std::vector<JumpEvent> detect_jumps(const std::vector<double>& times,
                                    const std::vector<double>& level,
                                    double debounce);

struct EstimatorConfig {
    double window = 0.0;          // lock-in window length (s)
    double hop = 0.0;             // window advance; <= 0 means window/2
    int n_max = 0;                // comb covers n = 0 .. n_max
    double threshold = 0.9;       // minimum confidence to report a level
    bool use_periodogram = false; // generic periodogram cross-check mode
};

struct PhononEstimate {
    double t_center = 0.0;
    std::optional<int> n;         // empty when confidence < threshold
    int n_raw = 0;                // argmax level regardless of confidence
    double confidence = 0.0;
};

// Lock-in bank on the comb omega_n = 2(delta + chi n): per window, excess
// power at each comb frequency over the noise floor picks the level; the
// peak-to-runner-up power ratio r maps to confidence 1 - 1/r. `record_noise`
// is the coefficient of dW in the record (sets the noise floor).
std::vector<PhononEstimate> estimate_phonon_from_record(
    const std::vector<double>& dr, double dt, double chi, double delta,
    double record_noise, const EstimatorConfig& cfg);

struct EnsembleStats {
    std::vector<double> times;
    std::vector<double> mean, se, p10, p50, p90;
};

// Pointwise statistics of one observable series across trajectories; all
// records must share the same spec fingerprint.
EnsembleStats ensemble_stats(const std::vector<TrajectoryRecord>& records,
                             const std::vector<double> TrajectoryRecord::* series);

struct UnconditionalComparison {
    int checkpoints = 0;
    int mismatches = 0;               // |mean - reference| > 3 SE
    double max_se_units = 0.0;        // worst deviation in SE units
};

UnconditionalComparison compare_with_unconditional(const EnsembleStats& stats,
                                                   const std::vector<double>& ref_times,
                                                   const std::vector<double>& ref_values,
                                                   int checkpoints = 10);

}  // namespace qnd
