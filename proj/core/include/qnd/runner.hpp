// runner.hpp — experiment orchestration: resolve a RunConfig into equations
// and initial states, execute the requested mode, and serialize results.

#pragma once

#include "qnd/analysis.hpp"
#include "qnd/config.hpp"
#include "qnd/feedback.hpp"
#include "qnd/model.hpp"

namespace qnd {

inline constexpr const char* kVersion = "0.1.0";

// Everything derived from a RunConfig that the modes need.
struct ResolvedRun {
    RunConfig cfg;
    PhysicalParams pp;
    DerivedParams dp;       // chi and gamma already carry cfg.scale
    SmeSpec spec;           // per cfg.mode: reduced (Eq. form per feedback flag) or full
    DensityMatrix rho0;
    IntegratorConfig integ;
};

ResolvedRun resolve(const RunConfig& cfg);

// Runs the configured experiment and writes manifest, trajectory CSVs and
// analysis CSVs under cfg.out. Throws ConfigError / IntegratorError /
// ValidationError; the CLI maps these to exit codes 1 / 2 / 3.
void run(const RunConfig& cfg);

enum class Figure { Fig1, Fig2, Fig3 };

// Plot-ready column extracts: fig1 = (t, mean_n, var_n), fig2 = (t, sy),
// fig3 = (t, var_n at high eta, var_n at low eta). Fig3 requires exactly two
// records that differ only in detection efficiency.
void export_figure_data(const std::vector<TrajectoryRecord>& records, Figure which,
                        const std::string& path);

// Deterministic parallel ensemble execution: trajectories are dispatched to
// workers by index, each with its own noise stream; `consume` is called in
// index order after all workers finish.
void run_ensemble(const SmeSpec& spec, const DensityMatrix& rho0,
                  const IntegratorConfig& base_cfg, int count,
                  const std::function<void(TrajectoryRecord&&)>& consume);

}  // namespace qnd
