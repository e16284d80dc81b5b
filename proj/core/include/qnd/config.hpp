// config.hpp — run configuration: flat sectioned key-value text, presets,
// and exact round-trip serialization.

#pragma once

#include "qnd/params.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qnd {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunMode { Trajectory, Ensemble, Unconditional, FullModel, Validate };

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct RunConfig {
    RunMode mode = RunMode::Trajectory;
    std::string preset;       // "", "paper-sec6", "paper-sec6-scaled"
    int ensemble = 1;
    std::string out = "out";
    int sample_stride = 100;
    bool strict = false;

    PhysicalParams params;
    int n_levels = 15;
    int n_cavity = 5;
    double theta = -M_PI;     // full-model local-oscillator phase
    double scale = 1.0;       // common inflation factor on (chi, gamma)
    bool feedback = true;     // reduced equation variant
    std::string initial = "thermal";  // or "ground"

    double dt = 0.0;          // 0 selects the rate-based default
    double t_final = 0.0;
    std::uint64_t seed = 1;
    int renorm_every = 1;
    int diag_every = 1000;

    bool operator==(const RunConfig&) const = default;
};

// Fills the parameter block of the named preset; throws on unknown name.
void apply_preset(RunConfig& cfg, const std::string& name);

// Parses sectioned key = value text ([run], [params], [integrator]); unknown
// keys are errors. A `preset` key is applied before explicit keys override it.
RunConfig parse_config(const std::string& text);

std::string serialize_config(const RunConfig& cfg);

// Shortest decimal representation that round-trips binary64 exactly.
std::string format_double(double v);

// The common inflation factor used by the paper-sec6-scaled preset.
constexpr double kScaledPresetFactor = 5.0;

}  // namespace qnd
