// qndsim — conditional-dynamics simulator of a feedback-controlled
// qubit/cavity readout of nanoresonator Fock states.
//
// Exit codes: 0 success, 1 configuration error, 2 integrator failure,
// 3 validation failure.

#include "qnd/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qnd::ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qndsim: stochastic master equation simulator of a "
                 "feedback-controlled dispersive phonon-number readout"};
    app.set_version_flag("--version", std::string("qndsim ") + qnd::kVersion);

    std::string config_path, preset, mode, out;
    double dt = -1.0, t_final = -1.0, eta = -1.0;
    long long seed = -1, n_levels = -1, ensemble = -1;
    bool strict = false;

    app.add_option("config", config_path, "config file (sectioned key = value text)");
    app.add_option("--preset", preset, "parameter preset (paper-sec6, paper-sec6-scaled)");
    app.add_option("--mode", mode, "trajectory|ensemble|unconditional|full-model|validate");
    app.add_option("--seed", seed, "master RNG seed");
    app.add_option("--dt", dt, "integrator step (s); omit for the rate-based default");
    app.add_option("--t-final", t_final, "horizon (s)");
    app.add_option("--eta", eta, "detection efficiency in [0, 1]");
    app.add_option("--n-levels", n_levels, "resonator Fock truncation");
    app.add_option("--ensemble", ensemble, "ensemble size");
    app.add_option("--out", out, "output directory");
    app.add_flag("--strict", strict, "escalate regime warnings to errors");

    CLI11_PARSE(app, argc, argv);

    try {
        qnd::RunConfig cfg;
        if (!config_path.empty()) cfg = qnd::parse_config(read_file(config_path));

        // Flags override file values.
        if (!preset.empty()) qnd::apply_preset(cfg, preset);
        if (!mode.empty()) cfg.mode = qnd::run_mode_from_string(mode);
        else if (config_path.empty())
            throw qnd::ConfigError("missing required key 'mode' (no config file, no --mode)");
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (dt >= 0.0) cfg.dt = dt;
        if (t_final >= 0.0) cfg.t_final = t_final;
        if (eta >= 0.0) cfg.params.eta = eta;
        if (n_levels > 0) cfg.n_levels = static_cast<int>(n_levels);
        if (ensemble > 0) cfg.ensemble = static_cast<int>(ensemble);
        if (!out.empty()) cfg.out = out;
        if (strict) cfg.strict = true;

        qnd::run(cfg);
        std::cout << "done: outputs in " << cfg.out << "\n";
        return 0;
    } catch (const qnd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const qnd::IntegratorError& e) {
        std::cerr << "integrator failure: " << e.what() << "\n";
        return 2;
    } catch (const qnd::ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
