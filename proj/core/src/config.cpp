#include "qnd/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace qnd {

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::Trajectory: return "trajectory";
        case RunMode::Ensemble: return "ensemble";
        case RunMode::Unconditional: return "unconditional";
        case RunMode::FullModel: return "full-model";
        case RunMode::Validate: return "validate";
    }
    throw ConfigError("unknown mode enum");
}

RunMode run_mode_from_string(const std::string& s) {
    if (s == "trajectory") return RunMode::Trajectory;
    if (s == "ensemble") return RunMode::Ensemble;
    if (s == "unconditional") return RunMode::Unconditional;
    if (s == "full-model") return RunMode::FullModel;
    if (s == "validate") return RunMode::Validate;
    throw ConfigError("unknown mode '" + s + "'");
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw ConfigError("format_double failed");
    return std::string(buf, end);
}

void apply_preset(RunConfig& cfg, const std::string& name) {
    if (name != "paper-sec6" && name != "paper-sec6-scaled")
        throw ConfigError("unknown preset '" + name + "'");
    cfg.preset = name;
    auto& p = cfg.params;
    p.omega_m = 2.0 * M_PI * 1e7;
    p.mass = 1e-15;
    p.Delta = 5e10;
    p.epsilon = 0.0;
    p.omega_c = 5e10;
    p.mu = 1e7;
    p.Q_m = 2e7;
    p.gamma.reset();
    p.Gamma_q = 1e4;
    p.chi_override = 2.56e3;
    p.gprime_override = -7.56e5;
    p.n0m = 2.0;
    p.eta = 1.0;
    cfg.n_levels = 15;
    cfg.scale = name == "paper-sec6-scaled" ? kScaledPresetFactor : 1.0;
}

namespace {

struct KeyValue {
    std::string section, key, value;
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const KeyValue& kv) {
    const std::string& s = kv.value;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(kv.line) + ": key '" + kv.key +
                          "' has non-numeric value '" + s + "'");
    }
    if (used != s.size())
        throw ConfigError("line " + std::to_string(kv.line) + ": trailing characters in value '" +
                          s + "' for key '" + kv.key + "'");
    return v;
}

long long parse_int(const KeyValue& kv) {
    // Integers are parsed exactly (seeds may not survive a double round trip).
    if (kv.value.find_first_of(".eE") == std::string::npos) {
        try {
            std::size_t used = 0;
            const long long r = std::stoll(kv.value, &used);
            if (used == kv.value.size()) return r;
        } catch (const std::exception&) {
        }
    }
    const double v = parse_number(kv);
    const auto r = static_cast<long long>(std::llround(v));
    if (static_cast<double>(r) != v)
        throw ConfigError("key '" + kv.key + "' must be an integer");
    return r;
}

bool parse_bool(const KeyValue& kv) {
    if (kv.value == "true") return true;
    if (kv.value == "false") return false;
    throw ConfigError("key '" + kv.key + "' must be true or false");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    std::vector<KeyValue> entries;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_mode = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "run" && section != "params" && section != "integrator")
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" +
                                  section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        KeyValue kv{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
        if (kv.key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        entries.push_back(std::move(kv));
    }

    RunConfig cfg;
    // Preset first, so explicit keys override its fills.
    for (const auto& kv : entries)
        if (kv.section == "run" && kv.key == "preset") apply_preset(cfg, kv.value);

    for (const auto& kv : entries) {
        auto set_opt = [&](std::optional<double>& tgt) { tgt = parse_number(kv); };
        if (kv.section == "run") {
            if (kv.key == "mode") {
                cfg.mode = run_mode_from_string(kv.value);
                saw_mode = true;
            } else if (kv.key == "preset") {
                // applied above
            } else if (kv.key == "ensemble") {
                cfg.ensemble = static_cast<int>(parse_int(kv));
            } else if (kv.key == "out") {
                cfg.out = kv.value;
            } else if (kv.key == "sample_stride") {
                cfg.sample_stride = static_cast<int>(parse_int(kv));
            } else if (kv.key == "strict") {
                cfg.strict = parse_bool(kv);
            } else {
                throw ConfigError("unknown key '" + kv.key + "' in [run]");
            }
        } else if (kv.section == "params") {
            auto& p = cfg.params;
            if (kv.key == "omega_c") p.omega_c = parse_number(kv);
            else if (kv.key == "omega_m") p.omega_m = parse_number(kv);
            else if (kv.key == "Delta") p.Delta = parse_number(kv);
            else if (kv.key == "epsilon") p.epsilon = parse_number(kv);
            else if (kv.key == "mu") p.mu = parse_number(kv);
            else if (kv.key == "Gamma_q") p.Gamma_q = parse_number(kv);
            else if (kv.key == "n0m") p.n0m = parse_number(kv);
            else if (kv.key == "eta") p.eta = parse_number(kv);
            else if (kv.key == "mass") p.mass = parse_number(kv);
            else if (kv.key == "Q_m") { set_opt(p.Q_m); p.gamma.reset(); }
            else if (kv.key == "gamma") { set_opt(p.gamma); p.Q_m.reset(); }
            else if (kv.key == "g") set_opt(p.g);
            else if (kv.key == "lambda") set_opt(p.lambda);
            else if (kv.key == "chi_override") set_opt(p.chi_override);
            else if (kv.key == "gprime_override") set_opt(p.gprime_override);
            else if (kv.key == "n_levels") cfg.n_levels = static_cast<int>(parse_int(kv));
            else if (kv.key == "n_cavity") cfg.n_cavity = static_cast<int>(parse_int(kv));
            else if (kv.key == "theta") cfg.theta = parse_number(kv);
            else if (kv.key == "scale") cfg.scale = parse_number(kv);
            else if (kv.key == "feedback") cfg.feedback = parse_bool(kv);
            else if (kv.key == "initial") {
                if (kv.value != "thermal" && kv.value != "ground")
                    throw ConfigError("initial must be 'thermal' or 'ground'");
                cfg.initial = kv.value;
            }
            else throw ConfigError("unknown key '" + kv.key + "' in [params]");
        } else {  // integrator
            if (kv.key == "dt") cfg.dt = parse_number(kv);
            else if (kv.key == "t_final") cfg.t_final = parse_number(kv);
            else if (kv.key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(kv));
            else if (kv.key == "renorm_every") cfg.renorm_every = static_cast<int>(parse_int(kv));
            else if (kv.key == "diag_every") cfg.diag_every = static_cast<int>(parse_int(kv));
            else throw ConfigError("unknown key '" + kv.key + "' in [integrator]");
        }
    }

    if (!saw_mode) throw ConfigError("missing required key 'mode' in [run]");
    if (cfg.params.eta < 0.0 || cfg.params.eta > 1.0)
        throw ConfigError("eta must lie in [0, 1]");
    if (cfg.ensemble < 1) throw ConfigError("ensemble must be >= 1");
    if (cfg.sample_stride < 1) throw ConfigError("sample_stride must be >= 1");
    if (cfg.n_levels < 2) throw ConfigError("n_levels must be >= 2");
    if (cfg.scale <= 0.0) throw ConfigError("scale must be > 0");
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[run]\n";
    out << "mode = " << to_string(cfg.mode) << "\n";
    if (!cfg.preset.empty()) out << "preset = " << cfg.preset << "\n";
    out << "ensemble = " << cfg.ensemble << "\n";
    out << "out = " << cfg.out << "\n";
    out << "sample_stride = " << cfg.sample_stride << "\n";
    out << "strict = " << (cfg.strict ? "true" : "false") << "\n";

    out << "\n[params]\n";
    const auto& p = cfg.params;
    auto kv = [&](const char* k, double v) { out << k << " = " << format_double(v) << "\n"; };
    kv("omega_c", p.omega_c);
    kv("omega_m", p.omega_m);
    kv("Delta", p.Delta);
    kv("epsilon", p.epsilon);
    kv("mu", p.mu);
    kv("Gamma_q", p.Gamma_q);
    kv("n0m", p.n0m);
    kv("eta", p.eta);
    kv("mass", p.mass);
    if (p.Q_m) kv("Q_m", *p.Q_m);
    if (p.gamma) kv("gamma", *p.gamma);
    if (p.g) kv("g", *p.g);
    if (p.lambda) kv("lambda", *p.lambda);
    if (p.chi_override) kv("chi_override", *p.chi_override);
    if (p.gprime_override) kv("gprime_override", *p.gprime_override);
    out << "n_levels = " << cfg.n_levels << "\n";
    out << "n_cavity = " << cfg.n_cavity << "\n";
    kv("theta", cfg.theta);
    kv("scale", cfg.scale);
    out << "feedback = " << (cfg.feedback ? "true" : "false") << "\n";
    out << "initial = " << cfg.initial << "\n";

    out << "\n[integrator]\n";
    kv("dt", cfg.dt);
    kv("t_final", cfg.t_final);
    out << "seed = " << cfg.seed << "\n";
    out << "renorm_every = " << cfg.renorm_every << "\n";
    out << "diag_every = " << cfg.diag_every << "\n";
    return out.str();
}

}  // namespace qnd
