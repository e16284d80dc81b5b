#include "qnd/runner.hpp"

#include "qnd/csv.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <thread>

namespace qnd {

namespace {

namespace fs = std::filesystem;

DensityMatrix initial_state(const SpaceLayout& layout, const PhysicalParams& pp,
                            const std::string& initial, int n_levels) {
    const Mat qubit = ket_g() * ket_g().adjoint();
    Mat res;
    if (initial == "thermal")
        res = thermal_state(pp.n0m, n_levels).mat();
    else
        res = fock_state(0, n_levels).mat();
    Mat rho = tensor(qubit, res);
    if (layout.has_factor("cavity"))
        rho = tensor(rho, fock_state(0, layout.factor_dim("cavity")).mat());
    return DensityMatrix(rho);
}

std::string traj_name(int idx) {
    std::ostringstream s;
    s << "traj_" << std::setw(3) << std::setfill('0') << idx;
    return s.str();
}

std::string hex64(std::uint64_t v) {
    std::ostringstream s;
    s << "0x" << std::hex << v;
    return s.str();
}

struct Manifest {
    std::vector<std::pair<std::string, std::string>> entries;
    std::uint64_t hash = 0;

    void add(const std::string& k, const std::string& v) { entries.emplace_back(k, v); }
    void add(const std::string& k, double v) { add(k, format_double(v)); }

    void write(const std::string& path) {
        std::string body;
        for (const auto& [k, v] : entries) body += k + " = " + v + "\n";
        hash = fnv1a(body.data(), body.size());
        std::ofstream out(path);
        if (!out) throw std::runtime_error("manifest: cannot open " + path);
        out << body << "manifest_hash = " << hex64(hash) << "\n";
    }
};

void write_traj_csv(const std::string& path, const TrajectoryRecord& rec,
                    std::uint64_t manifest_hash) {
    CsvWriter csv(path);
    csv.comment("manifest_hash " + hex64(manifest_hash));
    csv.comment("fingerprint " + hex64(rec.fingerprint));
    csv.comment("seed " + std::to_string(rec.seed) + " traj_index " +
                std::to_string(rec.traj_index));
    csv.header({"t", "nbar", "var_n", "sx", "sy", "sz", "purity", "trace_dev", "leakage"});
    for (std::size_t i = 0; i < rec.times.size(); ++i)
        csv.row(std::array{rec.times[i], rec.nbar[i], rec.var_n[i], rec.sx[i], rec.sy[i],
                           rec.sz[i], rec.purity[i], rec.trace_dev[i], rec.leakage[i]});
}

void write_record_csv(const std::string& path, const TrajectoryRecord& rec,
                      std::uint64_t manifest_hash) {
    CsvWriter csv(path);
    csv.comment("manifest_hash " + hex64(manifest_hash));
    csv.comment("fingerprint " + hex64(rec.fingerprint));
    csv.header({"t", "dr"});
    for (std::size_t i = 0; i < rec.dr.size(); ++i)
        csv.row(std::array{static_cast<double>(i + 1) * rec.dt, rec.dr[i]});
}

void write_uncond_csv(const std::string& path, const UnconditionalRun& run,
                      std::uint64_t manifest_hash) {
    CsvWriter csv(path);
    csv.comment("manifest_hash " + hex64(manifest_hash));
    csv.header({"t", "nbar", "var_n", "sx", "sy", "sz", "purity"});
    for (std::size_t i = 0; i < run.times.size(); ++i)
        csv.row(std::array{run.times[i], run.nbar[i], run.var_n[i], run.sx[i], run.sy[i],
                           run.sz[i], run.purity[i]});
}

// Analysis defaults; documented in the README.
constexpr double kConditioningThreshold = 0.1;
constexpr int kConditioningHoldSamples = 10;
constexpr int kJumpDebounceSamples = 5;

void write_trajectory_analysis(const std::string& dir, const TrajectoryRecord& rec,
                               const DerivedParams& dp, const SmeSpec& spec,
                               std::uint64_t manifest_hash, int idx) {
    const double sample_dt = rec.times.size() > 1 ? rec.times[1] - rec.times[0] : rec.dt;
    const double hold = kConditioningHoldSamples * sample_dt;
    const auto cond = detect_conditioning(rec.times, rec.var_n, kConditioningThreshold, hold);
    {
        CsvWriter csv(dir + "/conditioning_" + traj_name(idx) + ".csv");
        csv.comment("manifest_hash " + hex64(manifest_hash));
        csv.header({"traj_index", "t_conditioned", "threshold", "hold"});
        csv.row(std::array{static_cast<double>(idx), cond.value_or(-1.0),
                           kConditioningThreshold, hold});
    }
    {
        const auto jumps = detect_jumps(rec.times, rec.nbar, kJumpDebounceSamples * sample_dt);
        CsvWriter csv(dir + "/jumps_" + traj_name(idx) + ".csv");
        csv.comment("manifest_hash " + hex64(manifest_hash));
        csv.header({"t", "n_before", "n_after", "confidence"});
        for (const auto& ev : jumps)
            csv.row(std::array{ev.time, static_cast<double>(ev.n_before),
                               static_cast<double>(ev.n_after), ev.confidence});
    }
    if (dp.chi > 0.0 && !rec.dr.empty()) {
        EstimatorConfig ecfg;
        ecfg.window = 2.0 * M_PI / dp.chi;
        ecfg.n_max = static_cast<int>(spec.layout.factor_dim("resonator")) - 1;
        if (static_cast<double>(rec.dr.size()) * rec.dt >= ecfg.window) {
            const auto track = estimate_phonon_from_record(rec.dr, rec.dt, dp.chi, dp.delta,
                                                           spec.record_noise, ecfg);
            CsvWriter csv(dir + "/estimator_" + traj_name(idx) + ".csv");
            csv.comment("manifest_hash " + hex64(manifest_hash));
            csv.header({"t", "n_est", "n_raw", "confidence"});
            for (const auto& e : track)
                csv.row(std::array{e.t_center,
                                   e.n ? static_cast<double>(*e.n) : -1.0,
                                   static_cast<double>(e.n_raw), e.confidence});
        }
    }
}

void write_ensemble_stats_csv(const std::string& path, const EnsembleStats& st,
                              std::uint64_t manifest_hash) {
    CsvWriter csv(path);
    csv.comment("manifest_hash " + hex64(manifest_hash));
    csv.header({"t", "mean", "se", "p10", "p50", "p90"});
    for (std::size_t i = 0; i < st.times.size(); ++i)
        csv.row(std::array{st.times[i], st.mean[i], st.se[i], st.p10[i], st.p50[i], st.p90[i]});
}

Manifest build_manifest(const ResolvedRun& rr) {
    Manifest m;
    const auto& cfg = rr.cfg;
    m.add("version", std::string(kVersion));
    m.add("mode", to_string(cfg.mode));
    m.add("preset", cfg.preset.empty() ? "none" : cfg.preset);
    m.add("omega_c", rr.pp.omega_c);
    m.add("omega_m", rr.pp.omega_m);
    m.add("Delta", rr.pp.Delta);
    m.add("epsilon", rr.pp.epsilon);
    m.add("mu", rr.pp.mu);
    m.add("Gamma_q", rr.pp.Gamma_q);
    m.add("n0m", rr.pp.n0m);
    m.add("eta", rr.pp.eta);
    m.add("mass", rr.pp.mass);
    if (rr.pp.Q_m) m.add("Q_m", *rr.pp.Q_m);
    if (rr.pp.g) m.add("g", *rr.pp.g);
    if (rr.pp.lambda) m.add("lambda", *rr.pp.lambda);
    if (rr.pp.chi_override) m.add("chi_override", *rr.pp.chi_override);
    if (rr.pp.gprime_override) m.add("gprime_override", *rr.pp.gprime_override);
    m.add("scale", cfg.scale);
    m.add("derived_Omega", rr.dp.Omega);
    m.add("derived_delta", rr.dp.delta);
    m.add("derived_gprime", rr.dp.gprime);
    m.add("derived_chi", rr.dp.chi);
    m.add("derived_Gamma", rr.dp.Gamma);
    m.add("derived_gamma", rr.dp.gamma);
    if (rr.dp.delta_x > 0.0) m.add("derived_delta_x", rr.dp.delta_x);
    if (rr.dp.small_param) m.add("derived_small_param", *rr.dp.small_param);
    m.add("record_gain", rr.spec.record_gain);
    m.add("record_noise", rr.spec.record_noise);
    m.add("n_levels", std::to_string(cfg.n_levels));
    m.add("n_cavity", std::to_string(cfg.n_cavity));
    m.add("theta", cfg.theta);
    m.add("feedback", cfg.feedback ? "true" : "false");
    m.add("initial", cfg.initial);
    m.add("ensemble", std::to_string(cfg.ensemble));
    m.add("sample_stride", std::to_string(cfg.sample_stride));
    m.add("dt", rr.integ.dt);
    m.add("t_final", rr.integ.t_final);
    m.add("seed", std::to_string(rr.integ.seed));
    m.add("renorm_every", std::to_string(rr.integ.renorm_every));
    m.add("diag_every", std::to_string(rr.integ.diag_every));
    m.add("spec_fingerprint", hex64(trajectory_fingerprint(rr.spec, rr.integ)));
    m.add("build_digest", hex64(rr.spec.build_digest));
    for (std::size_t i = 0; i < rr.dp.warnings.size(); ++i)
        m.add("warning_" + std::to_string(i), rr.dp.warnings[i]);
    return m;
}

}  // namespace

ResolvedRun resolve(const RunConfig& cfg) {
    PhysicalParams pp = cfg.params;
    DerivedParams dp;
    try {
        dp = derive_params(pp);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    dp.chi *= cfg.scale;
    dp.gamma *= cfg.scale;
    if (cfg.strict && !dp.warnings.empty()) {
        std::string msg = "strict mode: regime warnings:";
        for (const auto& w : dp.warnings) msg += " [" + w + "]";
        throw ConfigError(msg);
    }
    if (cfg.t_final <= 0.0) throw ConfigError("missing required key 't_final' in [integrator]");

    const bool full = cfg.mode == RunMode::FullModel || cfg.mode == RunMode::Validate;
    SmeSpec spec;
    try {
        spec = full ? build_full_sme(dp, pp, cfg.n_levels, cfg.n_cavity, cfg.theta)
                    : build_reduced_sme(dp, pp, cfg.feedback, cfg.n_levels);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    IntegratorConfig integ;
    integ.dt = cfg.dt > 0.0 ? cfg.dt : default_dt(spec);
    integ.t_final = cfg.t_final;
    integ.seed = cfg.seed;
    integ.renorm_every = cfg.renorm_every;
    integ.diag_every = cfg.diag_every;
    integ.sample_every = cfg.sample_stride;
    integ.keep_record =
        cfg.mode == RunMode::Trajectory || cfg.mode == RunMode::FullModel;

    return ResolvedRun{cfg, pp, dp, spec,
                       initial_state(spec.layout, pp, cfg.initial, cfg.n_levels), integ};
}

void run_ensemble(const SmeSpec& spec, const DensityMatrix& rho0,
                  const IntegratorConfig& base_cfg, int count,
                  const std::function<void(TrajectoryRecord&&)>& consume) {
    const int workers =
        std::max(1, std::min<int>(static_cast<int>(std::thread::hardware_concurrency()), count));
    for (int start = 0; start < count; start += workers) {
        const int batch = std::min(workers, count - start);
        std::vector<std::future<TrajectoryRecord>> futs;
        futs.reserve(static_cast<std::size_t>(batch));
        for (int j = 0; j < batch; ++j) {
            IntegratorConfig cfg = base_cfg;
            cfg.traj_index = static_cast<std::uint64_t>(start + j);
            futs.push_back(std::async(std::launch::async, [&spec, &rho0, cfg] {
                return run_trajectory(spec, rho0, cfg);
            }));
        }
        for (auto& f : futs) consume(f.get());
    }
}

void export_figure_data(const std::vector<TrajectoryRecord>& records, Figure which,
                        const std::string& path) {
    if (records.empty()) throw ValidationError("export_figure_data: no records");
    const auto& r0 = records.front();
    CsvWriter csv(path);
    csv.comment("fingerprint " + hex64(r0.fingerprint));
    switch (which) {
        case Figure::Fig1:
            csv.header({"t", "mean_n", "var_n"});
            for (std::size_t i = 0; i < r0.times.size(); ++i)
                csv.row(std::array{r0.times[i], r0.nbar[i], r0.var_n[i]});
            break;
        case Figure::Fig2:
            csv.header({"t", "sy"});
            for (std::size_t i = 0; i < r0.times.size(); ++i)
                csv.row(std::array{r0.times[i], r0.sy[i]});
            break;
        case Figure::Fig3: {
            if (records.size() != 2)
                throw ValidationError("export_figure_data: fig3 needs exactly two records");
            const auto& a = records[0];
            const auto& b = records[1];
            if (a.build_digest != b.build_digest)
                throw ValidationError(
                    "export_figure_data: fig3 records come from different models");
            if (a.eta == b.eta)
                throw ValidationError("export_figure_data: fig3 records share eta");
            if (a.times != b.times)
                throw ValidationError("export_figure_data: fig3 grids not aligned");
            const auto& hi = a.eta > b.eta ? a : b;
            const auto& lo = a.eta > b.eta ? b : a;
            csv.header({"t", "var_n_eta1", "var_n_etaLow"});
            for (std::size_t i = 0; i < hi.times.size(); ++i)
                csv.row(std::array{hi.times[i], hi.var_n[i], lo.var_n[i]});
            break;
        }
    }
}

void run(const RunConfig& cfg) {
    ResolvedRun rr = resolve(cfg);
    fs::create_directories(rr.cfg.out);
    Manifest manifest = build_manifest(rr);
    manifest.write(rr.cfg.out + "/manifest.txt");
    const std::uint64_t mh = manifest.hash;
    const std::string dir = rr.cfg.out;

    switch (rr.cfg.mode) {
        case RunMode::Trajectory:
        case RunMode::FullModel: {
            auto rec = run_trajectory(rr.spec, rr.rho0, rr.integ);
            write_traj_csv(dir + "/" + traj_name(0) + ".csv", rec, mh);
            write_record_csv(dir + "/record_" + traj_name(0) + ".csv", rec, mh);
            if (rr.spec.layout.has_factor("resonator") && !rr.spec.layout.has_factor("cavity"))
                write_trajectory_analysis(dir, rec, rr.dp, rr.spec, mh, 0);
            export_figure_data({rec}, Figure::Fig1, dir + "/fig1.csv");
            export_figure_data({rec}, Figure::Fig2, dir + "/fig2.csv");
            break;
        }
        case RunMode::Ensemble: {
            std::vector<TrajectoryRecord> records;
            records.reserve(static_cast<std::size_t>(rr.cfg.ensemble));
            run_ensemble(rr.spec, rr.rho0, rr.integ, rr.cfg.ensemble,
                         [&](TrajectoryRecord&& rec) {
                             const int idx = static_cast<int>(rec.traj_index);
                             write_traj_csv(dir + "/" + traj_name(idx) + ".csv", rec, mh);
                             records.push_back(std::move(rec));
                         });
            {
                CsvWriter csv(dir + "/conditioning.csv");
                csv.comment("manifest_hash " + hex64(mh));
                csv.header({"traj_index", "t_conditioned"});
                for (const auto& rec : records) {
                    const double sample_dt =
                        rec.times.size() > 1 ? rec.times[1] - rec.times[0] : rec.dt;
                    const auto cond =
                        detect_conditioning(rec.times, rec.var_n, kConditioningThreshold,
                                            kConditioningHoldSamples * sample_dt);
                    csv.row(std::array{static_cast<double>(rec.traj_index),
                                       cond.value_or(-1.0)});
                }
            }
            if (records.size() >= 2) {
                const auto nbar_stats = ensemble_stats(records, &TrajectoryRecord::nbar);
                const auto var_stats = ensemble_stats(records, &TrajectoryRecord::var_n);
                write_ensemble_stats_csv(dir + "/ensemble_nbar.csv", nbar_stats, mh);
                write_ensemble_stats_csv(dir + "/ensemble_var_n.csv", var_stats, mh);
                const auto uncond = run_unconditional(rr.spec, rr.rho0, rr.integ);
                write_uncond_csv(dir + "/unconditional.csv", uncond, mh);
                const auto cmp =
                    compare_with_unconditional(nbar_stats, uncond.times, uncond.nbar);
                CsvWriter csv(dir + "/uncond_compare.csv");
                csv.comment("manifest_hash " + hex64(mh));
                csv.header({"checkpoints", "mismatches", "max_se_units"});
                csv.row(std::array{static_cast<double>(cmp.checkpoints),
                                   static_cast<double>(cmp.mismatches), cmp.max_se_units});
            }
            break;
        }
        case RunMode::Unconditional: {
            const auto uncond = run_unconditional(rr.spec, rr.rho0, rr.integ);
            write_uncond_csv(dir + "/unconditional.csv", uncond, mh);
            break;
        }
        case RunMode::Validate: {
            // Reduced model without feedback is the adiabatic-elimination
            // partner of the full equation; run both deterministically on the
            // same grid and compare the qubit ⊗ resonator states.
            SmeSpec reduced;
            try {
                reduced = build_reduced_sme(rr.dp, rr.pp, false, rr.cfg.n_levels);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
            const DensityMatrix rho0_red =
                initial_state(reduced.layout, rr.pp, rr.cfg.initial, rr.cfg.n_levels);

            IntegratorConfig integ = rr.integ;
            std::vector<Mat> reduced_states;
            run_unconditional(reduced, rho0_red, integ,
                              [&](long, double, const Mat& rho) {
                                  reduced_states.push_back(rho);
                              });

            std::vector<double> ts, dist;
            std::size_t k = 0;
            run_unconditional(rr.spec, rr.rho0, integ,
                              [&](long, double t, const Mat& rho) {
                                  if (k >= reduced_states.size()) return;
                                  const Mat red = rr.spec.layout.partial_trace(
                                      rho, {"qubit", "resonator"});
                                  ts.push_back(t);
                                  dist.push_back(trace_distance(red, reduced_states[k]));
                                  ++k;
                              });

            CsvWriter csv(dir + "/validate.csv");
            csv.comment("manifest_hash " + hex64(mh));
            csv.header({"t", "trace_distance"});
            double max_dist = 0.0;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                csv.row(std::array{ts[i], dist[i]});
                max_dist = std::max(max_dist, dist[i]);
            }
            if (max_dist > 0.05)
                throw ValidationError("validate: max trace distance " +
                                      format_double(max_dist) + " exceeds 0.05");
            break;
        }
    }
}

}  // namespace qnd
