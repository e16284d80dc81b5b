#include "qnd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qnd {

std::vector<double> fock_distribution(const DensityMatrix& rho_resonator) {
    const Eigen::Index n = rho_resonator.dim();
    std::vector<double> p(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        double v = rho_resonator.mat()(i, i).real();
        if (v < -1e-10)
            throw std::invalid_argument("fock_distribution: population " + std::to_string(v) +
                                        " below tolerance at n=" + std::to_string(i));
        p[static_cast<std::size_t>(i)] = std::max(v, 0.0);
    }
    return p;
}

MeanVar phonon_stats(const DensityMatrix& rho_resonator) {
    const auto p = fock_distribution(rho_resonator);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        m1 += static_cast<double>(n) * p[n];
        m2 += static_cast<double>(n) * static_cast<double>(n) * p[n];
    }
    return {m1, std::max(m2 - m1 * m1, 0.0)};
}

std::vector<MeanVar> phonon_stats(const std::vector<double>& n1,
                                  const std::vector<double>& n2) {
    if (n1.size() != n2.size())
        throw std::invalid_argument("phonon_stats: series length mismatch");
    std::vector<MeanVar> out(n1.size());
    for (std::size_t i = 0; i < n1.size(); ++i)
        out[i] = {n1[i], std::max(n2[i] - n1[i] * n1[i], 0.0)};
    return out;
}

std::optional<double> detect_conditioning(const std::vector<double>& times,
                                          const std::vector<double>& var,
                                          double threshold, double hold) {
    if (threshold <= 0.0) throw std::invalid_argument("detect_conditioning: threshold must be > 0");
    if (times.size() != var.size())
        throw std::invalid_argument("detect_conditioning: series length mismatch");
    std::size_t start = 0;
    bool below = false;
    for (std::size_t i = 0; i < var.size(); ++i) {
        if (var[i] < threshold) {
            if (!below) {
                below = true;
                start = i;
            }
            if (times[i] - times[start] >= hold) return times[start];
        } else {
            below = false;
        }
    }
    return std::nullopt;
}

std::vector<JumpEvent> detect_jumps(const std::vector<double>& times,
                                    const std::vector<double>& level,
                                    double debounce) {
    if (times.size() != level.size())
        throw std::invalid_argument("detect_jumps: series length mismatch");
    std::vector<JumpEvent> events;
    if (level.empty()) return events;
    for (double v : level)
        if (!std::isfinite(v)) throw std::invalid_argument("detect_jumps: non-finite level");

    auto rounded = [&](std::size_t i) { return static_cast<int>(std::lround(level[i])); };
    int current = rounded(0);
    for (std::size_t i = 1; i < level.size(); ++i) {
        const int next = rounded(i);
        if (next == current) continue;
        // Confirmed only if the new level persists through the debounce window.
        bool confirmed = times.back() - times[i] >= debounce;
        for (std::size_t j = i; confirmed && j < level.size() && times[j] - times[i] <= debounce;
             ++j)
            confirmed = rounded(j) == next;
        if (confirmed) {
            JumpEvent ev;
            ev.time = times[i];
            ev.n_before = current;
            ev.n_after = next;
            ev.confidence = 1.0 / std::abs(next - current);
            events.push_back(ev);
            current = next;
        }
    }
    return events;
}

std::vector<PhononEstimate> estimate_phonon_from_record(
    const std::vector<double>& dr, double dt, double chi, double delta,
    double record_noise, const EstimatorConfig& cfg) {
    if (cfg.window <= 0.0) throw std::invalid_argument("estimate_phonon: window must be > 0");
    if (cfg.window < dt)
        throw std::invalid_argument("estimate_phonon: window shorter than one sample");
    const std::size_t k = static_cast<std::size_t>(cfg.window / dt);
    if (dr.size() < k)
        throw std::invalid_argument("estimate_phonon: record shorter than one window");
    if (chi > 0.0 && 2.0 * chi * cfg.window < 2.0 * M_PI)
        throw std::invalid_argument("estimate_phonon: window resolves less than one cycle "
                                    "per phonon spacing");
    if (cfg.n_max < 1) throw std::invalid_argument("estimate_phonon: n_max must be >= 1");

    const double hop_s = cfg.hop > 0.0 ? cfg.hop : 0.5 * cfg.window;
    const std::size_t hop = std::max<std::size_t>(1, static_cast<std::size_t>(hop_s / dt));
    const double noise_floor = record_noise * record_noise * dt * static_cast<double>(k);

    // Frequency set: the known comb, or a dense grid in periodogram mode.
    std::vector<double> omegas;
    std::vector<int> omega_to_n;
    if (!cfg.use_periodogram) {
        for (int n = 0; n <= cfg.n_max; ++n) {
            omegas.push_back(2.0 * (delta + chi * n));
            omega_to_n.push_back(n);
        }
    } else {
        const double omega_max = 2.0 * (delta + chi * cfg.n_max) + 2.0 * M_PI / cfg.window;
        const double domega = 2.0 * M_PI / cfg.window / 4.0;
        for (double w = 0.0; w <= omega_max; w += domega) {
            omegas.push_back(w);
            omega_to_n.push_back(static_cast<int>(std::lround((w / 2.0 - delta) / chi)));
        }
    }

    std::vector<PhononEstimate> out;
    for (std::size_t i0 = 0; i0 + k <= dr.size(); i0 += hop) {
        std::vector<double> power(omegas.size(), 0.0);
        for (std::size_t f = 0; f < omegas.size(); ++f) {
            double c = 0.0, s = 0.0;
            const double w = omegas[f];
            for (std::size_t j = 0; j < k; ++j) {
                const double t = static_cast<double>(i0 + j) * dt;
                c += dr[i0 + j] * std::cos(w * t);
                s += dr[i0 + j] * std::sin(w * t);
            }
            power[f] = c * c + s * s;
        }
        std::size_t best = 0;
        for (std::size_t f = 1; f < power.size(); ++f)
            if (power[f] > power[best]) best = f;

        // Runner-up among frequencies mapping to a different level.
        double second = 0.0;
        for (std::size_t f = 0; f < power.size(); ++f)
            if (omega_to_n[f] != omega_to_n[best]) second = std::max(second, power[f]);

        const double excess_best = power[best] - noise_floor;
        // Runner-up excess is clamped below by one noise-floor unit, so a
        // noise-only window cannot fluke into confidence 1.
        const double excess_second = std::max(second - noise_floor, noise_floor);

        PhononEstimate est;
        est.t_center = (static_cast<double>(i0) + 0.5 * static_cast<double>(k)) * dt;
        est.n_raw = std::clamp(omega_to_n[best], 0, cfg.n_max);
        if (excess_best > 0.0)
            est.confidence = std::max(0.0, 1.0 - excess_second / excess_best);
        if (est.confidence >= cfg.threshold) est.n = est.n_raw;
        out.push_back(est);
    }
    return out;
}

EnsembleStats ensemble_stats(const std::vector<TrajectoryRecord>& records,
                             const std::vector<double> TrajectoryRecord::* series) {
    if (records.size() < 2)
        throw std::invalid_argument("ensemble_stats: need at least 2 trajectories");
    for (const auto& r : records)
        if (r.fingerprint != records.front().fingerprint)
            throw std::invalid_argument("ensemble_stats: spec fingerprint mismatch");

    const std::size_t n = (records.front().*series).size();
    const double kcount = static_cast<double>(records.size());
    EnsembleStats out;
    out.times = records.front().times;
    out.mean.resize(n);
    out.se.resize(n);
    out.p10.resize(n);
    out.p50.resize(n);
    out.p90.resize(n);

    std::vector<double> vals(records.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < records.size(); ++r) {
            const auto& s = records[r].*series;
            if (s.size() != n)
                throw std::invalid_argument("ensemble_stats: series length mismatch");
            vals[r] = s[i];
        }
        const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / kcount;
        double ss = 0.0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        out.mean[i] = mean;
        out.se[i] = records.size() > 1 ? std::sqrt(ss / (kcount - 1.0) / kcount) : 0.0;
        std::sort(vals.begin(), vals.end());
        auto quantile = [&](double q) {
            const double pos = q * (kcount - 1.0);
            const std::size_t lo = static_cast<std::size_t>(pos);
            const std::size_t hi = std::min(lo + 1, vals.size() - 1);
            const double frac = pos - static_cast<double>(lo);
            return vals[lo] * (1.0 - frac) + vals[hi] * frac;
        };
        out.p10[i] = quantile(0.1);
        out.p50[i] = quantile(0.5);
        out.p90[i] = quantile(0.9);
    }
    return out;
}

UnconditionalComparison compare_with_unconditional(const EnsembleStats& stats,
                                                   const std::vector<double>& ref_times,
                                                   const std::vector<double>& ref_values,
                                                   int checkpoints) {
    if (ref_times.size() != ref_values.size() || ref_times.size() < 2)
        throw std::invalid_argument("compare_with_unconditional: bad reference series");
    auto interp = [&](double t) {
        auto it = std::lower_bound(ref_times.begin(), ref_times.end(), t);
        if (it == ref_times.begin()) return ref_values.front();
        if (it == ref_times.end()) return ref_values.back();
        const std::size_t hi = static_cast<std::size_t>(it - ref_times.begin());
        const std::size_t lo = hi - 1;
        const double f = (t - ref_times[lo]) / (ref_times[hi] - ref_times[lo]);
        return ref_values[lo] * (1.0 - f) + ref_values[hi] * f;
    };

    UnconditionalComparison cmp;
    cmp.checkpoints = checkpoints;
    const std::size_t n = stats.times.size();
    for (int c = 0; c < checkpoints; ++c) {
        const std::size_t i =
            static_cast<std::size_t>((static_cast<double>(c + 1) / checkpoints) *
                                     static_cast<double>(n - 1));
        const double ref = interp(stats.times[i]);
        const double dev = std::abs(stats.mean[i] - ref);
        const double se = stats.se[i];
        const double units = se > 0.0 ? dev / se : (dev > 1e-12 ? 1e9 : 0.0);
        cmp.max_se_units = std::max(cmp.max_se_units, units);
        if (units > 3.0) ++cmp.mismatches;
    }
    return cmp;
}

}  // namespace qnd
