// engine.hpp — explicit Milstein integration of an SmeSpec, homodyne record
// generation, and deterministic (ensemble-mean) evolution.

#pragma once

#include "qnd/sme.hpp"
#include "qnd/states.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <span>
#include <stdexcept>

namespace qnd {

struct IntegratorConfig {
    double dt = 0.0;          // step (s); <= 0 selects the rate-based default
    double t_final = 0.0;     // horizon (s)
    std::uint64_t seed = 1;   // master seed
    std::uint64_t traj_index = 0;
    int renorm_every = 1;     // steps between trace renormalizations
    int diag_every = 1000;    // steps between positivity diagnostics
    int sample_every = 100;   // steps between persisted samples
    double leak_abort = 1e-2; // abort when top-level population exceeds this
    bool keep_record = true;  // retain the full-rate dr stream in the output
};

// Default step: resolve the fastest retained rate with a 2% per-step budget.
double default_dt(const SmeSpec& spec);

struct IntegratorError : std::runtime_error {
    IntegratorError(const std::string& what, long step_index)
        : std::runtime_error(what + " (step " + std::to_string(step_index) + ")"),
          step(step_index) {}
    long step;
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> nbar;       // <b†b>
    std::vector<double> var_n;      // Var(b†b)
    std::vector<double> sx, sy, sz;
    std::vector<double> purity;
    std::vector<double> trace_dev;  // |tr rho - 1| before renormalization
    std::vector<double> leakage;    // top Fock level population

    std::vector<double> dr;         // full-rate record increments
    double dt = 0.0;

    std::uint64_t seed = 0;
    std::uint64_t traj_index = 0;
    std::uint64_t fingerprint = 0;  // SmeSpec + integrator grid
    std::uint64_t build_digest = 0;
    double eta = 1.0;

    double max_trace_dev = 0.0;
    double min_eigenvalue = 1.0;    // most negative eigenvalue seen at diagnostics
    double max_leakage = 0.0;
    bool leak_flagged = false;      // leakage exceeded 1e-3 at some sample
};

// Precomputed fast application of one SmeSpec: the deterministic generator is
// vectorized to a sparse superoperator on vec(rho), the diffusion term to a
// sparse map plus rank-one corrections. One instance per thread.
class Propagator {
public:
    explicit Propagator(const SmeSpec& spec);

    Eigen::Index dim() const { return dim_; }
    const SmeSpec& spec() const { return spec_; }

    void drift_into(const Mat& rho, Mat& out);
    void diffusion_into(const Mat& rho, Mat& out);

    struct StepStats {
        double record_expect = 0.0;  // <M + M†> before the step
        double trace_dev = 0.0;      // |tr - 1| after the step, before renorm
    };

    // One Milstein step in place; Hermitizes, renormalizes when requested.
    StepStats step(Mat& rho, double dt, double dW, bool renorm);

private:
    SmeSpec spec_;
    Eigen::Index dim_ = 0;
    Eigen::SparseMatrix<Complex, Eigen::RowMajor> drift_super_;
    Eigen::SparseMatrix<Complex, Eigen::RowMajor> meas_super_;
    Vec record_vec_;     // vec(M + M†); tr((M+M†)h) = record_vec_.dot(vec h)
    double sqrt_eta_k_ = 0.0;
    bool has_meas_ = false;
    Vec va_, vb_, vbp_, vtmp_;  // workspaces
};

// Reference (dense, unoptimized) implementations of the generator pieces;
// the Propagator is tested against these.
Mat drift(const SmeSpec& spec, const Mat& rho);
Mat diffusion(const SmeSpec& spec, const Mat& rho);

// One explicit Milstein step with the analytic directional derivative of the
// diffusion term; the result is Hermitized but not renormalized.
Mat milstein_step(const SmeSpec& spec, const Mat& rho, double dt, double dW);

double record_increment(const SmeSpec& spec, const Mat& rho, double dt, double dW);

// Hash identifying (equation, integration grid); excludes seed and index so
// ensemble members can be aggregated.
std::uint64_t trajectory_fingerprint(const SmeSpec& spec, const IntegratorConfig& cfg);

TrajectoryRecord run_trajectory(const SmeSpec& spec, const DensityMatrix& rho0,
                                const IntegratorConfig& cfg);

// Integrates with caller-supplied Wiener increments (dW per step); used by
// convergence tests. Returns the final state.
Mat run_with_increments(const SmeSpec& spec, const Mat& rho0, double dt,
                        std::span<const double> dW, int renorm_every = 1);

struct UnconditionalRun {
    std::vector<double> times;
    std::vector<double> nbar, var_n, sx, sy, sz, purity;
    Mat final_state;
};

using StateSink = std::function<void(long step, double t, const Mat& rho)>;

// Fixed-step classical RK4 on the drift; trace is monitored and drift beyond
// 1e-6 per step raises an instability error.
UnconditionalRun run_unconditional(const SmeSpec& spec, const DensityMatrix& rho0,
                                   const IntegratorConfig& cfg,
                                   const StateSink& sink = {});

}  // namespace qnd
