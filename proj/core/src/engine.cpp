#include "qnd/engine.hpp"

#include "qnd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qnd {

namespace {

using Triplet = Eigen::Triplet<Complex>;
using SpMat = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

void append_kron(std::vector<Triplet>& trips, const Mat& a, const Mat& b, Complex w) {
    // w * (a ⊗ b) acting on vec(rho), both factors dim x dim
    const Eigen::Index d = a.rows();
    for (Eigen::Index ar = 0; ar < d; ++ar)
        for (Eigen::Index ac = 0; ac < d; ++ac) {
            const Complex av = a(ar, ac);
            if (av == 0.0) continue;
            for (Eigen::Index br = 0; br < d; ++br)
                for (Eigen::Index bc = 0; bc < d; ++bc) {
                    const Complex bv = b(br, bc);
                    if (bv == 0.0) continue;
                    trips.emplace_back(ar * d + br, ac * d + bc, w * av * bv);
                }
        }
}

Mat effective_generator(const SmeSpec& spec) {
    // G = -iH - (1/2) sum_i rate_i L_i† L_i, so that the deterministic part is
    // G rho + rho G† + sum_i rate_i L_i rho L_i†.
    Mat g = -kImag * spec.hamiltonian;
    for (const auto& ch : spec.channels)
        g -= 0.5 * ch.rate * (ch.op.adjoint() * ch.op);
    return g;
}

double hermitize_and_trace(Mat& rho) {
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return rho.trace().real();
}

// tr(A rho) in O(dim^2)
Complex trace_prod(const Mat& a, const Mat& rho) {
    return a.cwiseProduct(rho.transpose()).sum();
}

// Observables evaluated at sample points; empty matrices where the layout
// lacks the corresponding factor.
struct ObservableSet {
    Mat nb, nb2, sx, sy, sz, leak;

    explicit ObservableSet(const SpaceLayout& layout) {
        if (layout.has_factor("resonator")) {
            const Eigen::Index n = layout.factor_dim("resonator");
            nb = layout.embed(number_op(n), "resonator");
            nb2 = nb * nb;
            leak = layout.embed(projector(n, n - 1), "resonator");
        }
        if (layout.has_factor("qubit")) {
            sx = layout.embed(sigma_x(), "qubit");
            sy = layout.embed(sigma_y(), "qubit");
            sz = layout.embed(sigma_z(), "qubit");
        }
    }

    static double maybe(const Mat& a, const Mat& rho) {
        return a.size() > 0 ? trace_prod(a, rho).real() : 0.0;
    }
};

}  // namespace

double default_dt(const SmeSpec& spec) {
    double fastest = 0.0;
    for (const auto& ch : spec.channels) fastest = std::max(fastest, ch.rate);
    fastest = std::max(fastest, spec.meas.rate);
    // Hamiltonian scale: largest |diagonal| plus row sum of off-diagonal parts.
    const Eigen::Index d = spec.hamiltonian.rows();
    double hscale = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        hscale = std::max(hscale, spec.hamiltonian.row(i).cwiseAbs().sum());
    fastest = std::max(fastest, hscale);
    if (fastest <= 0.0)
        throw std::invalid_argument("default_dt: spec has no finite rate scale");
    return 1.0 / (50.0 * fastest);
}

Propagator::Propagator(const SmeSpec& spec) : spec_(spec), dim_(spec.layout.total_dim()) {
    spec_.validate();
    const Eigen::Index d2 = dim_ * dim_;
    const Mat g = effective_generator(spec_);
    const Mat id = Mat::Identity(dim_, dim_);

    std::vector<Triplet> trips;
    append_kron(trips, id, g, 1.0);                    // G rho
    append_kron(trips, g.conjugate(), id, 1.0);        // rho G†
    for (const auto& ch : spec_.channels) {
        if (ch.rate == 0.0) continue;
        append_kron(trips, ch.op.conjugate(), ch.op, ch.rate);  // L rho L†
    }
    drift_super_.resize(d2, d2);
    drift_super_.setFromTriplets(trips.begin(), trips.end());

    has_meas_ = spec_.meas.rate > 0.0 && spec_.meas.op.size() > 0;
    if (has_meas_) {
        sqrt_eta_k_ = std::sqrt(spec_.meas.eta * spec_.meas.rate);
        const Mat& m = spec_.meas.op;
        std::vector<Triplet> mt;
        append_kron(mt, id, m, 1.0);                   // M h
        append_kron(mt, m.conjugate(), id, 1.0);       // h M†
        meas_super_.resize(d2, d2);
        meas_super_.setFromTriplets(mt.begin(), mt.end());
        const Mat r = spec_.record_op();
        record_vec_ = Eigen::Map<const Vec>(r.data(), d2);
    }

    va_.resize(d2);
    vb_.resize(d2);
    vbp_.resize(d2);
    vtmp_.resize(d2);
}

void Propagator::drift_into(const Mat& rho, Mat& out) {
    const Eigen::Index d2 = dim_ * dim_;
    Eigen::Map<const Vec> v(rho.data(), d2);
    out.resize(dim_, dim_);
    Eigen::Map<Vec> o(out.data(), d2);
    o.noalias() = drift_super_ * v;
}

void Propagator::diffusion_into(const Mat& rho, Mat& out) {
    out.resize(dim_, dim_);
    if (!has_meas_) {
        out.setZero();
        return;
    }
    const Eigen::Index d2 = dim_ * dim_;
    Eigen::Map<const Vec> v(rho.data(), d2);
    Eigen::Map<Vec> o(out.data(), d2);
    const double mexp = record_vec_.dot(v).real();
    o.noalias() = meas_super_ * v;
    o -= mexp * v;
    o *= sqrt_eta_k_;
}

Propagator::StepStats Propagator::step(Mat& rho, double dt, double dW, bool renorm) {
    const Eigen::Index d2 = dim_ * dim_;
    Eigen::Map<Vec> v(rho.data(), d2);

    va_.noalias() = drift_super_ * v;

    StepStats stats;
    if (has_meas_) {
        const double mexp = record_vec_.dot(v).real();
        stats.record_expect = mexp;
        vb_.noalias() = meas_super_ * v;
        vb_ -= mexp * v;
        vb_ *= sqrt_eta_k_;
        // B'[rho; B] = sqrt(eta k) (M B + B M† - tr((M+M†)B) rho - <M+M†> B)
        const double tb = record_vec_.dot(vb_).real();
        vbp_.noalias() = meas_super_ * vb_;
        vbp_ -= tb * v;
        vbp_ -= mexp * vb_;
        vbp_ *= sqrt_eta_k_;
        v += dt * va_ + dW * vb_ + 0.5 * (dW * dW - dt) * vbp_;
    } else {
        v += dt * va_;
    }

    const double tr = hermitize_and_trace(rho);
    stats.trace_dev = std::abs(tr - 1.0);
    if (renorm) rho /= tr;
    return stats;
}

Mat drift(const SmeSpec& spec, const Mat& rho) {
    if (rho.rows() != spec.layout.total_dim())
        throw std::invalid_argument("drift: state dim does not match spec");
    Mat out = -kImag * (spec.hamiltonian * rho - rho * spec.hamiltonian);
    for (const auto& ch : spec.channels)
        if (ch.rate != 0.0) out += ch.rate * dissipator(ch.op, rho);
    return out;
}

Mat diffusion(const SmeSpec& spec, const Mat& rho) {
    if (rho.rows() != spec.layout.total_dim())
        throw std::invalid_argument("diffusion: state dim does not match spec");
    if (spec.meas.rate <= 0.0 || spec.meas.op.size() == 0)
        return Mat::Zero(rho.rows(), rho.cols());
    return std::sqrt(spec.meas.eta * spec.meas.rate) * meas_superop(spec.meas.op, rho);
}

Mat milstein_step(const SmeSpec& spec, const Mat& rho, double dt, double dW) {
    if (dt <= 0.0) throw std::invalid_argument("milstein_step: dt must be > 0");
    if (!std::isfinite(dW)) throw std::invalid_argument("milstein_step: dW must be finite");
    Mat next = rho + dt * drift(spec, rho);
    if (spec.meas.rate > 0.0 && spec.meas.op.size() > 0) {
        const Mat& m = spec.meas.op;
        const double sek = std::sqrt(spec.meas.eta * spec.meas.rate);
        const Mat r = spec.record_op();
        const double mexp = trace_prod(r, rho).real();
        const Mat b = sek * (m * rho + rho * m.adjoint() - mexp * rho);
        const double tb = trace_prod(r, b).real();
        const Mat bp = sek * (m * b + b * m.adjoint() - tb * rho - mexp * b);
        next += dW * b + 0.5 * (dW * dW - dt) * bp;
    }
    if (!next.allFinite()) throw IntegratorError("milstein_step: non-finite entries", 0);
    return 0.5 * (next + next.adjoint());
}

double record_increment(const SmeSpec& spec, const Mat& rho, double dt, double dW) {
    double mexp = 0.0;
    if (spec.meas.op.size() > 0) mexp = trace_prod(spec.record_op(), rho).real();
    return spec.record_gain * mexp * dt + spec.record_noise * dW;
}

std::uint64_t trajectory_fingerprint(const SmeSpec& spec, const IntegratorConfig& cfg) {
    const double dt = cfg.dt > 0.0 ? cfg.dt : default_dt(spec);
    std::uint64_t h = spec.fingerprint();
    h = fnv1a(&dt, sizeof dt, h);
    h = fnv1a(&cfg.t_final, sizeof cfg.t_final, h);
    h = fnv1a(&cfg.renorm_every, sizeof cfg.renorm_every, h);
    h = fnv1a(&cfg.sample_every, sizeof cfg.sample_every, h);
    return h;
}

TrajectoryRecord run_trajectory(const SmeSpec& spec, const DensityMatrix& rho0,
                                const IntegratorConfig& cfg) {
    if (rho0.dim() != spec.layout.total_dim())
        throw std::invalid_argument("run_trajectory: state dim does not match spec");
    const double dt = cfg.dt > 0.0 ? cfg.dt : default_dt(spec);
    if (cfg.t_final < dt)
        throw std::invalid_argument("run_trajectory: t_final must be >= dt");
    const long nsteps = std::lround(cfg.t_final / dt);

    Propagator prop(spec);
    NoiseStream noise(cfg.seed, cfg.traj_index);
    const double sqrt_dt = std::sqrt(dt);
    const ObservableSet obs(spec.layout);

    TrajectoryRecord rec;
    rec.dt = dt;
    rec.seed = cfg.seed;
    rec.traj_index = cfg.traj_index;
    rec.build_digest = spec.build_digest;
    rec.eta = spec.meas.eta;
    rec.fingerprint = trajectory_fingerprint(spec, cfg);
    if (cfg.keep_record) rec.dr.reserve(static_cast<std::size_t>(nsteps));

    Mat rho = rho0.mat();

    auto sample = [&](long step, double last_trace_dev) {
        const double n1 = ObservableSet::maybe(obs.nb, rho);
        const double n2 = ObservableSet::maybe(obs.nb2, rho);
        const double lk = ObservableSet::maybe(obs.leak, rho);
        rec.times.push_back(static_cast<double>(step) * dt);
        rec.nbar.push_back(n1);
        rec.var_n.push_back(std::max(n2 - n1 * n1, 0.0));
        rec.sx.push_back(ObservableSet::maybe(obs.sx, rho));
        rec.sy.push_back(ObservableSet::maybe(obs.sy, rho));
        rec.sz.push_back(ObservableSet::maybe(obs.sz, rho));
        rec.purity.push_back(rho.squaredNorm());
        rec.trace_dev.push_back(last_trace_dev);
        rec.leakage.push_back(lk);
        rec.max_leakage = std::max(rec.max_leakage, lk);
        if (lk > 1e-3) rec.leak_flagged = true;
        if (lk > cfg.leak_abort)
            throw IntegratorError("run_trajectory: truncation leakage " + std::to_string(lk),
                                  step);
    };

    sample(0, 0.0);
    double last_dev = 0.0;
    for (long step = 1; step <= nsteps; ++step) {
        const double dW = sqrt_dt * noise.gaussian();
        const bool renorm = cfg.renorm_every > 0 && step % cfg.renorm_every == 0;
        const auto stats = prop.step(rho, dt, dW, renorm);
        if (cfg.keep_record)
            rec.dr.push_back(spec.record_gain * stats.record_expect * dt +
                             spec.record_noise * dW);
        last_dev = stats.trace_dev;
        rec.max_trace_dev = std::max(rec.max_trace_dev, stats.trace_dev);
        if (!rho.allFinite())
            throw IntegratorError("run_trajectory: non-finite state", step);
        if (cfg.diag_every > 0 && step % cfg.diag_every == 0) {
            Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
            rec.min_eigenvalue = std::min(rec.min_eigenvalue, es.eigenvalues().minCoeff());
        }
        if (step % cfg.sample_every == 0 || step == nsteps) sample(step, last_dev);
    }
    return rec;
}

Mat run_with_increments(const SmeSpec& spec, const Mat& rho0, double dt,
                        std::span<const double> dW, int renorm_every) {
    Propagator prop(spec);
    Mat rho = rho0;
    long step = 0;
    for (double w : dW) {
        ++step;
        const bool renorm = renorm_every > 0 && step % renorm_every == 0;
        prop.step(rho, dt, w, renorm);
        if (!rho.allFinite()) throw IntegratorError("run_with_increments: non-finite", step);
    }
    return rho;
}

UnconditionalRun run_unconditional(const SmeSpec& spec, const DensityMatrix& rho0,
                                   const IntegratorConfig& cfg, const StateSink& sink) {
    if (rho0.dim() != spec.layout.total_dim())
        throw std::invalid_argument("run_unconditional: state dim does not match spec");
    const double dt = cfg.dt > 0.0 ? cfg.dt : default_dt(spec);
    if (cfg.t_final < dt)
        throw std::invalid_argument("run_unconditional: t_final must be >= dt");
    const long nsteps = std::lround(cfg.t_final / dt);

    Propagator prop(spec);
    const ObservableSet obs(spec.layout);

    UnconditionalRun out;
    Mat rho = rho0.mat();
    Mat k1, k2, k3, k4;
    Mat tmp;

    auto sample = [&](long step) {
        const double t = static_cast<double>(step) * dt;
        const double n1 = ObservableSet::maybe(obs.nb, rho);
        const double n2 = ObservableSet::maybe(obs.nb2, rho);
        out.times.push_back(t);
        out.nbar.push_back(n1);
        out.var_n.push_back(std::max(n2 - n1 * n1, 0.0));
        out.sx.push_back(ObservableSet::maybe(obs.sx, rho));
        out.sy.push_back(ObservableSet::maybe(obs.sy, rho));
        out.sz.push_back(ObservableSet::maybe(obs.sz, rho));
        out.purity.push_back(rho.squaredNorm());
        if (sink) sink(step, t, rho);
    };

    sample(0);
    for (long step = 1; step <= nsteps; ++step) {
        prop.drift_into(rho, k1);
        tmp = rho + 0.5 * dt * k1;
        prop.drift_into(tmp, k2);
        tmp = rho + 0.5 * dt * k2;
        prop.drift_into(tmp, k3);
        tmp = rho + dt * k3;
        prop.drift_into(tmp, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double tr = hermitize_and_trace(rho);
        if (std::abs(tr - 1.0) > 1e-6)
            throw IntegratorError("run_unconditional: trace drift " + std::to_string(tr - 1.0) +
                                      "; step size unstable",
                                  step);
        if (cfg.renorm_every > 0 && step % cfg.renorm_every == 0) rho /= tr;
        if (!rho.allFinite())
            throw IntegratorError("run_unconditional: non-finite state", step);
        if (step % cfg.sample_every == 0 || step == nsteps) sample(step);
    }
    out.final_state = rho;
    return out;
}

}  // namespace qnd
