#include "qnd/feedback.hpp"

namespace qnd {

SmeSpec assemble_feedback_me(const SmeSpec& base, const FeedbackTerms& fb) {
    if (fb.eta <= 0.0 || fb.eta > 1.0)
        throw std::invalid_argument("assemble_feedback_me: eta must be in (0, 1]");
    if (fb.k <= 0.0)
        throw std::invalid_argument("assemble_feedback_me: measurement rate k must be > 0");
    const double herm = (fb.F - fb.F.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12)
        throw std::invalid_argument("assemble_feedback_me: F must be Hermitian");

    if (fb.lambda == 0.0) return base;

    if (base.backaction_index < 0)
        throw std::invalid_argument("assemble_feedback_me: base has no backaction channel");

    SmeSpec out = base;
    const double lk = fb.lambda / fb.k;

    out.hamiltonian = base.hamiltonian +
                      0.5 * fb.lambda * (fb.c.adjoint() * fb.F + fb.F * fb.c);

    // D[sqrt(k) c - i (lambda/sqrt(k)) F] = k D[c - i (lambda/k) F]
    auto& back = out.channels[static_cast<std::size_t>(base.backaction_index)];
    back.rate = fb.k;
    back.op = fb.c - kImag * lk * fb.F;
    back.tag = "meas_backaction_fb";

    const double dephasing_rate = (fb.lambda * fb.lambda / fb.k) * (1.0 - fb.eta) / fb.eta;
    if (dephasing_rate > 0.0)
        out.channels.push_back({dephasing_rate, fb.F, "fb_dephasing"});

    out.meas = {fb.k, Mat(fb.c - kImag * (lk / fb.eta) * fb.F), fb.eta};
    out.validate();
    return out;
}

}  // namespace qnd
