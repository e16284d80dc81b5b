// feedback.hpp — Markovian homodyne feedback: given a homodyne measurement
// master equation and a feedback Hamiltonian proportional to the current,
// produce the modified master equation.

#pragma once

#include "qnd/sme.hpp"

namespace qnd {

struct FeedbackTerms {
    double k = 0.0;       // measurement rate of the base equation
    Mat c;                // measurement operator of the base equation
    Mat F;                // Hermitian feedback operator
    double lambda = 0.0;  // feedback gain (H_fb = lambda F I(t))
    double eta = 1.0;
};

// Transforms `base` (which must carry its k D[c] backaction channel at
// base.backaction_index) into the feedback-modified equation:
//   H      += (lambda/2)(c†F + Fc)
//   k D[c] -> k D[c - i (lambda/k) F]
//   new channel (lambda^2/k)((1-eta)/eta) D[F]
//   measurement operator  c - i (lambda/(eta k)) F
// lambda = 0 returns base unchanged.
SmeSpec assemble_feedback_me(const SmeSpec& base, const FeedbackTerms& fb);

}  // namespace qnd
