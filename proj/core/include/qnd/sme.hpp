// sme.hpp — a stochastic master equation as data: Hamiltonian, weighted
// Lindblad channels, one homodyne measurement channel, record coefficients.
//
//   d rho = -i[H, rho] dt + sum_i rate_i D[L_i] rho dt
//           + sqrt(eta k) H[M] rho dW
//   dr    = record_gain <M + M†> dt + record_noise dW

#pragma once

#include "qnd/space.hpp"
#include "qnd/superop.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qnd {

struct LindbladChannel {
    double rate = 0.0;
    Mat op;
    std::string tag;  // for manifests and error messages only
};

struct MeasChannel {
    double rate = 0.0;  // k
    Mat op;             // M (need not be Hermitian)
    double eta = 1.0;
};

struct SmeSpec {
    SpaceLayout layout;
    Mat hamiltonian;
    std::vector<LindbladChannel> channels;
    MeasChannel meas;
    double record_gain = 0.0;
    double record_noise = 0.0;

    // Index into `channels` of the measurement's own backaction dissipator
    // (the k D[c] term that feedback assembly replaces); -1 if none.
    int backaction_index = -1;

    // Hash of the generating model parameters excluding eta; lets ensemble
    // comparisons permit eta as the only difference.
    std::uint64_t build_digest = 0;

    Mat record_op() const { return meas.op + meas.op.adjoint(); }

    // Dimension and rate sanity; throws on violation.
    void validate() const;

    // Hash of the full equation content (layout, operators, rates, record).
    std::uint64_t fingerprint() const;
};

// FNV-1a over raw bytes; used for spec fingerprints and manifest hashes.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a_matrix(const Mat& m, std::uint64_t seed);

}  // namespace qnd
