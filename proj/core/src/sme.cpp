#include "qnd/sme.hpp"

#include <cstring>

namespace qnd {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a_matrix(const Mat& m, std::uint64_t seed) {
    const std::int64_t r = m.rows(), c = m.cols();
    std::uint64_t h = fnv1a(&r, sizeof r, seed);
    h = fnv1a(&c, sizeof c, h);
    return fnv1a(m.data(), sizeof(Complex) * static_cast<std::size_t>(r * c), h);
}

namespace {
std::uint64_t mix_double(double v, std::uint64_t h) { return fnv1a(&v, sizeof v, h); }
}  // namespace

void SmeSpec::validate() const {
    const Eigen::Index d = layout.total_dim();
    if (hamiltonian.rows() != d || hamiltonian.cols() != d)
        throw std::invalid_argument("SmeSpec: Hamiltonian dim does not match layout");
    for (const auto& ch : channels) {
        if (ch.rate < 0.0)
            throw std::invalid_argument("SmeSpec: negative rate on channel " + ch.tag);
        if (ch.op.rows() != d || ch.op.cols() != d)
            throw std::invalid_argument("SmeSpec: channel dim mismatch on " + ch.tag);
    }
    if (meas.rate < 0.0) throw std::invalid_argument("SmeSpec: negative measurement rate");
    if (meas.rate > 0.0 && (meas.op.rows() != d || meas.op.cols() != d))
        throw std::invalid_argument("SmeSpec: measurement operator dim mismatch");
    if (meas.eta < 0.0 || meas.eta > 1.0)
        throw std::invalid_argument("SmeSpec: eta must be in [0, 1]");
    if (backaction_index >= static_cast<int>(channels.size()))
        throw std::invalid_argument("SmeSpec: backaction index out of range");
}

std::uint64_t SmeSpec::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& f : layout.factors()) {
        h = fnv1a(f.label.data(), f.label.size(), h);
        const std::int64_t d = f.dim;
        h = fnv1a(&d, sizeof d, h);
    }
    h = fnv1a_matrix(hamiltonian, h);
    for (const auto& ch : channels) {
        h = mix_double(ch.rate, h);
        h = fnv1a_matrix(ch.op, h);
    }
    h = mix_double(meas.rate, h);
    h = mix_double(meas.eta, h);
    if (meas.op.size() > 0) h = fnv1a_matrix(meas.op, h);
    h = mix_double(record_gain, h);
    h = mix_double(record_noise, h);
    return h;
}

}  // namespace qnd
