#include "qnd/space.hpp"

#include <algorithm>
#include <numeric>

namespace qnd {

SpaceLayout::SpaceLayout(std::vector<SpaceFactor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("SpaceLayout: no factors");
    total_dim_ = 1;
    for (const auto& f : factors_) {
        if (f.dim < 1) throw std::invalid_argument("SpaceLayout: factor dim must be >= 1");
        total_dim_ *= f.dim;
        if (total_dim_ > kMaxTensorDim)
            throw std::invalid_argument("SpaceLayout: total dimension exceeds limit");
    }
    for (std::size_t i = 0; i < factors_.size(); ++i)
        for (std::size_t j = i + 1; j < factors_.size(); ++j)
            if (factors_[i].label == factors_[j].label)
                throw std::invalid_argument("SpaceLayout: duplicate label " + factors_[i].label);
}

std::size_t SpaceLayout::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].label == label) return i;
    throw std::invalid_argument("SpaceLayout: unknown label " + label);
}

bool SpaceLayout::has_factor(const std::string& label) const {
    for (const auto& f : factors_)
        if (f.label == label) return true;
    return false;
}

Mat SpaceLayout::embed(const Mat& op, const std::string& label) const {
    const std::size_t k = index_of(label);
    if (op.rows() != factors_[k].dim || op.cols() != factors_[k].dim)
        throw std::invalid_argument("SpaceLayout::embed: operator dim does not match factor " + label);
    Mat out = Mat::Identity(1, 1);
    for (std::size_t i = 0; i < factors_.size(); ++i)
        out = tensor(out, i == k ? op : Mat(Mat::Identity(factors_[i].dim, factors_[i].dim)));
    return out;
}

Mat SpaceLayout::partial_trace(const Mat& rho, const std::vector<std::string>& keep) const {
    if (rho.rows() != total_dim_ || rho.cols() != total_dim_)
        throw std::invalid_argument("partial_trace: state dim does not match layout");

    std::vector<bool> kept(factors_.size(), false);
    for (const auto& label : keep) kept[index_of(label)] = true;

    Eigen::Index keep_dim = 1, trace_dim = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i)
        (kept[i] ? keep_dim : trace_dim) *= factors_[i].dim;

    // Row-major strides of each factor within the full index.
    const std::size_t nf = factors_.size();
    std::vector<Eigen::Index> stride(nf, 1);
    for (std::size_t i = nf; i-- > 1;) stride[i - 1] = stride[i] * factors_[i].dim;

    // Enumerate full indices from (kept multi-index, traced multi-index).
    std::vector<std::size_t> keep_idx, trace_idx;
    for (std::size_t i = 0; i < nf; ++i) (kept[i] ? keep_idx : trace_idx).push_back(i);

    auto full_index = [&](Eigen::Index kmi, Eigen::Index tmi) {
        Eigen::Index full = 0;
        for (std::size_t i = keep_idx.size(); i-- > 0;) {
            const auto f = keep_idx[i];
            full += (kmi % factors_[f].dim) * stride[f];
            kmi /= factors_[f].dim;
        }
        for (std::size_t i = trace_idx.size(); i-- > 0;) {
            const auto f = trace_idx[i];
            full += (tmi % factors_[f].dim) * stride[f];
            tmi /= factors_[f].dim;
        }
        return full;
    };

    Mat out = Mat::Zero(keep_dim, keep_dim);
    for (Eigen::Index r = 0; r < keep_dim; ++r)
        for (Eigen::Index c = 0; c < keep_dim; ++c) {
            Complex sum = 0.0;
            for (Eigen::Index t = 0; t < trace_dim; ++t)
                sum += rho(full_index(r, t), full_index(c, t));
            out(r, c) = sum;
        }
    return out;
}

}  // namespace qnd
