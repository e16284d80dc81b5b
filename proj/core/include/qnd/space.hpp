// space.hpp — tensor-product space layout: labelled factors, identity
// embedding, and partial trace over arbitrary factor subsets.

#pragma once

#include "qnd/operators.hpp"

#include <string>
#include <vector>

namespace qnd {

struct SpaceFactor {
    std::string label;
    Eigen::Index dim = 0;
};

class SpaceLayout {
public:
    SpaceLayout() = default;
    explicit SpaceLayout(std::vector<SpaceFactor> factors);

    const std::vector<SpaceFactor>& factors() const { return factors_; }
    Eigen::Index total_dim() const { return total_dim_; }
    std::size_t index_of(const std::string& label) const;
    bool has_factor(const std::string& label) const;
    Eigen::Index factor_dim(const std::string& label) const {
        return factors_[index_of(label)].dim;
    }

    // Pads `op` (acting on the named factor) with identities on every other
    // factor, preserving factor order.
    Mat embed(const Mat& op, const std::string& label) const;

    // Traces out every factor not in `keep`; the result keeps the retained
    // factors in their original order.
    Mat partial_trace(const Mat& rho, const std::vector<std::string>& keep) const;

private:
    std::vector<SpaceFactor> factors_;
    Eigen::Index total_dim_ = 1;
};

inline SpaceLayout qubit_resonator_layout(Eigen::Index n_levels) {
    return SpaceLayout({{"qubit", 2}, {"resonator", n_levels}});
}

inline SpaceLayout qubit_resonator_cavity_layout(Eigen::Index n_levels, Eigen::Index n_cavity) {
    return SpaceLayout({{"qubit", 2}, {"resonator", n_levels}, {"cavity", n_cavity}});
}

}  // namespace qnd
