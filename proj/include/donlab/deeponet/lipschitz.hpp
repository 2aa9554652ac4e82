#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "donlab/nn/mlp.hpp"

namespace donlab::deeponet {

// Axis-aligned input domain.
struct InputBox {
    nn::Vector lower;
    nn::Vector upper;

    std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
    // Largest Euclidean norm attained on the box (a corner).
    double max_norm() const;
};

struct JEstimateOptions {
    std::size_t inputs_per_pair = 16;
    // Parameters held at zero for every sampled weight vector; empty means none.
    std::vector<bool> frozen;
};

/// Monte Carlo estimate of the weight-Lipschitz constant J. It is a maximum over
/// samples, so it can only under-estimate the true supremum.
struct JEstimate {
    double value = 0.0;
    std::size_t pairs_used = 0;
    bool is_lower_bound = true;
};

// max over weight pairs uniform in the radius-W ball and inputs uniform in `box` of
// ||f_w1(x) - f_w2(x)||_inf / ||w1 - w2||. Pair k's draws do not depend on `pairs`,
// so more pairs never lowers the estimate.
JEstimate estimate_J(const nn::MlpSpec& spec, double weight_bound, const InputBox& box, std::size_t pairs,
                     std::uint64_t seed, const JEstimateOptions& options = {});

// (W sqrt(pQ))^(2 depth) * Q * R * sqrt(p), evaluated in log space; +inf on overflow.
// Requires W >= 1.
double j_upper_bound(double weight_bound, std::size_t params, std::size_t tied, std::size_t depth, double input_radius);

// j_upper_bound for a dense network (no tied parameters) with inputs of norm <= input_radius.
double j_upper_bound(const nn::MlpSpec& spec, double weight_bound, double input_radius);

}  // namespace donlab::deeponet
