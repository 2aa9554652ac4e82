#pragma once

#include <cstdint>
#include <span>

#include "donlab/nn/mlp.hpp"

namespace donlab::nn {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// First/second moment estimates for one parameter vector.
struct AdamState {
    AdamState() = default;
    AdamState(std::size_t size, AdamConfig config = {});

    Vector m;
    Vector v;
    std::int64_t t = 0;
    AdamConfig config;

    std::size_t size() const { return static_cast<std::size_t>(m.size()); }
};

// Bias-corrected Adam update; advances state.t by one.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);
void adam_step(AdamState& state, MlpParams& params, std::span<const double> grads);

}  // namespace donlab::nn
