#include "donlab/nn/adam.hpp"

#include <cmath>

#include "donlab/errors.hpp"

namespace donlab::nn {

AdamState::AdamState(std::size_t size, AdamConfig cfg)
    : m(Vector::Zero(static_cast<Eigen::Index>(size))),
      v(Vector::Zero(static_cast<Eigen::Index>(size))),
      config(cfg) {}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads) {
    if (params.size() != state.size() || grads.size() != state.size()) {
        throw InputError("adam_step: parameter, gradient and state lengths differ");
    }
    const auto n = static_cast<Eigen::Index>(params.size());
    Eigen::Map<Eigen::ArrayXd> p(params.data(), n);
    Eigen::Map<const Eigen::ArrayXd> g(grads.data(), n);
    const AdamConfig& c = state.config;

    state.t += 1;
    state.m.array() = c.beta1 * state.m.array() + (1.0 - c.beta1) * g;
    state.v.array() = c.beta2 * state.v.array() + (1.0 - c.beta2) * g.square();
    const double correction1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
    const double correction2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
    p -= c.lr * (state.m.array() / correction1) / ((state.v.array() / correction2).sqrt() + c.eps);
}

void adam_step(AdamState& state, MlpParams& params, std::span<const double> grads) {
    adam_step(state, params.flat(), grads);
}

}  // namespace donlab::nn
