#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "donlab/deeponet/dataset.hpp"
#include "donlab/nn/mlp.hpp"

namespace donlab::deeponet {

/// h(s, p) = <Branch(s), Trunk(p)>; both nets end in the same dimension q.
class DeepONetModel {
public:
    DeepONetModel(nn::MlpParams branch, nn::MlpParams trunk);

    const nn::MlpParams& branch() const { return branch_; }
    const nn::MlpParams& trunk() const { return trunk_; }
    nn::MlpParams& branch() { return branch_; }
    nn::MlpParams& trunk() { return trunk_; }

    std::size_t q() const { return branch_.spec().output_dim(); }
    std::size_t sensor_count() const { return branch_.spec().input_dim(); }
    std::size_t point_dim() const { return trunk_.spec().input_dim(); }
    std::size_t param_count() const { return branch_.size() + trunk_.size(); }

    // Sup-norm bound on each net's output: 1 when both end in sigmoid or tanh, +inf otherwise.
    double c_bound() const;

private:
    nn::MlpParams branch_;
    nn::MlpParams trunk_;
};

struct DeepONetArch {
    std::size_t sensor_count = 40;
    std::size_t point_dim = 2;
    std::size_t width = 50;
    std::size_t depth = 5;
    std::size_t q = 5;
    nn::HiddenActivation hidden = nn::HiddenActivation::Relu;
    nn::OutputActivation output = nn::OutputActivation::Tanh;
};

nn::MlpSpec branch_spec(const DeepONetArch& arch);
nn::MlpSpec trunk_spec(const DeepONetArch& arch);

// Branch initialized from `seed`, trunk from `seed + 1`.
DeepONetModel make_deeponet(const DeepONetArch& arch, std::uint64_t seed);

double don_forward(const DeepONetModel& model, const Eigen::Ref<const Vector>& s, const Eigen::Ref<const Vector>& p);

// Predictions for a batch of columns.
Vector don_forward_batch(const DeepONetModel& model, const Eigen::Ref<const Matrix>& sensors,
                         const Eigen::Ref<const Matrix>& points);

// (1/n) sum_i (y_i - h(s_i, p_i))^2
double empirical_risk(const DeepONetModel& model, const Dataset& dataset);

struct LossGrads {
    Vector branch;
    Vector trunk;
    double loss = 0.0;
};

// Exact gradient of the mean squared residual over the given batch.
LossGrads loss_grads(const DeepONetModel& model, const Eigen::Ref<const Matrix>& sensors,
                     const Eigen::Ref<const Matrix>& points, const Eigen::Ref<const Vector>& labels);
LossGrads loss_grads(const DeepONetModel& model, const Dataset& batch);

}  // namespace donlab::deeponet
