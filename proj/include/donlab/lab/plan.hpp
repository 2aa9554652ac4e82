#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "donlab/datagen/adr.hpp"
#include "donlab/datagen/grf.hpp"
#include "donlab/nn/mlp.hpp"

namespace donlab::lab {

// Growth law held fixed across a plan: q / n^e is kept constant.
enum class ScalingExponent { Half, TwoThirds, Sixth };

double exponent_value(ScalingExponent e);
std::string to_string(ScalingExponent e);
ScalingExponent parse_exponent(const std::string& text);

struct PlanCell {
    std::size_t q = 0;
    std::size_t n = 0;
};

// n_i = round(n0 * (q_i / q0)^(1/e)). When `first_n` is given the first cell uses it
// instead, for series that start from a fixed dataset size regardless of the anchor.
std::vector<PlanCell> make_plan(std::size_t q0, std::size_t n0, std::span<const std::size_t> q_list,
                                ScalingExponent e, std::optional<std::size_t> first_n = std::nullopt);

// Total branch + trunk parameters for uniform hidden width: for each net
// [in, w x (depth-1), q]. With depth 5, branch_in 40, trunk_in 2 this is
// 6w^2 + 50w + 2wq + 2q.
std::size_t deeponet_param_count(std::size_t width, std::size_t q, std::size_t depth, std::size_t branch_in,
                                  std::size_t trunk_in);

// Width whose parameter count is closest to target (ties go to the smaller width).
// Throws ConfigError when even width 1 overshoots the target by more than 5%.
std::size_t size_architecture(std::size_t target_params, std::size_t q, std::size_t depth, std::size_t branch_in,
                              std::size_t trunk_in);

struct ExperimentPlan {
    ScalingExponent exponent = ScalingExponent::Half;
    std::size_t anchor_q = 5;
    std::size_t anchor_n = 10000;
    std::optional<std::size_t> first_n;
    std::vector<std::size_t> q_list{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    std::size_t target_params = 18010;
    std::size_t depth = 5;
    std::size_t branch_in = 40;
    std::size_t trunk_in = 2;
    std::size_t epochs = 120;
    std::size_t batch_size = 256;
    double lr = 1e-3;
    std::size_t points_per_function = 100;
    double noise_std = 0.0;
    nn::HiddenActivation hidden = nn::HiddenActivation::Relu;
    nn::OutputActivation output = nn::OutputActivation::Tanh;
    datagen::AdrConfig pde;
    datagen::GrfConfig grf;  // grid is taken from the PDE x grid
    std::vector<std::uint64_t> seeds{0, 1, 2};
};

struct ExperimentCell {
    std::size_t q = 0;
    std::size_t n = 0;
    std::size_t width = 0;
    std::size_t param_count = 0;
};

// Tolerated relative deviation of a cell's parameter count from the plan target.
inline constexpr double kParamTolerance = 0.05;

// Resolves (q, n, width) for every cell. Throws ConfigError if n is not strictly
// increasing with q or any cell misses target_params by more than 5%.
std::vector<ExperimentCell> expand_plan(const ExperimentPlan& plan);

nlohmann::json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const nlohmann::json& j);

}  // namespace donlab::lab
