#include "donlab/deeponet/lipschitz.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "donlab/errors.hpp"

namespace donlab::deeponet {

namespace {

// Uniform draw from the radius-r ball restricted to the active coordinates.
void sample_ball(std::mt19937_64& rng, double radius, const std::vector<bool>& frozen, nn::Vector& out) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    std::size_t active = 0;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const bool is_frozen = !frozen.empty() && frozen[static_cast<std::size_t>(i)];
        out(i) = is_frozen ? 0.0 : normal(rng);
        if (!is_frozen) ++active;
    }
    const double norm = out.norm();
    if (active == 0 || norm == 0.0) return;
    const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(active));
    out *= r / norm;
}

}  // namespace

double InputBox::max_norm() const {
    return lower.cwiseAbs().cwiseMax(upper.cwiseAbs()).norm();
}

JEstimate estimate_J(const nn::MlpSpec& spec, double weight_bound, const InputBox& box, std::size_t pairs,
                     std::uint64_t seed, const JEstimateOptions& options) {
    if (pairs < 1) throw InputError("estimate_J: need at least one pair");
    if (!(weight_bound > 0.0)) throw InputError("estimate_J: weight bound must be positive");
    if (box.dim() != spec.input_dim() || box.upper.size() != box.lower.size()) {
        throw InputError("estimate_J: input box dimension does not match the network input");
    }
    const std::size_t p = nn::param_count(spec);
    if (!options.frozen.empty() && options.frozen.size() != p) {
        throw InputError("estimate_J: frozen mask length does not match the parameter count");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit;
    nn::MlpParams w1(spec);
    nn::MlpParams w2(spec);
    nn::Vector buf1(static_cast<Eigen::Index>(p));
    nn::Vector buf2(static_cast<Eigen::Index>(p));
    nn::Matrix inputs(static_cast<Eigen::Index>(spec.input_dim()), static_cast<Eigen::Index>(options.inputs_per_pair));

    JEstimate est;
    for (std::size_t k = 0; k < pairs; ++k) {
        sample_ball(rng, weight_bound, options.frozen, buf1);
        sample_ball(rng, weight_bound, options.frozen, buf2);
        for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
            for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
                inputs(i, j) = box.lower(i) + (box.upper(i) - box.lower(i)) * unit(rng);
            }
        }
        const double dist = (buf1 - buf2).norm();
        ++est.pairs_used;
        if (dist == 0.0) continue;
        w1.as_vector() = buf1;
        w2.as_vector() = buf2;
        const double diff = (nn::forward_batch(w1, inputs) - nn::forward_batch(w2, inputs)).cwiseAbs().maxCoeff();
        est.value = std::max(est.value, diff / dist);
    }
    return est;
}

double j_upper_bound(double weight_bound, std::size_t params, std::size_t tied, std::size_t depth,
                     double input_radius) {
    if (weight_bound < 1.0) throw InputError("j_upper_bound: requires W >= 1");
    if (params == 0 || tied == 0 || depth == 0 || !(input_radius > 0.0)) {
        throw InputError("j_upper_bound: all arguments must be positive");
    }
    const double p = static_cast<double>(params);
    const double q = static_cast<double>(tied);
    const double log_b = static_cast<double>(depth) * (std::log(weight_bound) + 0.5 * std::log(p * q));
    const double log_j = 2.0 * log_b + std::log(q) + std::log(input_radius) + 0.5 * std::log(p);
    if (log_j > std::log(std::numeric_limits<double>::max())) return std::numeric_limits<double>::infinity();
    const double b = std::pow(weight_bound * std::sqrt(p * q), static_cast<double>(depth));
    return b * b * q * std::sqrt(p) * input_radius;
}

double j_upper_bound(const nn::MlpSpec& spec, double weight_bound, double input_radius) {
    return j_upper_bound(weight_bound, nn::param_count(spec), 1, spec.depth(), input_radius);
}

}  // namespace donlab::deeponet
