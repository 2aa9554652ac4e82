#include "donlab/datagen/grf.hpp"

#include <cmath>
#include <string>

#include "donlab/errors.hpp"

namespace donlab::datagen {

Vector uniform_grid(std::size_t n) {
    if (n < 2) throw ConfigError("a uniform grid needs at least two nodes");
    Vector g(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) g(static_cast<Eigen::Index>(i)) = static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

double rbf_kernel(double x1, double x2, double length_scale) {
    if (!(length_scale > 0.0)) throw InputError("rbf_kernel: length scale must be positive");
    const double d = x1 - x2;
    return std::exp(-(d * d) / (2.0 * length_scale * length_scale));
}

Matrix kernel_matrix(const GrfConfig& config) {
    const Eigen::Index n = config.grid.size();
    Matrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            k(i, j) = k(j, i) = rbf_kernel(config.grid(i), config.grid(j), config.length_scale);
        }
        k(i, i) += config.jitter;
    }
    return k;
}

GrfSampler::GrfSampler(GrfConfig config) : config_(std::move(config)) {
    if (config_.grid.size() < 1) throw ConfigError("GRF grid is empty");
    if (config_.jitter < 0.0) throw ConfigError("GRF jitter must be non-negative");
    if (!(config_.length_scale > 0.0)) throw ConfigError("GRF length scale must be positive");
    for (Eigen::Index i = 0; i < config_.grid.size(); ++i) {
        if (config_.grid(i) < 0.0 || config_.grid(i) > 1.0) throw ConfigError("GRF grid must lie in [0, 1]");
        if (i > 0 && !(config_.grid(i) > config_.grid(i - 1))) throw ConfigError("GRF grid must be strictly increasing");
    }
    Eigen::LLT<Matrix> llt(kernel_matrix(config_));
    if (llt.info() != Eigen::Success) {
        throw NumericalError("GRF kernel matrix is not positive definite with jitter " + std::to_string(config_.jitter) +
                             "; raise the jitter");
    }
    factor_ = llt.matrixL();
}

Vector GrfSampler::sample(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal;
    Vector z(factor_.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    return factor_.triangularView<Eigen::Lower>() * z;
}

Vector sample_grf(const GrfConfig& config, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return GrfSampler(config).sample(rng);
}

}  // namespace donlab::datagen
