#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "donlab/nn/mlp.hpp"

namespace donlab::datagen {

using nn::Matrix;
using nn::Vector;

struct GrfConfig {
    Vector grid;  // strictly increasing, inside [0, 1]
    double length_scale = 1e-3;
    double jitter = 1e-10;
};

// n equally spaced nodes on [0, 1], endpoints included.
Vector uniform_grid(std::size_t n);

// exp(-|x1 - x2|^2 / (2 l^2))
double rbf_kernel(double x1, double x2, double length_scale);

// K + jitter * I on the config grid.
Matrix kernel_matrix(const GrfConfig& config);

/// Draws mean-zero Gaussian random fields f = L z with L the Cholesky factor of the
/// jittered RBF kernel matrix. The factorization is done once at construction.
class GrfSampler {
public:
    explicit GrfSampler(GrfConfig config);

    Vector sample(std::mt19937_64& rng) const;
    const GrfConfig& config() const { return config_; }
    const Matrix& cholesky_factor() const { return factor_; }

private:
    GrfConfig config_;
    Matrix factor_;
};

Vector sample_grf(const GrfConfig& config, std::uint64_t seed);

}  // namespace donlab::datagen
