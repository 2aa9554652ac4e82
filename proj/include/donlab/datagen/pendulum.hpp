#pragma once

#include <cstddef>

#include "donlab/nn/mlp.hpp"

namespace donlab::datagen {

using nn::Vector;

struct PendulumConfig {
    double k = 1.0;  // y'' = -k sin(y) + f(t)
    double y0 = 0.0;
    double v0 = 0.0;
    double t_end = 1.0;
    std::size_t substeps = 1;  // RK4 steps per forcing sample interval
};

// Classical RK4 on (y, v) with f linearly interpolated between samples taken on a
// uniform grid over [0, t_end]. Returns y at the sample times.
Vector solve_pendulum(double k, const Vector& f_samples, double y0, double v0, double t_end = 1.0,
                      std::size_t substeps = 1);
Vector solve_pendulum(const PendulumConfig& config, const Vector& f_samples);

}  // namespace donlab::datagen
