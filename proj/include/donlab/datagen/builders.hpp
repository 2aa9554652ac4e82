#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "donlab/datagen/adr.hpp"
#include "donlab/datagen/grf.hpp"
#include "donlab/datagen/pendulum.hpp"
#include "donlab/deeponet/dataset.hpp"

namespace donlab::datagen {

struct AdrDatasetConfig {
    GrfConfig grf;  // an empty grid means "use the solver x grid"
    AdrConfig adr;
    std::size_t sensor_count = 40;
    std::size_t num_functions = 100;
    std::size_t points_per_function = 100;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
};

struct PendulumDatasetConfig {
    GrfConfig grf;  // an empty grid means "use the time grid"
    PendulumConfig pendulum;
    std::size_t nt = 101;  // time nodes on [0, t_end]
    std::size_t sensor_count = 40;
    std::size_t num_functions = 100;
    std::size_t points_per_function = 100;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
};

// Indices of `count` sensors spread uniformly over a grid of `grid_size` nodes.
std::vector<std::size_t> sensor_indices(std::size_t grid_size, std::size_t count);

/// One GRF forcing per function, solved on the full grid and restricted to the
/// sensors; query points are grid nodes (x_j, t_k) drawn uniformly; labels get
/// optional unclipped Gaussian noise. Forcings, query points and noise use
/// independent random streams derived from the seed, so the noise level can be
/// changed without moving the inputs.
deeponet::Dataset build_adr_dataset(const AdrDatasetConfig& config);

deeponet::Dataset build_adr_dataset(const GrfConfig& grf, const AdrConfig& adr, std::size_t sensor_count,
                                    std::size_t num_functions, std::size_t points_per_function, double noise_std,
                                    std::uint64_t seed);

// Same contract: s = forcing at sensor times, p = query time, y = angle.
deeponet::Dataset build_pendulum_dataset(const PendulumDatasetConfig& config);

}  // namespace donlab::datagen
