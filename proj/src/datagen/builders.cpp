#include "donlab/datagen/builders.hpp"

#include <cmath>
#include <random>
#include <string>

#include "donlab/errors.hpp"

namespace donlab::datagen {

namespace {

enum Stream : std::uint32_t { kForcing = 1, kPoints = 2, kNoise = 3 };

std::mt19937_64 stream_rng(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

void check_counts(std::size_t sensor_count, std::size_t grid_size, std::size_t num_functions,
                  std::size_t points_per_function, double noise_std) {
    if (sensor_count < 1) throw ConfigError("sensor count must be positive");
    if (sensor_count > grid_size) {
        throw ConfigError("sensor count " + std::to_string(sensor_count) + " exceeds the " +
                          std::to_string(grid_size) + "-node grid");
    }
    if (num_functions < 1 || points_per_function < 1) throw ConfigError("dataset needs at least one sample");
    if (noise_std < 0.0) throw ConfigError("noise std must be non-negative");
}

GrfConfig grf_on(const GrfConfig& grf, const Vector& grid) {
    GrfConfig out = grf;
    if (out.grid.size() == 0) {
        out.grid = grid;
    } else if (out.grid.size() != grid.size() || (out.grid - grid).cwiseAbs().maxCoeff() > 0.0) {
        throw ConfigError("GRF grid must match the solver grid");
    }
    return out;
}

Vector restrict_to(const Vector& values, const std::vector<std::size_t>& idx) {
    Vector out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = values(static_cast<Eigen::Index>(idx[i]));
    return out;
}

}  // namespace

std::vector<std::size_t> sensor_indices(std::size_t grid_size, std::size_t count) {
    if (count < 1 || count > grid_size) throw ConfigError("invalid sensor count for the grid");
    std::vector<std::size_t> idx(count);
    if (count == 1) return {0};
    for (std::size_t i = 0; i < count; ++i) {
        idx[i] = static_cast<std::size_t>(
            std::llround(static_cast<double>(i) * static_cast<double>(grid_size - 1) / static_cast<double>(count - 1)));
    }
    return idx;
}

deeponet::Dataset build_adr_dataset(const AdrDatasetConfig& config) {
    const AdrConfig& adr = config.adr;
    check_counts(config.sensor_count, adr.nx, config.num_functions, config.points_per_function, config.noise_std);
    const Vector x_grid = uniform_grid(adr.nx);
    const Vector t_grid = uniform_grid(adr.nt);
    const GrfSampler sampler(grf_on(config.grf, x_grid));
    const auto sensors = sensor_indices(adr.nx, config.sensor_count);

    auto forcing_rng = stream_rng(config.seed, kForcing);
    auto point_rng = stream_rng(config.seed, kPoints);
    auto noise_rng = stream_rng(config.seed, kNoise);
    std::uniform_int_distribution<std::size_t> pick_x(0, adr.nx - 1);
    std::uniform_int_distribution<std::size_t> pick_t(0, adr.nt - 1);
    std::normal_distribution<double> noise(0.0, 1.0);

    const auto n = static_cast<Eigen::Index>(config.num_functions * config.points_per_function);
    Matrix s(static_cast<Eigen::Index>(config.sensor_count), n);
    Matrix p(2, n);
    Vector y(n);
    Eigen::Index col = 0;
    for (std::size_t fn = 0; fn < config.num_functions; ++fn) {
        const Vector f = sampler.sample(forcing_rng);
        const PdeSolution sol = solve_adr(f, adr);
        const Vector sensed = restrict_to(f, sensors);
        for (std::size_t q = 0; q < config.points_per_function; ++q, ++col) {
            const auto j = static_cast<Eigen::Index>(pick_x(point_rng));
            const auto k = static_cast<Eigen::Index>(pick_t(point_rng));
            s.col(col) = sensed;
            p(0, col) = x_grid(j);
            p(1, col) = t_grid(k);
            const double eps = noise(noise_rng);
            y(col) = sol.u(j, k) + config.noise_std * eps;
        }
    }

    deeponet::DatasetMeta meta;
    meta.sensor_grid = restrict_to(x_grid, sensors);
    meta.noise_std = config.noise_std;
    meta.seed = config.seed;
    meta.generator = {{"kind", "adr"},
                      {"D", adr.D},
                      {"k", adr.k},
                      {"nx", adr.nx},
                      {"nt", adr.nt},
                      {"length_scale", config.grf.length_scale},
                      {"jitter", config.grf.jitter},
                      {"sensor_count", config.sensor_count},
                      {"num_functions", config.num_functions},
                      {"points_per_function", config.points_per_function}};
    return deeponet::Dataset(std::move(s), std::move(p), std::move(y), std::move(meta));
}

deeponet::Dataset build_adr_dataset(const GrfConfig& grf, const AdrConfig& adr, std::size_t sensor_count,
                                    std::size_t num_functions, std::size_t points_per_function, double noise_std,
                                    std::uint64_t seed) {
    return build_adr_dataset(AdrDatasetConfig{grf, adr, sensor_count, num_functions, points_per_function, noise_std, seed});
}

deeponet::Dataset build_pendulum_dataset(const PendulumDatasetConfig& config) {
    check_counts(config.sensor_count, config.nt, config.num_functions, config.points_per_function, config.noise_std);
    const Vector t_grid = uniform_grid(config.nt) * config.pendulum.t_end;
    const GrfSampler sampler(grf_on(config.grf, uniform_grid(config.nt)));
    const auto sensors = sensor_indices(config.nt, config.sensor_count);

    auto forcing_rng = stream_rng(config.seed, kForcing);
    auto point_rng = stream_rng(config.seed, kPoints);
    auto noise_rng = stream_rng(config.seed, kNoise);
    std::uniform_int_distribution<std::size_t> pick_t(0, config.nt - 1);
    std::normal_distribution<double> noise(0.0, 1.0);

    const auto n = static_cast<Eigen::Index>(config.num_functions * config.points_per_function);
    Matrix s(static_cast<Eigen::Index>(config.sensor_count), n);
    Matrix p(1, n);
    Vector y(n);
    Eigen::Index col = 0;
    for (std::size_t fn = 0; fn < config.num_functions; ++fn) {
        const Vector f = sampler.sample(forcing_rng);
        const Vector angle = solve_pendulum(config.pendulum, f);
        const Vector sensed = restrict_to(f, sensors);
        for (std::size_t q = 0; q < config.points_per_function; ++q, ++col) {
            const auto k = static_cast<Eigen::Index>(pick_t(point_rng));
            s.col(col) = sensed;
            p(0, col) = t_grid(k);
            const double eps = noise(noise_rng);
            y(col) = angle(k) + config.noise_std * eps;
        }
    }

    deeponet::DatasetMeta meta;
    meta.sensor_grid = restrict_to(t_grid, sensors);
    meta.noise_std = config.noise_std;
    meta.seed = config.seed;
    meta.generator = {{"kind", "pendulum"},
                      {"k", config.pendulum.k},
                      {"y0", config.pendulum.y0},
                      {"v0", config.pendulum.v0},
                      {"t_end", config.pendulum.t_end},
                      {"substeps", config.pendulum.substeps},
                      {"nt", config.nt},
                      {"length_scale", config.grf.length_scale},
                      {"jitter", config.grf.jitter},
                      {"sensor_count", config.sensor_count},
                      {"num_functions", config.num_functions},
                      {"points_per_function", config.points_per_function}};
    return deeponet::Dataset(std::move(s), std::move(p), std::move(y), std::move(meta));
}

}  // namespace donlab::datagen
