#include "donlab/deeponet/training.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "donlab/errors.hpp"

namespace donlab::deeponet {

TrainingRun::TrainingRun(DeepONetModel m, nn::AdamConfig adam)
    : model(std::move(m)), branch_opt(model.branch().size(), adam), trunk_opt(model.trunk().size(), adam) {}

void project_to_ball(nn::MlpParams& params, double radius) {
    const double norm = nn::param_l2_norm(params);
    if (norm > radius) params.as_vector() *= radius / norm;
}

std::vector<double> train_epochs(TrainingRun& run, const Dataset& dataset, const TrainConfig& config,
                                 std::size_t epochs) {
    if (dataset.empty()) throw InputError("train: dataset is empty");
    if (config.batch_size == 0) throw ConfigError("train: batch size must be positive");
    if (dataset.sensor_count() != run.model.sensor_count() || dataset.point_dim() != run.model.point_dim()) {
        throw InputError("train: dataset shape does not match the model");
    }

    const std::size_t n = dataset.size();
    std::vector<std::size_t> order(n);
    nn::Matrix sensors(dataset.sensors().rows(), 0);
    nn::Matrix points(dataset.points().rows(), 0);
    nn::Vector labels;

    std::vector<double> curve;
    curve.reserve(epochs);
    for (std::size_t e = 0; e < epochs; ++e) {
        const std::size_t epoch_index = run.epochs_done;
        std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                          static_cast<std::uint32_t>(epoch_index)};
        std::mt19937_64 rng(seq);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);

        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t len = std::min(config.batch_size, n - start);
            const auto cols = static_cast<Eigen::Index>(len);
            sensors.resize(dataset.sensors().rows(), cols);
            points.resize(dataset.points().rows(), cols);
            labels.resize(cols);
            for (Eigen::Index j = 0; j < cols; ++j) {
                const auto i = static_cast<Eigen::Index>(order[start + static_cast<std::size_t>(j)]);
                sensors.col(j) = dataset.sensors().col(i);
                points.col(j) = dataset.points().col(i);
                labels(j) = dataset.labels()(i);
            }
            const LossGrads g = loss_grads(run.model, sensors, points, labels);
            nn::adam_step(run.branch_opt, run.model.branch(), {g.branch.data(), static_cast<std::size_t>(g.branch.size())});
            nn::adam_step(run.trunk_opt, run.model.trunk(), {g.trunk.data(), static_cast<std::size_t>(g.trunk.size())});
            if (config.project_radius) {
                project_to_ball(run.model.branch(), *config.project_radius);
                project_to_ball(run.model.trunk(), *config.project_radius);
            }
        }
        ++run.epochs_done;
        curve.push_back(empirical_risk(run.model, dataset));
    }
    return curve;
}

}  // namespace donlab::deeponet
