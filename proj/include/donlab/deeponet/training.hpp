#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "donlab/deeponet/dataset.hpp"
#include "donlab/deeponet/model.hpp"
#include "donlab/nn/adam.hpp"

namespace donlab::deeponet {

struct TrainConfig {
    std::size_t batch_size = 256;
    nn::AdamConfig adam;
    std::uint64_t seed = 0;  // drives the per-epoch shuffles
    // When set, each net's weight vector is projected back onto this L2 ball after every step.
    std::optional<double> project_radius;
};

/// A model plus the optimizer state needed to continue training it.
struct TrainingRun {
    explicit TrainingRun(DeepONetModel m, nn::AdamConfig adam = {});

    DeepONetModel model;
    nn::AdamState branch_opt;
    nn::AdamState trunk_opt;
    std::size_t epochs_done = 0;
};

// Runs `epochs` epochs of shuffled mini-batch Adam and returns the full-dataset
// empirical risk measured at the end of each epoch. The shuffle of epoch e depends
// only on (config.seed, e), so a resumed run reproduces an uninterrupted one.
std::vector<double> train_epochs(TrainingRun& run, const Dataset& dataset, const TrainConfig& config,
                                 std::size_t epochs);

void project_to_ball(nn::MlpParams& params, double radius);

}  // namespace donlab::deeponet
