#pragma once

#include <cstdint>
#include <filesystem>

#include <json.hpp>

#include "donlab/deeponet/training.hpp"
#include "donlab/nn/mlp.hpp"

namespace donlab::deeponet {

nlohmann::json spec_to_json(const nn::MlpSpec& spec);
nn::MlpSpec spec_from_json(const nlohmann::json& j);

struct CheckpointSeeds {
    std::uint64_t init = 0;
    std::uint64_t train = 0;
};

struct Checkpoint {
    TrainingRun run;
    CheckpointSeeds seeds;
};

// JSON header (both specs, q, seeds, epoch count) plus flat parameter and optimizer
// arrays. Numbers are written in shortest round-trip form, so reloading is bit-exact.
nlohmann::json checkpoint_to_json(const TrainingRun& run, const CheckpointSeeds& seeds);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::filesystem::path& path, const TrainingRun& run, const CheckpointSeeds& seeds);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace donlab::deeponet
