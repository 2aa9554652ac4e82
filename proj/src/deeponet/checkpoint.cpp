#include "donlab/deeponet/checkpoint.hpp"

#include <fstream>

#include "donlab/errors.hpp"

namespace donlab::deeponet {

namespace {

constexpr const char* kFormat = "donlab-checkpoint";
constexpr int kVersion = 1;

nlohmann::json vector_to_json(const nn::Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

nn::Vector vector_from_json(const nlohmann::json& j, std::size_t expected, const char* what) {
    const auto values = j.get<std::vector<double>>();
    if (values.size() != expected) throw FormatError(std::string("checkpoint: wrong length for ") + what);
    return Eigen::Map<const nn::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

nlohmann::json adam_to_json(const nn::AdamState& s) {
    return {{"t", s.t},
            {"lr", s.config.lr},
            {"beta1", s.config.beta1},
            {"beta2", s.config.beta2},
            {"eps", s.config.eps},
            {"m", vector_to_json(s.m)},
            {"v", vector_to_json(s.v)}};
}

nn::AdamState adam_from_json(const nlohmann::json& j, std::size_t size) {
    nn::AdamConfig cfg{j.at("lr").get<double>(), j.at("beta1").get<double>(), j.at("beta2").get<double>(),
                       j.at("eps").get<double>()};
    nn::AdamState s(size, cfg);
    s.t = j.at("t").get<std::int64_t>();
    s.m = vector_from_json(j.at("m"), size, "adam m");
    s.v = vector_from_json(j.at("v"), size, "adam v");
    return s;
}

nlohmann::json net_to_json(const nn::MlpParams& p) {
    return {{"spec", spec_to_json(p.spec())}, {"params", p.flatten()}};
}

nn::MlpParams net_from_json(const nlohmann::json& j) {
    const nn::MlpSpec spec = spec_from_json(j.at("spec"));
    auto flat = j.at("params").get<std::vector<double>>();
    if (flat.size() != nn::param_count(spec)) throw FormatError("checkpoint: parameter count does not match spec");
    return nn::MlpParams(spec, std::move(flat));
}

}  // namespace

nlohmann::json spec_to_json(const nn::MlpSpec& spec) {
    return {{"layer_dims", spec.layer_dims},
            {"hidden_activation", nn::to_string(spec.hidden)},
            {"output_activation", nn::to_string(spec.output)},
            {"init_scheme", nn::to_string(spec.init)}};
}

nn::MlpSpec spec_from_json(const nlohmann::json& j) {
    nn::MlpSpec spec;
    spec.layer_dims = j.at("layer_dims").get<std::vector<std::size_t>>();
    spec.hidden = nn::parse_hidden_activation(j.at("hidden_activation").get<std::string>());
    spec.output = nn::parse_output_activation(j.at("output_activation").get<std::string>());
    spec.init = nn::parse_init_scheme(j.value("init_scheme", nn::to_string(nn::default_init_for(spec.hidden))));
    spec.validate();
    return spec;
}

nlohmann::json checkpoint_to_json(const TrainingRun& run, const CheckpointSeeds& seeds) {
    return {{"format", kFormat},
            {"version", kVersion},
            {"q", run.model.q()},
            {"seeds", {{"init", seeds.init}, {"train", seeds.train}}},
            {"epochs_done", run.epochs_done},
            {"branch", net_to_json(run.model.branch())},
            {"trunk", net_to_json(run.model.trunk())},
            {"optimizer", {{"branch", adam_to_json(run.branch_opt)}, {"trunk", adam_to_json(run.trunk_opt)}}}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != kFormat) throw FormatError("checkpoint: unknown format tag");
        DeepONetModel model(net_from_json(j.at("branch")), net_from_json(j.at("trunk")));
        if (model.q() != j.at("q").get<std::size_t>()) throw FormatError("checkpoint: q does not match the nets");
        TrainingRun run(std::move(model));
        run.epochs_done = j.at("epochs_done").get<std::size_t>();
        if (j.contains("optimizer")) {
            run.branch_opt = adam_from_json(j.at("optimizer").at("branch"), run.model.branch().size());
            run.trunk_opt = adam_from_json(j.at("optimizer").at("trunk"), run.model.trunk().size());
        }
        CheckpointSeeds seeds{j.at("seeds").at("init").get<std::uint64_t>(),
                              j.at("seeds").at("train").get<std::uint64_t>()};
        return {std::move(run), seeds};
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("checkpoint: ") + e.what());
    }
}

void save_checkpoint(const std::filesystem::path& path, const TrainingRun& run, const CheckpointSeeds& seeds) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write checkpoint " + path.string());
    out << checkpoint_to_json(run, seeds).dump(1) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open checkpoint " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("checkpoint " + path.string() + ": " + e.what());
    }
    return checkpoint_from_json(j);
}

}  // namespace donlab::deeponet
