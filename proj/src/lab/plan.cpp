#include "donlab/lab/plan.hpp"

#include <cmath>

#include "donlab/errors.hpp"

namespace donlab::lab {

double exponent_value(ScalingExponent e) {
    switch (e) {
    case ScalingExponent::Half: return 0.5;
    case ScalingExponent::TwoThirds: return 2.0 / 3.0;
    case ScalingExponent::Sixth: return 1.0 / 6.0;
    }
    return 0.5;
}

std::string to_string(ScalingExponent e) {
    switch (e) {
    case ScalingExponent::Half: return "1/2";
    case ScalingExponent::TwoThirds: return "2/3";
    case ScalingExponent::Sixth: return "1/6";
    }
    return "1/2";
}

ScalingExponent parse_exponent(const std::string& text) {
    if (text == "1/2" || text == "0.5") return ScalingExponent::Half;
    if (text == "2/3") return ScalingExponent::TwoThirds;
    if (text == "1/6") return ScalingExponent::Sixth;
    throw ConfigError("unknown scaling exponent '" + text + "' (expected 1/2, 2/3 or 1/6)");
}

std::vector<PlanCell> make_plan(std::size_t q0, std::size_t n0, std::span<const std::size_t> q_list,
                                ScalingExponent e, std::optional<std::size_t> first_n) {
    if (q0 < 1 || n0 < 1) throw ConfigError("plan anchor must be positive");
    // Inverse exponents are exact small rationals: 2, 3/2, 6.
    const double inv = e == ScalingExponent::Half ? 2.0 : e == ScalingExponent::TwoThirds ? 1.5 : 6.0;
    std::vector<PlanCell> cells;
    cells.reserve(q_list.size());
    for (std::size_t q : q_list) {
        if (q < 1) throw ConfigError("plan q values must be positive");
        const double ratio = static_cast<double>(q) / static_cast<double>(q0);
        const double n = static_cast<double>(n0) * std::pow(ratio, inv);
        cells.push_back({q, static_cast<std::size_t>(std::llround(n))});
    }
    if (first_n && !cells.empty()) cells.front().n = *first_n;
    return cells;
}

std::size_t deeponet_param_count(std::size_t width, std::size_t q, std::size_t depth, std::size_t branch_in,
                                  std::size_t trunk_in) {
    auto one_net = [&](std::size_t in) {
        return in * width + width + (depth - 2) * (width * width + width) + width * q + q;
    };
    return one_net(branch_in) + one_net(trunk_in);
}

std::size_t size_architecture(std::size_t target_params, std::size_t q, std::size_t depth, std::size_t branch_in,
                              std::size_t trunk_in) {
    if (depth < 2) throw ConfigError("size_architecture: depth must be at least 2");
    if (q < 1 || branch_in < 1 || trunk_in < 1) throw ConfigError("size_architecture: dimensions must be positive");
    const double target = static_cast<double>(target_params);
    if (static_cast<double>(deeponet_param_count(1, q, depth, branch_in, trunk_in)) > target * (1.0 + kParamTolerance)) {
        throw ConfigError("size_architecture: no width >= 1 reaches " + std::to_string(target_params) +
                          " parameters at q = " + std::to_string(q));
    }
    std::size_t best = 1;
    double best_gap = std::abs(static_cast<double>(deeponet_param_count(1, q, depth, branch_in, trunk_in)) - target);
    for (std::size_t w = 2;; ++w) {
        const double count = static_cast<double>(deeponet_param_count(w, q, depth, branch_in, trunk_in));
        const double gap = std::abs(count - target);
        if (gap < best_gap) {
            best = w;
            best_gap = gap;
        }
        if (count > target) break;  // counts grow with w
    }
    return best;
}

std::vector<ExperimentCell> expand_plan(const ExperimentPlan& plan) {
    const auto cells = make_plan(plan.anchor_q, plan.anchor_n, plan.q_list, plan.exponent, plan.first_n);
    std::vector<ExperimentCell> out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0 && (cells[i].q <= cells[i - 1].q || cells[i].n <= cells[i - 1].n)) {
            throw ConfigError("plan: q and n must both increase strictly along the q list");
        }
        ExperimentCell c;
        c.q = cells[i].q;
        c.n = cells[i].n;
        c.width = size_architecture(plan.target_params, c.q, plan.depth, plan.branch_in, plan.trunk_in);
        c.param_count = deeponet_param_count(c.width, c.q, plan.depth, plan.branch_in, plan.trunk_in);
        const double rel = std::abs(static_cast<double>(c.param_count) - static_cast<double>(plan.target_params)) /
                           static_cast<double>(plan.target_params);
        if (rel > kParamTolerance) {
            throw ConfigError("plan: cell q = " + std::to_string(c.q) + " has " + std::to_string(c.param_count) +
                              " parameters, more than 5% away from " + std::to_string(plan.target_params));
        }
        out.push_back(c);
    }
    return out;
}

nlohmann::json plan_to_json(const ExperimentPlan& plan) {
    nlohmann::json j = {{"exponent", to_string(plan.exponent)},
                        {"anchor", {{"q", plan.anchor_q}, {"n", plan.anchor_n}}},
                        {"q_list", plan.q_list},
                        {"target_params", plan.target_params},
                        {"depth", plan.depth},
                        {"branch_in", plan.branch_in},
                        {"trunk_in", plan.trunk_in},
                        {"epochs", plan.epochs},
                        {"batch_size", plan.batch_size},
                        {"lr", plan.lr},
                        {"points_per_function", plan.points_per_function},
                        {"noise_std", plan.noise_std},
                        {"hidden_activation", nn::to_string(plan.hidden)},
                        {"output_activation", nn::to_string(plan.output)},
                        {"pde", {{"D", plan.pde.D}, {"k", plan.pde.k}, {"nx", plan.pde.nx}, {"nt", plan.pde.nt}}},
                        {"grf", {{"length_scale", plan.grf.length_scale}, {"jitter", plan.grf.jitter}}},
                        {"seeds", plan.seeds}};
    j["first_n"] = plan.first_n ? nlohmann::json(*plan.first_n) : nlohmann::json(nullptr);
    return j;
}

ExperimentPlan plan_from_json(const nlohmann::json& j) {
    ExperimentPlan plan;
    try {
        if (j.contains("exponent")) plan.exponent = parse_exponent(j.at("exponent").get<std::string>());
        if (j.contains("anchor")) {
            plan.anchor_q = j.at("anchor").at("q").get<std::size_t>();
            plan.anchor_n = j.at("anchor").at("n").get<std::size_t>();
        }
        if (j.contains("first_n") && !j.at("first_n").is_null()) plan.first_n = j.at("first_n").get<std::size_t>();
        plan.q_list = j.value("q_list", plan.q_list);
        plan.target_params = j.value("target_params", plan.target_params);
        plan.depth = j.value("depth", plan.depth);
        plan.branch_in = j.value("branch_in", plan.branch_in);
        plan.trunk_in = j.value("trunk_in", plan.trunk_in);
        plan.epochs = j.value("epochs", plan.epochs);
        plan.batch_size = j.value("batch_size", plan.batch_size);
        plan.lr = j.value("lr", plan.lr);
        plan.points_per_function = j.value("points_per_function", plan.points_per_function);
        plan.noise_std = j.value("noise_std", plan.noise_std);
        if (j.contains("hidden_activation")) plan.hidden = nn::parse_hidden_activation(j.at("hidden_activation"));
        if (j.contains("output_activation")) plan.output = nn::parse_output_activation(j.at("output_activation"));
        if (j.contains("pde")) {
            const auto& p = j.at("pde");
            plan.pde.D = p.value("D", plan.pde.D);
            plan.pde.k = p.value("k", plan.pde.k);
            plan.pde.nx = p.value("nx", plan.pde.nx);
            plan.pde.nt = p.value("nt", plan.pde.nt);
        }
        if (j.contains("grf")) {
            plan.grf.length_scale = j.at("grf").value("length_scale", plan.grf.length_scale);
            plan.grf.jitter = j.at("grf").value("jitter", plan.grf.jitter);
        }
        plan.seeds = j.value("seeds", plan.seeds);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("plan: ") + e.what());
    }
    if (plan.q_list.empty()) throw ConfigError("plan: q_list is empty");
    return plan;
}

}  // namespace donlab::lab
