#include "donlab/bounds/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "donlab/bounds/q_bound.hpp"
#include "donlab/deeponet/lipschitz.hpp"
#include "donlab/errors.hpp"

namespace donlab::bounds {

namespace {

void add_ball_draw(std::mt19937_64& rng, double radius, nn::MlpParams& params) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    nn::Vector dir(static_cast<Eigen::Index>(params.size()));
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = normal(rng);
    const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(dir.size()));
    const double norm = dir.norm();
    if (norm > 0.0) params.as_vector() += (r / norm) * dir;
}

double input_radius(const nn::Matrix& inputs) {
    const double max_sq = inputs.cols() ? inputs.colwise().squaredNorm().maxCoeff() : 0.0;
    return std::sqrt(1.0 + max_sq);
}

}  // namespace

double analytic_j(const deeponet::DeepONetModel& model, const deeponet::Dataset& dataset, double radius) {
    // Entrywise bound on every reachable weight vector.
    const double wb = std::max(1.0, model.branch().as_vector().cwiseAbs().maxCoeff() + radius);
    const double wt = std::max(1.0, model.trunk().as_vector().cwiseAbs().maxCoeff() + radius);
    const double jb = deeponet::j_upper_bound(model.branch().spec(), wb, input_radius(dataset.sensors()));
    const double jt = deeponet::j_upper_bound(model.trunk().spec(), wt, input_radius(dataset.points()));
    return std::max(jb, jt);
}

PerturbationReport verify_perturbation(const deeponet::DeepONetModel& model, double theta,
                                       const deeponet::Dataset& dataset, std::size_t trials, std::uint64_t seed) {
    if (theta < 0.0) throw InputError("verify_perturbation: theta must be non-negative");
    if (!std::isfinite(model.c_bound())) {
        throw InputError("verify_perturbation: both nets need bounded (sigmoid/tanh) outputs");
    }
    PerturbationReport report;
    report.J = analytic_j(model, dataset, theta / 2.0);
    report.bound = perturbation_bound(model.q(), model.c_bound(), report.J, theta, dataset.label_bound());
    const double base = deeponet::empirical_risk(model, dataset);

    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < trials; ++k) {
        deeponet::DeepONetModel moved = model;
        add_ball_draw(rng, theta / 2.0, moved.branch());
        add_ball_draw(rng, theta / 2.0, moved.trunk());
        const double increase = theta == 0.0 ? 0.0 : deeponet::empirical_risk(moved, dataset) - base;
        report.max_observed = std::max(report.max_observed, increase);
        ++report.trials;
    }
    report.holds = report.max_observed <= report.bound;
    return report;
}

CoverReport verify_cover_bruteforce(std::size_t d, double weight_bound, double theta, std::size_t probes,
                                    std::uint64_t seed) {
    if (d < 1 || d > 3) throw InputError("verify_cover_bruteforce: dimension must be 1, 2 or 3");
    if (!(theta > 0.0) || !(weight_bound > 0.0)) throw InputError("verify_cover_bruteforce: theta and W must be positive");

    const double dd = static_cast<double>(d);
    CoverReport report;
    report.dim = d;
    report.spacing = 2.0 * theta / std::sqrt(dd);
    const auto per_axis = static_cast<std::size_t>(std::ceil(2.0 * weight_bound / report.spacing - 1e-12));
    const std::size_t k = std::max<std::size_t>(1, per_axis);
    report.grid_points = std::pow(static_cast<double>(k), dd);
    report.lemma_bound = std::pow(2.0 * weight_bound * std::sqrt(dd) / theta, dd);
    report.within_bound = report.grid_points <= std::ceil(report.lemma_bound);

    // k centers per axis, symmetric about 0 and spaced report.spacing apart.
    const double first = -0.5 * report.spacing * static_cast<double>(k - 1);
    auto nearest_center = [&](double x) {
        const double idx = std::clamp(std::round((x - first) / report.spacing), 0.0, static_cast<double>(k - 1));
        return first + idx * report.spacing;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-weight_bound, weight_bound);
    report.covered = true;
    for (std::size_t i = 0; i < probes; ++i) {
        double sq = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            const double x = coord(rng);
            const double diff = x - nearest_center(x);
            sq += diff * diff;
        }
        report.max_distance = std::max(report.max_distance, std::sqrt(sq));
    }
    report.covered = report.max_distance <= theta;
    return report;
}

HoeffdingReport hoeffding_mc_check(double a, double b, std::size_t n, double t, std::size_t trials,
                                   std::uint64_t seed) {
    if (!(b > a)) throw InputError("hoeffding_mc_check: need a < b");
    if (n < 1 || trials < 1) throw InputError("hoeffding_mc_check: n and trials must be positive");
    if (t < 0.0) throw InputError("hoeffding_mc_check: t must be non-negative");

    HoeffdingReport report;
    report.trials = trials;
    report.bound = std::exp(-2.0 * static_cast<double>(n) * t * t / ((b - a) * (b - a)));
    const double mean = 0.5 * (a + b);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> draw(a, b);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < trials; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += draw(rng);
        if (sum / static_cast<double>(n) - mean >= t) ++hits;
    }
    report.empirical_tail = static_cast<double>(hits) / static_cast<double>(trials);
    report.std_error = std::sqrt(report.empirical_tail * (1.0 - report.empirical_tail) / static_cast<double>(trials));
    report.holds = report.empirical_tail <= report.bound + 3.0 * report.std_error;
    return report;
}

}  // namespace donlab::bounds
