#include "donlab/lab/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "donlab/datagen/builders.hpp"
#include "donlab/datagen/dataset_io.hpp"
#include "donlab/deeponet/model.hpp"
#include "donlab/deeponet/training.hpp"
#include "donlab/errors.hpp"

namespace donlab::lab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint32_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), tag};
    std::mt19937_64 rng(seq);
    return rng();
}

enum SeedTag : std::uint32_t { kDataTag = 11, kInitTag = 12, kShuffleTag = 13 };

}  // namespace

deeponet::Dataset cell_dataset(std::size_t n, const ExperimentPlan& plan, std::uint64_t seed) {
    if (n < 1) throw ConfigError("cell dataset size must be positive");
    datagen::AdrDatasetConfig cfg;
    cfg.grf.length_scale = plan.grf.length_scale;
    cfg.grf.jitter = plan.grf.jitter;
    cfg.adr = plan.pde;
    cfg.sensor_count = plan.branch_in;
    cfg.points_per_function = std::min(plan.points_per_function, n);
    cfg.num_functions = (n + cfg.points_per_function - 1) / cfg.points_per_function;
    cfg.noise_std = plan.noise_std;
    cfg.seed = derive_seed(seed, n, kDataTag);
    deeponet::Dataset full = datagen::build_adr_dataset(cfg);
    if (full.size() == n) return full;
    std::vector<std::size_t> first(n);
    std::iota(first.begin(), first.end(), std::size_t{0});
    deeponet::Dataset trimmed = full.subset(first);
    // Re-measure B on the kept labels.
    return deeponet::Dataset(trimmed.sensors(), trimmed.points(), trimmed.labels(), trimmed.meta());
}

CellResult run_cell(const ExperimentCell& cell, const ExperimentPlan& plan, std::uint64_t seed) {
    CellResult r;
    r.q = cell.q;
    r.n = cell.n;
    r.width = cell.width;
    r.param_count = cell.param_count;
    r.seed = seed;
    r.final_loss = kNaN;
    r.best_loss = kNaN;
    const auto start = std::chrono::steady_clock::now();
    try {
        const deeponet::Dataset data = cell_dataset(cell.n, plan, seed);
        deeponet::DeepONetArch arch;
        arch.sensor_count = plan.branch_in;
        arch.point_dim = plan.trunk_in;
        arch.width = cell.width;
        arch.depth = plan.depth;
        arch.q = cell.q;
        arch.hidden = plan.hidden;
        arch.output = plan.output;
        nn::AdamConfig adam;
        adam.lr = plan.lr;
        deeponet::TrainingRun run(deeponet::make_deeponet(arch, derive_seed(seed, cell.q, kInitTag)), adam);
        deeponet::TrainConfig tc;
        tc.batch_size = plan.batch_size;
        tc.adam = adam;
        tc.seed = derive_seed(seed, cell.n, kShuffleTag);
        // Epoch by epoch so a blow-up stops the cell early.
        for (std::size_t e = 0; e < plan.epochs; ++e) {
            const double loss = deeponet::train_epochs(run, data, tc, 1).front();
            r.loss_curve.push_back(loss);
            if (!std::isfinite(loss)) {
                r.failed = true;
                r.diagnostic = "non-finite training loss at epoch " + std::to_string(e + 1);
                break;
            }
        }
        if (!r.loss_curve.empty() && !r.failed) {
            r.final_loss = r.loss_curve.back();
            r.best_loss = *std::min_element(r.loss_curve.begin(), r.loss_curve.end());
        }
    } catch (const DivergenceError& e) {
        r.failed = true;
        r.diagnostic = std::string("data generation failed: ") + e.what();
    } catch (const NumericalError& e) {
        r.failed = true;
        r.diagnostic = std::string("numerical failure: ") + e.what();
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

SuiteResult run_suite(const ExperimentPlan& plan, std::size_t threads, const CellCallback& on_done) {
    const auto cells = expand_plan(plan);
    struct Job {
        ExperimentCell cell;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& c : cells) {
        for (std::uint64_t s : plan.seeds) jobs.push_back({c, s});
    }

    SuiteResult suite;
    suite.cells.resize(jobs.size());
    const auto start = std::chrono::steady_clock::now();
    std::atomic<std::size_t> next{0};
    std::mutex callback_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            suite.cells[i] = run_cell(jobs[i].cell, plan, jobs[i].seed);
            if (on_done) {
                std::lock_guard lock(callback_mutex);
                on_done(suite.cells[i]);
            }
        }
    };
    const std::size_t n_threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, jobs.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    suite.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return suite;
}

MonotonicVerdict check_monotonic(const SuiteResult& suite) {
    MonotonicVerdict verdict;
    std::map<std::uint64_t, std::vector<const CellResult*>> by_seed;
    for (const auto& c : suite.cells) {
        if (c.failed || std::isnan(c.best_loss)) {
            verdict.excluded.push_back("q=" + std::to_string(c.q) + " n=" + std::to_string(c.n) +
                                       " seed=" + std::to_string(c.seed) +
                                       (c.diagnostic.empty() ? std::string() : ": " + c.diagnostic));
            continue;
        }
        by_seed[c.seed].push_back(&c);
    }
    std::size_t monotone = 0;
    for (auto& [seed, cells] : by_seed) {
        std::sort(cells.begin(), cells.end(), [](const CellResult* a, const CellResult* b) { return a->q < b->q; });
        bool ok = true;
        for (std::size_t i = 1; i < cells.size(); ++i) {
            if (cells[i]->best_loss > cells[i - 1]->best_loss) ok = false;
        }
        verdict.per_seed[seed] = ok;
        if (ok) ++monotone;
    }
    verdict.majority = !by_seed.empty() && 2 * monotone > by_seed.size();
    return verdict;
}

void emit_plot_data(const SuiteResult& suite, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream curves(dir / "curves.csv");
    std::ofstream summary(dir / "summary.csv");
    if (!curves || !summary) throw InputError("cannot write plot data under " + dir.string());
    curves << "q,n,seed,epoch,loss\n";
    summary << "q,n,seed,best_loss,final_loss\n";
    for (const auto& c : suite.cells) {
        for (std::size_t e = 0; e < c.loss_curve.size(); ++e) {
            curves << c.q << ',' << c.n << ',' << c.seed << ',' << (e + 1) << ','
                   << datagen::format_double(c.loss_curve[e]) << '\n';
        }
        summary << c.q << ',' << c.n << ',' << c.seed << ',' << datagen::format_double(c.best_loss) << ','
                << datagen::format_double(c.final_loss) << '\n';
    }
}

nlohmann::json suite_summary_json(const SuiteResult& suite, const MonotonicVerdict& verdict) {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : suite.cells) {
        cells.push_back({{"q", c.q},
                         {"n", c.n},
                         {"width", c.width},
                         {"param_count", c.param_count},
                         {"seed", c.seed},
                         {"best_loss", num(c.best_loss)},
                         {"final_loss", num(c.final_loss)},
                         {"wall_time", c.wall_time},
                         {"failed", c.failed},
                         {"diagnostic", c.diagnostic}});
    }
    nlohmann::json per_seed = nlohmann::json::object();
    for (const auto& [seed, ok] : verdict.per_seed) per_seed[std::to_string(seed)] = ok;
    return {{"cells", cells},
            {"wall_time", suite.wall_time},
            {"verdict", {{"per_seed", per_seed}, {"majority_monotone", verdict.majority}, {"excluded", verdict.excluded}}}};
}

}  // namespace donlab::lab
