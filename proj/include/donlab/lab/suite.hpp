#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "donlab/deeponet/dataset.hpp"
#include "donlab/lab/plan.hpp"

namespace donlab::lab {

struct CellResult {
    std::size_t q = 0;
    std::size_t n = 0;
    std::size_t width = 0;
    std::size_t param_count = 0;
    std::uint64_t seed = 0;
    std::vector<double> loss_curve;  // full-dataset training loss after each epoch
    double final_loss = 0.0;         // NaN when no epoch ran
    double best_loss = 0.0;          // NaN when no epoch ran
    double wall_time = 0.0;          // seconds
    bool failed = false;
    std::string diagnostic;
};

struct SuiteResult {
    std::vector<CellResult> cells;  // ordered by (q, seed)
    double wall_time = 0.0;
};

// Training set of a cell; depends only on (n, pde, grf, seed).
deeponet::Dataset cell_dataset(std::size_t n, const ExperimentPlan& plan, std::uint64_t seed);

// Trains a fresh DeepONet for plan.epochs epochs. Solver divergence or a non-finite
// loss marks the cell failed instead of throwing.
CellResult run_cell(const ExperimentCell& cell, const ExperimentPlan& plan, std::uint64_t seed);

using CellCallback = std::function<void(const CellResult&)>;

// Every cell x seed, up to `threads` at a time. Results are keyed by (q, seed),
// so the outcome does not depend on scheduling.
SuiteResult run_suite(const ExperimentPlan& plan, std::size_t threads = 1, const CellCallback& on_done = {});

struct MonotonicVerdict {
    std::map<std::uint64_t, bool> per_seed;  // best_loss non-increasing along q
    bool majority = false;
    std::vector<std::string> excluded;  // failed cells left out of the verdict
};

MonotonicVerdict check_monotonic(const SuiteResult& suite);

// Writes curves.csv (q,n,seed,epoch,loss) and summary.csv (q,n,seed,best_loss,final_loss).
void emit_plot_data(const SuiteResult& suite, const std::filesystem::path& dir);

nlohmann::json suite_summary_json(const SuiteResult& suite, const MonotonicVerdict& verdict);

}  // namespace donlab::lab
