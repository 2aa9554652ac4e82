#include <cmath>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "donlab/lab/suite.hpp"
#include "test_util.hpp"

using namespace donlab;
using namespace donlab::lab;

namespace {

ExperimentPlan tiny_plan() {
    ExperimentPlan p;
    p.anchor_q = 2;
    p.anchor_n = 200;
    p.q_list = {2, 4};
    p.target_params = 1500;
    p.depth = 3;
    p.epochs = 3;
    p.batch_size = 64;
    p.pde.nx = 41;
    p.pde.nt = 41;
    p.seeds = {0, 1};
    return p;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::filesystem::path& path) {
    const auto text = slurp(path);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

CellResult fake_cell(std::size_t q, std::uint64_t seed, double best) {
    CellResult c;
    c.q = q;
    c.n = 100 * q;
    c.seed = seed;
    c.best_loss = best;
    c.final_loss = best;
    c.loss_curve = {best};
    return c;
}

}  // namespace

TEST(CellDataset, SizeAndDeterminism) {
    auto plan = tiny_plan();
    const auto a = cell_dataset(250, plan, 3);
    EXPECT_EQ(a.size(), 250u);
    EXPECT_EQ(a.sensor_count(), 40u);
    EXPECT_EQ(a.label_bound(), a.labels().cwiseAbs().maxCoeff());
    EXPECT_EQ(cell_dataset(250, plan, 3).labels(), a.labels());
    EXPECT_NE(cell_dataset(250, plan, 4).labels(), a.labels());
}

TEST(RunCell, ZeroEpochs) {
    auto plan = tiny_plan();
    plan.epochs = 0;
    const auto r = run_cell(expand_plan(plan).front(), plan, 0);
    EXPECT_TRUE(r.loss_curve.empty());
    EXPECT_TRUE(std::isnan(r.final_loss));
    EXPECT_TRUE(std::isnan(r.best_loss));
    EXPECT_FALSE(r.failed);
}

TEST(RunCell, SameSeedIsBitIdentical) {
    const auto plan = tiny_plan();
    const auto cell = expand_plan(plan).back();
    const auto a = run_cell(cell, plan, 5);
    const auto b = run_cell(cell, plan, 5);
    EXPECT_EQ(a.loss_curve, b.loss_curve);
    EXPECT_EQ(a.loss_curve.size(), plan.epochs);
    EXPECT_EQ(a.best_loss, *std::min_element(a.loss_curve.begin(), a.loss_curve.end()));
}

TEST(RunCell, ToyCellTrains) {
    ExperimentPlan plan;
    plan.epochs = 30;
    const ExperimentCell cell{4, 2000, 16, deeponet_param_count(16, 4, plan.depth, plan.branch_in, plan.trunk_in)};
    const auto r = run_cell(cell, plan, 0);
    ASSERT_FALSE(r.failed) << r.diagnostic;
    ASSERT_EQ(r.loss_curve.size(), 30u);
    EXPECT_LT(r.final_loss, r.loss_curve.front());
}

TEST(RunCell, SolverBlowUpMarksCellFailed) {
    auto plan = tiny_plan();
    plan.pde.D = 0.0;
    plan.pde.k = 1e4;
    plan.grf.length_scale = 0.5;
    const auto r = run_cell(expand_plan(plan).front(), plan, 0);
    EXPECT_TRUE(r.failed);
    EXPECT_NE(r.diagnostic.find("diverged"), std::string::npos);
    EXPECT_TRUE(r.loss_curve.empty());
}

TEST(RunSuite, DeterministicAndThreadIndependent) {
    const auto plan = tiny_plan();
    const auto a = run_suite(plan, 1);
    const auto b = run_suite(plan, 3);
    ASSERT_EQ(a.cells.size(), 4u);
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        EXPECT_EQ(a.cells[i].q, b.cells[i].q);
        EXPECT_EQ(a.cells[i].seed, b.cells[i].seed);
        EXPECT_EQ(a.cells[i].loss_curve, b.cells[i].loss_curve);
    }
    // ordered by (q, seed)
    EXPECT_EQ(a.cells[0].q, 2u);
    EXPECT_EQ(a.cells[1].seed, 1u);
    EXPECT_EQ(a.cells[2].q, 4u);
}

TEST(RunSuite, FailedCellsDoNotAbort) {
    auto plan = tiny_plan();
    plan.pde.D = 0.0;
    plan.pde.k = 1e4;
    plan.grf.length_scale = 0.5;
    std::size_t callbacks = 0;
    const auto suite = run_suite(plan, 2, [&](const CellResult&) { ++callbacks; });
    EXPECT_EQ(callbacks, 4u);
    for (const auto& c : suite.cells) EXPECT_TRUE(c.failed);
    const auto v = check_monotonic(suite);
    EXPECT_EQ(v.excluded.size(), 4u);
    EXPECT_FALSE(v.majority);
}

TEST(CheckMonotonic, EdgeCases) {
    SuiteResult single;
    single.cells = {fake_cell(4, 0, 0.3)};
    EXPECT_TRUE(check_monotonic(single).majority);

    SuiteResult flat;
    for (std::uint64_t s = 0; s < 3; ++s) {
        for (std::size_t q : {4, 8, 16}) flat.cells.push_back(fake_cell(q, s, 0.25));
    }
    EXPECT_TRUE(check_monotonic(flat).majority);

    SuiteResult split;
    split.cells = {fake_cell(4, 0, 0.3), fake_cell(8, 0, 0.2),   // monotone
                   fake_cell(4, 1, 0.3), fake_cell(8, 1, 0.4),   // not
                   fake_cell(4, 2, 0.3), fake_cell(8, 2, 0.31)}; // not
    const auto v = check_monotonic(split);
    EXPECT_FALSE(v.majority);
    EXPECT_TRUE(v.per_seed.at(0));
    EXPECT_FALSE(v.per_seed.at(1));

    // A failed cell is left out and named; the remaining curve decides.
    SuiteResult partial = split;
    partial.cells[3].failed = true;
    partial.cells[3].diagnostic = "boom";
    partial.cells[3].best_loss = NAN;
    const auto w = check_monotonic(partial);
    EXPECT_TRUE(w.per_seed.at(1));
    EXPECT_TRUE(w.majority);
    ASSERT_EQ(w.excluded.size(), 1u);
    EXPECT_NE(w.excluded[0].find("boom"), std::string::npos);

    EXPECT_FALSE(check_monotonic(SuiteResult{}).majority);
}

TEST(EmitPlotData, RowCountsAndByteIdenticalReemission) {
    const auto plan = tiny_plan();
    const auto suite = run_suite(plan, 1);
    const auto dir1 = testutil::scratch_dir("plot1");
    const auto dir2 = testutil::scratch_dir("plot2");
    emit_plot_data(suite, dir1);
    emit_plot_data(suite, dir2);
    EXPECT_EQ(line_count(dir1 / "curves.csv"), 1 + 2 * 2 * plan.epochs);
    EXPECT_EQ(line_count(dir1 / "summary.csv"), 1 + 2u * 2u);
    EXPECT_EQ(slurp(dir1 / "curves.csv"), slurp(dir2 / "curves.csv"));
    EXPECT_EQ(slurp(dir1 / "summary.csv"), slurp(dir2 / "summary.csv"));
    EXPECT_EQ(slurp(dir1 / "curves.csv").substr(0, 22), "q,n,seed,epoch,loss\n2,");
}

TEST(EmitPlotData, EmptySuiteWritesHeadersOnly) {
    const auto dir = testutil::scratch_dir("plot_empty");
    emit_plot_data(SuiteResult{}, dir);
    EXPECT_EQ(slurp(dir / "curves.csv"), "q,n,seed,epoch,loss\n");
    EXPECT_EQ(slurp(dir / "summary.csv"), "q,n,seed,best_loss,final_loss\n");
}

TEST(SuiteSummary, JsonCarriesVerdictAndFailures) {
    SuiteResult s;
    s.cells = {fake_cell(4, 0, 0.3), fake_cell(8, 0, 0.2)};
    s.cells[1].failed = true;
    s.cells[1].best_loss = NAN;
    const auto j = suite_summary_json(s, check_monotonic(s));
    EXPECT_TRUE(j["cells"][1]["best_loss"].is_null());
    EXPECT_TRUE(j["verdict"]["majority_monotone"].get<bool>());
    EXPECT_EQ(j["verdict"]["excluded"].size(), 1u);
}
