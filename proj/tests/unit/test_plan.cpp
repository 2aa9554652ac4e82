#include <cmath>

#include <gtest/gtest.h>

#include "donlab/errors.hpp"
#include "donlab/lab/plan.hpp"

using namespace donlab;
using namespace donlab::lab;

namespace {

struct TableRow {
    std::size_t params;
    std::size_t q;
    std::size_t n;
};

// Reference (parameter count, q, n) rows of the three ADR experiment tables.
const std::vector<TableRow> kSixthTable{{18112, 6, 11650}, {18316, 8, 65511}, {18520, 10, 249906}, {18724, 12, 746215}};
const std::vector<TableRow> kHalfTable{{18010, 5, 10000},   {18520, 10, 40000},   {18568, 15, 90000},
                                       {18719, 40, 640000}, {18714, 45, 810000}, {18760, 50, 1000000}};
const std::vector<TableRow> kTwoThirdsTable{{18010, 5, 10000},   {18520, 10, 31623},  {18568, 15, 58000},
                                            {18719, 40, 252982}, {18714, 45, 301870}, {18760, 50, 353553}};

std::vector<std::size_t> qs(const std::vector<TableRow>& rows) {
    std::vector<std::size_t> out;
    for (const auto& r : rows) out.push_back(r.q);
    return out;
}

double rel(double a, double b) { return std::abs(a - b) / b; }

void expect_table(const std::vector<TableRow>& rows, const std::vector<PlanCell>& plan) {
    ASSERT_EQ(plan.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(plan[i].q, rows[i].q);
        EXPECT_LT(rel(static_cast<double>(plan[i].n), static_cast<double>(rows[i].n)), 0.01) << "q = " << rows[i].q;
    }
}

}  // namespace

TEST(MakePlan, HalfExponentSquares) {
    const std::vector<std::size_t> q{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    const auto plan = make_plan(5, 10000, q, ScalingExponent::Half);
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_EQ(plan[i].n, 400 * q[i] * q[i]);
    EXPECT_EQ(plan.back().n, 1000000u);
}

TEST(MakePlan, ReproducesReferenceTables) {
    expect_table(kSixthTable, make_plan(6, 11650, qs(kSixthTable), ScalingExponent::Sixth));
    expect_table(kHalfTable, make_plan(5, 10000, qs(kHalfTable), ScalingExponent::Half));
    // The 2/3 series starts from n = 10^4 but is anchored at (10, 31623).
    expect_table(kTwoThirdsTable, make_plan(10, 31623, qs(kTwoThirdsTable), ScalingExponent::TwoThirds, 10000));
}

TEST(MakePlan, WorkedExamples) {
    const std::size_t q50[] = {50};
    EXPECT_LT(rel(static_cast<double>(make_plan(10, 31623, q50, ScalingExponent::TwoThirds)[0].n), 353553.0), 0.01);
    const std::size_t q8[] = {8};
    EXPECT_LT(rel(static_cast<double>(make_plan(6, 11650, q8, ScalingExponent::Sixth)[0].n), 65511.0), 0.01);
}

TEST(MakePlan, RatioHeldFixed) {
    const std::vector<std::size_t> q{4, 8, 16, 32};
    for (auto e : {ScalingExponent::Half, ScalingExponent::TwoThirds, ScalingExponent::Sixth}) {
        const auto plan = make_plan(4, 4000, q, e);
        const double ratio0 = 4.0 / std::pow(4000.0, exponent_value(e));
        for (const auto& c : plan) {
            EXPECT_NEAR(static_cast<double>(c.q) / std::pow(static_cast<double>(c.n), exponent_value(e)), ratio0,
                        1e-3 * ratio0);
        }
    }
}

TEST(MakePlan, ExponentNames) {
    for (auto e : {ScalingExponent::Half, ScalingExponent::TwoThirds, ScalingExponent::Sixth}) {
        EXPECT_EQ(parse_exponent(to_string(e)), e);
    }
    EXPECT_THROW(parse_exponent("3/4"), ConfigError);
}

TEST(ParamCount, ClosedForm) {
    for (std::size_t w : {1, 10, 24, 50}) {
        for (std::size_t q : {1, 5, 50}) {
            EXPECT_EQ(deeponet_param_count(w, q, 5, 40, 2), 6 * w * w + 50 * w + 2 * w * q + 2 * q);
        }
    }
    EXPECT_EQ(deeponet_param_count(50, 5, 5, 40, 2), 18010u);
}

TEST(SizeArchitecture, ExactAnchorRow) {
    EXPECT_EQ(size_architecture(18010, 5, 5, 40, 2), 50u);
}

TEST(SizeArchitecture, ReferenceCountsWithinFivePercent) {
    for (const auto* table : {&kSixthTable, &kHalfTable, &kTwoThirdsTable}) {
        for (const auto& row : *table) {
            const auto w = size_architecture(row.params, row.q, 5, 40, 2);
            const auto count = deeponet_param_count(w, row.q, 5, 40, 2);
            EXPECT_LT(rel(static_cast<double>(count), static_cast<double>(row.params)), 0.05) << "q = " << row.q;
            // Fixed 18010 budget across the whole q range as well.
            const auto w0 = size_architecture(18010, row.q, 5, 40, 2);
            EXPECT_LT(rel(static_cast<double>(deeponet_param_count(w0, row.q, 5, 40, 2)), 18010.0), 0.05);
        }
    }
}

TEST(SizeArchitecture, ClosestWidthAndMonotoneInTarget) {
    for (std::size_t q : {1, 4, 16, 50}) {
        std::size_t prev = 0;
        for (std::size_t target = 500; target < 100000; target *= 2) {
            const auto w = size_architecture(target, q, 5, 40, 2);
            EXPECT_GT(w, prev);
            prev = w;
            const double gap = std::abs(static_cast<double>(deeponet_param_count(w, q, 5, 40, 2)) - target);
            if (w > 1) {
                EXPECT_LE(gap, std::abs(static_cast<double>(deeponet_param_count(w - 1, q, 5, 40, 2)) - target));
            }
            EXPECT_LE(gap, std::abs(static_cast<double>(deeponet_param_count(w + 1, q, 5, 40, 2)) - target));
        }
    }
}

TEST(SizeArchitecture, Infeasible) {
    EXPECT_THROW(size_architecture(10, 5, 5, 40, 2), ConfigError);
    EXPECT_THROW(size_architecture(18010, 5, 1, 40, 2), ConfigError);
}

TEST(ExpandPlan, DefaultPlanIsValid) {
    const auto cells = expand_plan(ExperimentPlan{});
    ASSERT_EQ(cells.size(), 10u);
    EXPECT_EQ(cells.front().width, 50u);
    EXPECT_EQ(cells.front().param_count, 18010u);
    for (const auto& c : cells) EXPECT_LT(rel(static_cast<double>(c.param_count), 18010.0), kParamTolerance);
}

TEST(ExpandPlan, RejectsBadPlans) {
    ExperimentPlan p;
    p.q_list = {10, 5};
    EXPECT_THROW(expand_plan(p), ConfigError);
    p = ExperimentPlan{};
    p.target_params = 2000;  // q = 50 cannot get within 5%
    EXPECT_THROW(expand_plan(p), ConfigError);
    p = ExperimentPlan{};
    p.q_list = {5, 6};
    p.exponent = ScalingExponent::Half;
    p.anchor_n = 1;  // rounds to n = 1 twice
    EXPECT_THROW(expand_plan(p), ConfigError);
}

TEST(PlanJson, RoundTrip) {
    ExperimentPlan p;
    p.exponent = ScalingExponent::TwoThirds;
    p.anchor_q = 10;
    p.anchor_n = 31623;
    p.first_n = 10000;
    p.seeds = {4, 5};
    p.output = nn::OutputActivation::Sigmoid;
    p.pde.D = 0.1;
    const auto back = plan_from_json(plan_to_json(p));
    EXPECT_EQ(plan_to_json(back), plan_to_json(p));
    EXPECT_EQ(back.first_n, std::optional<std::size_t>(10000));
    EXPECT_EQ(back.exponent, ScalingExponent::TwoThirds);
}

TEST(PlanJson, Errors) {
    EXPECT_THROW(plan_from_json({{"q_list", "nope"}}), ConfigError);
    EXPECT_THROW(plan_from_json({{"q_list", nlohmann::json::array()}}), ConfigError);
    EXPECT_THROW(plan_from_json({{"exponent", "1/3"}}), ConfigError);
}
