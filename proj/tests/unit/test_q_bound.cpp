#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "bound_oracle.hpp"
#include "donlab/bounds/q_bound.hpp"
#include "donlab/errors.hpp"

using namespace donlab;
using namespace donlab::bounds;

namespace {

BoundInputs small_instance() {
    BoundInputs in;
    in.n = 1000000;
    in.epsilon = 1.0;
    in.delta = 0.5;
    in.B = 1.0;
    in.cls.d_B = 10;
    in.cls.d_T = 10;
    in.cls.W_B = 1.0;
    in.cls.W_T = 1.0;
    in.cls.C = 1.0;
    in.cls.q = 5;
    in.J = 1.0;
    return in;
}

// Random record valid for both variants (C = 1, W_B = W_T); epsilon <= 1.
BoundInputs random_inputs(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    BoundInputs in;
    in.n = 1 + static_cast<std::size_t>(std::pow(10.0, 7.0 * u(rng)));
    in.epsilon = 0.01 + 0.99 * u(rng);
    in.delta = 0.01 + 0.98 * u(rng);
    in.B = 0.1 + 10.0 * u(rng);
    in.cls.d_B = 1 + static_cast<std::size_t>(std::pow(10.0, 5.0 * u(rng)));
    in.cls.d_T = 1 + static_cast<std::size_t>(std::pow(10.0, 5.0 * u(rng)));
    in.cls.W_B = 1.0 + 100.0 * u(rng);
    in.cls.W_T = in.cls.W_B;
    in.cls.C = 1.0;
    in.cls.q = 1;
    in.J = 0.1 + 10.0 * u(rng);
    return in;
}

}  // namespace

TEST(CoveringNumber, Examples) {
    EXPECT_DOUBLE_EQ(log_covering_number_ball(1.0, 1.0, 1), std::numbers::ln2);
    EXPECT_EQ(log_covering_number_ball(2.0 * 3.0 * std::sqrt(4.0), 3.0, 4), 0.0);
    EXPECT_EQ(log_covering_number_ball(100.0, 1.0, 2), 0.0);
    EXPECT_THROW(log_covering_number_ball(0.0, 1.0, 1), InputError);
    EXPECT_THROW(log_covering_number_ball(-1.0, 1.0, 1), InputError);
}

// Common weight bound W: the joint count at theta never exceeds the product of the
// branch and trunk counts at theta/2 (the gap is s (ln 2 - alpha')).
TEST(CoveringNumber, ProductRule) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const std::size_t dB = 1 + rng() % 50;
        const std::size_t dT = 1 + rng() % 50;
        const double W = 1.0 + 5 * u(rng);
        const double theta = 0.01 + 3 * u(rng);
        const double joint = log_covering_number_ball(theta, W, dB + dT);
        const double parts = log_covering_number_ball(theta / 2, W, dB) + log_covering_number_ball(theta / 2, W, dT);
        EXPECT_LE(joint, parts + 1e-9);
    }
}

TEST(LogAddExp, Stable) {
    EXPECT_DOUBLE_EQ(log_add_exp(0.0, 0.0), std::numbers::ln2);
    EXPECT_DOUBLE_EQ(log_add_exp(1000.0, std::log(2.0)), 1000.0);
    EXPECT_TRUE(std::isinf(log_add_exp(INFINITY, 1.0)));
    EXPECT_NEAR(log_add_exp(std::log(3.0), std::log(2.0)), std::log(5.0), 1e-15);
}

TEST(AlphaPrime, Examples) {
    EXPECT_NEAR(alpha_prime(0.5), 0.5 * std::numbers::ln2, 1e-15);
    EXPECT_NEAR(alpha_prime(0.5), 0.34657359027997264, 1e-15);
    EXPECT_NEAR(alpha_prime(0.25), 0.125 * std::log(4.0) + 0.375 * std::log(4.0 / 3.0), 1e-15);
    for (double a : {0.01, 0.1, 0.3, 0.42}) EXPECT_NEAR(alpha_prime(a), alpha_prime(1.0 - a), 1e-15);
    EXPECT_THROW(alpha_prime(0.0), InputError);
    EXPECT_THROW(alpha_prime(1.0), InputError);
}

TEST(QLowerBound, SixteenTimesNDoublesExactly) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto in = random_inputs(rng);
        auto big = in;
        big.n = 16 * in.n;
        for (auto which : {Theorem::General, Theorem::Sigmoid}) {
            EXPECT_EQ(q_lower_bound(big, which).q_lower, 2.0 * q_lower_bound(in, which).q_lower);
        }
    }
}

TEST(QLowerBound, MatchesExtendedPrecisionOracle) {
    const auto in = small_instance();
    EXPECT_LT(oracle::rel_diff(q_lower_bound_general(in).q_lower, oracle::q_general(in)), 1e-12);
    EXPECT_LT(oracle::rel_diff(q_lower_bound_sigmoid(in).q_lower, oracle::q_sigmoid(in)), 1e-12);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        auto r = random_inputs(rng);
        r.cls.d_B = 1 + r.cls.d_B % 3000;
        r.cls.d_T = 1 + r.cls.d_T % 3000;
        r.cls.W_T = r.cls.W_B;
        if (i % 2) r.alpha = 0.05 + 0.9 * static_cast<double>(i) / 30.0;
        EXPECT_LT(oracle::rel_diff(q_lower_bound_general(r).q_lower, oracle::q_general(r)), 1e-12);
        EXPECT_LT(oracle::rel_diff(q_lower_bound_sigmoid(r).q_lower, oracle::q_sigmoid(r)), 1e-12);
    }
}

TEST(QLowerBound, ReportFields) {
    auto in = small_instance();
    in.sigma2 = 0.3;
    in.J = 2.0;
    in.B = 1.5;
    in.cls.C = 1.0;
    const auto g = q_lower_bound_general(in);
    EXPECT_EQ(g.which_theorem, Theorem::General);
    EXPECT_EQ(g.j_source, JSource::Estimated);
    EXPECT_DOUBLE_EQ(g.threshold, 0.3 - 1.0 * (1.0 + 2.0 * (1.5 + 2.0)));
    EXPECT_EQ(g.q_required, std::ceil(g.q_lower));
    EXPECT_NEAR(g.log_cover_terms.log_confidence, std::log(4.0), 1e-15);
    EXPECT_NEAR(g.log_cover_terms.log_dimension_term, 20.0 * std::log(400.0), 1e-12);
    const auto s = q_lower_bound_sigmoid(in);
    EXPECT_DOUBLE_EQ(s.threshold, 0.3 - 1.0 * (1.0 + 2.0 * (1.5 + 2.0)));
    EXPECT_NEAR(s.log_cover_terms.alpha_prime, 0.5 * std::numbers::ln2, 1e-15);
}

// With matched inputs the variants share the n^(1/4)(eps^2/288B^2)^(1/4) prefactor,
// so q^4 * denominator agrees.
TEST(QLowerBound, VariantsDifferOnlyThroughDenominator) {
    auto in = small_instance();
    in.alpha = 0.5;
    const auto g = q_lower_bound_general(in);
    const auto s = q_lower_bound_sigmoid(in);
    EXPECT_GE(s.q_lower, 0.0);
    EXPECT_NEAR(std::pow(g.q_lower, 4) * g.log_cover_terms.denominator,
                std::pow(s.q_lower, 4) * s.log_cover_terms.denominator, 1e-9);
}

TEST(QLowerBound, ThresholdSlopeInEpsilon) {
    auto in = small_instance();
    in.cls.C = 2.0;
    in.cls.q = 1;
    in.J = 3.0;
    in.B = 0.5;
    double prev = INFINITY;
    for (double eps : {0.1, 0.2, 0.5, 1.0, 2.0}) {
        in.epsilon = eps;
        const double t = q_lower_bound_general(in).threshold;
        EXPECT_LT(t, prev);
        EXPECT_NEAR(t, -eps * (1.0 + 2.0 * 3.0 * (0.5 + 8.0)), 1e-12);
        prev = t;
    }
}

TEST(QLowerBound, MonotoneSweeps) {
    std::mt19937_64 rng(17);
    int checks = 0;
    for (int i = 0; i < 300; ++i) {
        const auto base = random_inputs(rng);
        for (auto which : {Theorem::General, Theorem::Sigmoid}) {
            const double q0 = q_lower_bound(base, which).q_lower;
            auto w = base;
            w.cls.W_B *= 1.7;
            w.cls.W_T = w.cls.W_B;
            EXPECT_LE(q_lower_bound(w, which).q_lower, q0);
            auto db = base;
            db.cls.d_B += 1 + rng() % 1000;
            EXPECT_LE(q_lower_bound(db, which).q_lower, q0);
            auto dt = base;
            dt.cls.d_T += 1 + rng() % 1000;
            EXPECT_LE(q_lower_bound(dt, which).q_lower, q0);
            auto de = base;
            de.delta = base.delta + (1.0 - base.delta) * 0.5;
            EXPECT_LE(q_lower_bound(de, which).q_lower, q0);
            auto n = base;
            n.n += 1 + rng() % 100000;
            EXPECT_GE(q_lower_bound(n, which).q_lower, q0);
            checks += 5;
        }
        // Separate trunk bound, general variant only.
        auto wt = base;
        wt.cls.W_T *= 3.0;
        EXPECT_LE(q_lower_bound_general(wt).q_lower, q_lower_bound_general(base).q_lower);
    }
    EXPECT_EQ(checks, 3000);
}

TEST(QLowerBound, DeltaToOneDrivesBoundToZero) {
    auto in = small_instance();
    double prev = INFINITY;
    for (double d : {0.5, 0.9, 0.99, 0.9999, 1.0 - 1e-12}) {
        in.delta = d;
        const double q = q_lower_bound_general(in).q_lower;
        EXPECT_LT(q, prev);
        prev = q;
    }
}

TEST(QLowerBound, LargeClassesStayFinite) {
    BoundInputs in;
    in.n = 1000000;
    in.epsilon = 1e-3;
    in.delta = 0.9;
    in.B = 1.0;
    in.cls.d_B = 500000;
    in.cls.d_T = 500000;
    in.cls.W_B = 1e6;
    in.cls.W_T = 1e6;
    in.cls.q = 10;
    for (auto which : {Theorem::General, Theorem::Sigmoid}) {
        const auto r = q_lower_bound(in, which);
        EXPECT_TRUE(std::isfinite(r.q_lower));
        EXPECT_TRUE(std::isfinite(r.log_cover_terms.log_cover));
        EXPECT_GT(r.q_lower, 0.0);
    }
}

TEST(QLowerBound, OverflowedLogTermStillGivesFiniteBound) {
    auto in = small_instance();
    in.cls.d_B = std::size_t{1} << 62;
    in.cls.d_T = std::size_t{1} << 62;
    in.cls.W_B = 1e300;
    in.cls.W_T = 1e300;
    in.epsilon = 1e-300;
    const auto r = q_lower_bound_general(in);
    EXPECT_TRUE(std::isinf(r.log_cover_terms.log_cover));
    EXPECT_TRUE(std::isfinite(r.q_lower));
    EXPECT_EQ(r.q_lower, 0.0);
}

TEST(QLowerBound, InputValidation) {
    auto in = small_instance();
    in.delta = 1.0;
    EXPECT_THROW(q_lower_bound_general(in), InputError);
    in = small_instance();
    in.delta = 0.0;
    EXPECT_THROW(q_lower_bound_general(in), InputError);
    in = small_instance();
    in.cls.W_B = 0.5;
    EXPECT_THROW(q_lower_bound_general(in), InputError);
    in = small_instance();
    in.cls.q = 11;
    EXPECT_THROW(q_lower_bound_general(in), InputError);
    in = small_instance();
    in.cls.C = 2.0;
    EXPECT_NO_THROW(q_lower_bound_general(in));
    EXPECT_THROW(q_lower_bound_sigmoid(in), InputError);
    in = small_instance();
    in.cls.W_T = 2.0;
    EXPECT_THROW(q_lower_bound_sigmoid(in), InputError);
    in = small_instance();
    in.alpha = 1.0;
    EXPECT_THROW(q_lower_bound_sigmoid(in), InputError);
}

TEST(PerturbationBound, Examples) {
    EXPECT_EQ(perturbation_bound(1, 1.0, 1.0, 1.0, 1.0), 3.0);
    EXPECT_EQ(perturbation_bound(4, 1.0, 2.0, 0.0, 1.0), 0.0);
    const double base = perturbation_bound(3, 1.5, 2.0, 0.1, 0.7);
    EXPECT_DOUBLE_EQ(perturbation_bound(3, 1.5, 2.0, 0.2, 0.7), 2.0 * base);
    EXPECT_DOUBLE_EQ(perturbation_bound(3, 1.5, 6.0, 0.1, 0.7), 3.0 * base);
    EXPECT_DOUBLE_EQ(base, 3 * 1.5 * 2.0 * 0.1 * (0.7 + 2 * 3 * 2.25));
}

TEST(Names, ParseRoundTrip) {
    EXPECT_EQ(parse_theorem(to_string(Theorem::Sigmoid)), Theorem::Sigmoid);
    EXPECT_EQ(parse_j_source(to_string(JSource::Analytic)), JSource::Analytic);
    EXPECT_THROW(parse_theorem("lemma"), ConfigError);
}
