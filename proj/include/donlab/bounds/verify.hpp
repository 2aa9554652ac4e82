#pragma once

#include <cstddef>
#include <cstdint>

#include "donlab/deeponet/dataset.hpp"
#include "donlab/deeponet/model.hpp"

namespace donlab::bounds {

struct PerturbationReport {
    double max_observed = 0.0;  // largest empirical-risk increase seen
    double bound = 0.0;
    double J = 0.0;  // analytic weight-Lipschitz constant used for the bound
    std::size_t trials = 0;
    bool holds = true;
};

// Analytic J shared by both nets of `model`, valid for every weight vector within
// `radius` (L2) of the current ones and for the inputs present in `dataset`.
// Biases are treated as weights on a constant-1 input.
double analytic_j(const deeponet::DeepONetModel& model, const deeponet::Dataset& dataset, double radius);

/// Perturbs each net's weights by a vector drawn uniformly from the radius-theta/2
/// ball, `trials` times, and records the largest increase of the empirical risk.
/// With the analytic J the increase can never exceed perturbation_bound.
/// Trial k's draw does not depend on `trials`, so max_observed is a running max.
PerturbationReport verify_perturbation(const deeponet::DeepONetModel& model, double theta,
                                       const deeponet::Dataset& dataset, std::size_t trials, std::uint64_t seed);

struct CoverReport {
    std::size_t dim = 0;
    double spacing = 0.0;        // per-axis grid spacing
    double grid_points = 0.0;    // cardinality of the constructed cover
    double lemma_bound = 0.0;    // (2 W sqrt(d) / theta)^d
    double max_distance = 0.0;   // worst probe-to-nearest-center distance
    bool covered = false;
    bool within_bound = false;

    bool holds() const { return covered && within_bound; }
};

// Builds a uniform grid cover of [-W, W]^d (d <= 3) with cell half-diagonal theta and
// checks that it is no larger than the covering-number bound and that `probes`
// uniform points of the cube each lie within theta of a center.
CoverReport verify_cover_bruteforce(std::size_t d, double weight_bound, double theta, std::size_t probes,
                                    std::uint64_t seed);

struct HoeffdingReport {
    double empirical_tail = 0.0;  // fraction of trials with mean - E >= t
    double bound = 0.0;           // exp(-2 n t^2 / (b - a)^2)
    double std_error = 0.0;       // Monte Carlo standard error of empirical_tail
    std::size_t trials = 0;
    bool holds = true;
};

// Means of n i.i.d. uniform[a, b] draws; holds when the tail is within bound + 3 SE.
HoeffdingReport hoeffding_mc_check(double a, double b, std::size_t n, double t, std::size_t trials,
                                   std::uint64_t seed);

}  // namespace donlab::bounds
