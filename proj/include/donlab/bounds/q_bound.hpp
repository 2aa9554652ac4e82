#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace donlab::bounds {

/// Branch/trunk function class: parameter counts, weight-norm bounds and the
/// output sup-norm bound C. The input-Lipschitz constants are carried for
/// reporting only; no evaluated formula depends on them.
struct FunctionClassSpec {
    std::size_t d_B = 1;
    std::size_t d_T = 1;
    double W_B = 1.0;
    double W_T = 1.0;
    double C = 1.0;
    std::optional<double> L_B;
    std::optional<double> L_T;
    std::size_t q = 1;

    void validate() const;
};

enum class Theorem { General, Sigmoid };
enum class JSource { Estimated, Analytic };

std::string to_string(Theorem t);
std::string to_string(JSource s);
Theorem parse_theorem(const std::string& name);
JSource parse_j_source(const std::string& name);

struct BoundInputs {
    std::size_t n = 1;
    double epsilon = 1.0;
    double delta = 0.5;
    double B = 1.0;  // label bound
    FunctionClassSpec cls;
    double J = 1.0;
    double sigma2 = 0.0;
    std::optional<double> alpha;  // branch share of parameters; defaults to d_B / (d_B + d_T)
    JSource j_source = JSource::Estimated;

    void validate() const;
};

/// Pieces of the logarithm in the bound's denominator. Entries are natural logs;
/// +inf marks a term that overflowed even in log space.
struct LogCoverTerms {
    double log_dimension_term = 0.0;  // (d_B + d_T) ln(4 min(d_B,d_T)^2 / eps)
    double log_branch_weights = 0.0;  // general: d_B ln(W_B sqrt(d_B))
    double log_trunk_weights = 0.0;   // general: d_T ln(W_T sqrt(d_T))
    double log_common_weights = 0.0;  // sigmoid: s ln(W sqrt(s)), s = d_B + d_T
    double alpha_prime = 0.0;         // sigmoid only
    double log_product = 0.0;         // log of the quantity that gets "+ 2"
    double log_cover = 0.0;           // ln(product + 2)
    double log_confidence = 0.0;      // ln(2 / (1 - delta))
    double denominator = 0.0;         // log_cover + log_confidence
};

struct BoundReport {
    double q_lower = 0.0;
    // Smallest integer q satisfying the bound (ceiling of q_lower).
    double q_required = 0.0;
    double threshold = 0.0;  // empirical risk level the bound is conditioned on
    LogCoverTerms log_cover_terms;
    Theorem which_theorem = Theorem::General;
    JSource j_source = JSource::Estimated;
};

// max(0, d ln(2 W sqrt(d) / theta)): log of the covering-number bound of the radius-W ball in R^d.
double log_covering_number_ball(double theta, double weight_bound, std::size_t d);

// ln(e^a + e^b) without overflow.
double log_add_exp(double a, double b);

// (alpha/2) ln(1/alpha) + ((1-alpha)/2) ln(1/(1-alpha)), for alpha in (0, 1).
double alpha_prime(double alpha);

// q lower bound for a general class with C >= 1.
BoundReport q_lower_bound_general(const BoundInputs& in);

// q lower bound when both nets end in sigmoid gates: C = 1 and W_B = W_T.
BoundReport q_lower_bound_sigmoid(const BoundInputs& in);

BoundReport q_lower_bound(const BoundInputs& in, Theorem which);

// Increase of the empirical risk allowed when each net's weights move by at most theta/2:
// q C J theta (B + 2 q C^2).
double perturbation_bound(std::size_t q, double C, double J, double theta, double B);

}  // namespace donlab::bounds
