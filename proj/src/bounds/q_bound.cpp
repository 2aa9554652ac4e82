#include "donlab/bounds/q_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "donlab/errors.hpp"

namespace donlab::bounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// n^(1/4) via two correctly rounded square roots, so scaling n by 16 scales the result by exactly 2.
double fourth_root(double x) {
    return std::sqrt(std::sqrt(x));
}

double finite_or_inf(double v) {
    return std::isnan(v) ? kInf : v;
}

BoundReport finish(const BoundInputs& in, LogCoverTerms terms, double threshold, Theorem which) {
    terms.log_confidence = std::log(2.0) - std::log1p(-in.delta);
    terms.denominator = terms.log_cover + terms.log_confidence;
    const double prefactor = in.epsilon * in.epsilon / (288.0 * in.B * in.B);

    BoundReport report;
    report.q_lower = fourth_root(static_cast<double>(in.n)) * std::pow(prefactor / terms.denominator, 0.25);
    report.q_required = std::ceil(report.q_lower);
    report.threshold = threshold;
    report.log_cover_terms = terms;
    report.which_theorem = which;
    report.j_source = in.j_source;
    return report;
}

}  // namespace

void FunctionClassSpec::validate() const {
    if (d_B < 1 || d_T < 1) throw InputError("function class: parameter counts must be positive");
    if (!(W_B >= 1.0) || !(W_T >= 1.0)) throw InputError("function class: weight bounds must be >= 1");
    if (!(C >= 1.0) || !std::isfinite(C)) throw InputError("function class: output bound C must be finite and >= 1");
    if (q < 1) throw InputError("function class: q must be positive");
    if (q > std::min(d_B, d_T)) throw InputError("function class: q must not exceed min(d_B, d_T)");
}

void BoundInputs::validate() const {
    cls.validate();
    if (n < 1) throw InputError("bound inputs: n must be at least 1");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InputError("bound inputs: epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw InputError("bound inputs: delta must lie in (0, 1)");
    if (!(B > 0.0) || !std::isfinite(B)) throw InputError("bound inputs: B must be positive");
    if (!(J > 0.0)) throw InputError("bound inputs: J must be positive");
    if (!(sigma2 >= 0.0)) throw InputError("bound inputs: sigma2 must be non-negative");
    if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) throw InputError("bound inputs: alpha must lie in (0, 1)");
}

std::string to_string(Theorem t) {
    return t == Theorem::General ? "general" : "sigmoid";
}

std::string to_string(JSource s) {
    return s == JSource::Estimated ? "estimated" : "analytic";
}

Theorem parse_theorem(const std::string& name) {
    if (name == "general") return Theorem::General;
    if (name == "sigmoid") return Theorem::Sigmoid;
    throw ConfigError("unknown theorem variant '" + name + "'");
}

JSource parse_j_source(const std::string& name) {
    if (name == "estimated") return JSource::Estimated;
    if (name == "analytic") return JSource::Analytic;
    throw ConfigError("unknown J source '" + name + "'");
}

double log_covering_number_ball(double theta, double weight_bound, std::size_t d) {
    if (!(theta > 0.0)) throw InputError("covering number: theta must be positive");
    if (!(weight_bound > 0.0)) throw InputError("covering number: W must be positive");
    if (d < 1) throw InputError("covering number: dimension must be positive");
    const double dd = static_cast<double>(d);
    return std::max(0.0, dd * std::log(2.0 * weight_bound * std::sqrt(dd) / theta));
}

double log_add_exp(double a, double b) {
    if (a == kInf || b == kInf) return kInf;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    if (hi == -kInf) return -kInf;
    return hi + std::log1p(std::exp(lo - hi));
}

double alpha_prime(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha_prime: alpha must lie in (0, 1)");
    return 0.5 * alpha * std::log(1.0 / alpha) + 0.5 * (1.0 - alpha) * std::log(1.0 / (1.0 - alpha));
}

BoundReport q_lower_bound_general(const BoundInputs& in) {
    in.validate();
    const auto& c = in.cls;
    const double dB = static_cast<double>(c.d_B);
    const double dT = static_cast<double>(c.d_T);
    const double dmin = std::min(dB, dT);

    LogCoverTerms t;
    t.log_dimension_term = finite_or_inf((dB + dT) * std::log(4.0 * dmin * dmin / in.epsilon));
    t.log_branch_weights = finite_or_inf(dB * (std::log(c.W_B) + 0.5 * std::log(dB)));
    t.log_trunk_weights = finite_or_inf(dT * (std::log(c.W_T) + 0.5 * std::log(dT)));
    t.log_product = finite_or_inf(t.log_dimension_term + t.log_branch_weights + t.log_trunk_weights);
    t.log_cover = log_add_exp(t.log_product, std::log(2.0));

    const double threshold = in.sigma2 - in.epsilon * (1.0 + c.C * in.J * (in.B + 2.0 * c.C * c.C));
    return finish(in, t, threshold, Theorem::General);
}

BoundReport q_lower_bound_sigmoid(const BoundInputs& in) {
    in.validate();
    const auto& c = in.cls;
    if (c.C != 1.0) throw InputError("sigmoid bound: requires C = 1");
    if (c.W_B != c.W_T) throw InputError("sigmoid bound: requires a common weight bound W_B = W_T");
    const double dB = static_cast<double>(c.d_B);
    const double dT = static_cast<double>(c.d_T);
    const double s = dB + dT;
    const double dmin = std::min(dB, dT);
    const double a = in.alpha.value_or(dB / s);

    LogCoverTerms t;
    t.alpha_prime = alpha_prime(a);
    // ln[e^{-s a'} (4 min^2 / eps * W sqrt(s))^s]
    t.log_dimension_term = finite_or_inf(s * std::log(4.0 * dmin * dmin / in.epsilon));
    t.log_common_weights = finite_or_inf(s * (std::log(c.W_B) + 0.5 * std::log(s)));
    t.log_product = finite_or_inf(t.log_dimension_term + t.log_common_weights - s * t.alpha_prime);
    t.log_cover = log_add_exp(t.log_product, std::log(2.0));

    const double threshold = in.sigma2 - in.epsilon * (1.0 + in.J * (in.B + 2.0));
    return finish(in, t, threshold, Theorem::Sigmoid);
}

BoundReport q_lower_bound(const BoundInputs& in, Theorem which) {
    return which == Theorem::General ? q_lower_bound_general(in) : q_lower_bound_sigmoid(in);
}

double perturbation_bound(std::size_t q, double C, double J, double theta, double B) {
    const double qq = static_cast<double>(q);
    return qq * C * J * theta * (B + 2.0 * qq * C * C);
}

}  // namespace donlab::bounds
