#pragma once

// Direct evaluation of the q lower-bound displays in 50-digit arithmetic: the
// products are formed as plain powers, with no logarithms or log-sum-exp.

#include <algorithm>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "donlab/bounds/q_bound.hpp"

namespace donlab::oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

inline Real prefactor(const bounds::BoundInputs& in, const Real& denominator) {
    using boost::multiprecision::sqrt;
    const Real eps = in.epsilon;
    const Real B = in.B;
    const Real inner = eps * eps / (Real(288) * B * B) / denominator;
    return sqrt(sqrt(Real(in.n))) * sqrt(sqrt(inner));
}

inline Real q_general(const bounds::BoundInputs& in) {
    using boost::multiprecision::log;
    using boost::multiprecision::pow;
    using boost::multiprecision::sqrt;
    const auto& c = in.cls;
    const Real dB = static_cast<double>(c.d_B);
    const Real dT = static_cast<double>(c.d_T);
    const Real dmin = std::min(dB, dT);
    const Real product = pow(Real(4) * dmin * dmin / Real(in.epsilon), dB + dT) * pow(Real(c.W_B) * sqrt(dB), dB) *
                         pow(Real(c.W_T) * sqrt(dT), dT);
    const Real denom = log(product + Real(2)) + log(Real(2) / (Real(1) - Real(in.delta)));
    return prefactor(in, denom);
}

inline Real q_sigmoid(const bounds::BoundInputs& in) {
    using boost::multiprecision::exp;
    using boost::multiprecision::log;
    using boost::multiprecision::pow;
    using boost::multiprecision::sqrt;
    const auto& c = in.cls;
    const Real dB = static_cast<double>(c.d_B);
    const Real dT = static_cast<double>(c.d_T);
    const Real s = dB + dT;
    const Real dmin = std::min(dB, dT);
    const Real a = in.alpha ? Real(*in.alpha) : dB / s;
    const Real ap = a / 2 * log(Real(1) / a) + (Real(1) - a) / 2 * log(Real(1) / (Real(1) - a));
    const Real inner = exp(-s * ap) * pow(Real(4) * dmin * dmin / Real(in.epsilon) * Real(c.W_B) * sqrt(s), s);
    const Real denom = log(Real(2) + inner) + log(Real(2) / (Real(1) - Real(in.delta)));
    return prefactor(in, denom);
}

// Relative difference measured in the oracle's precision.
inline double rel_diff(double value, const Real& reference) {
    using boost::multiprecision::abs;
    return static_cast<double>(abs(Real(value) - reference) / abs(reference));
}

}  // namespace donlab::oracle
