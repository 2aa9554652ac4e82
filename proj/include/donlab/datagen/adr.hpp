#pragma once

#include <cstddef>

#include "donlab/nn/mlp.hpp"

namespace donlab::datagen {

using nn::Matrix;
using nn::Vector;

// u_t = D u_xx + k u^2 + f(x) on [0,1] x [0,1], zero initial and boundary values.
struct AdrConfig {
    double D = 0.01;
    double k = 0.01;
    std::size_t nx = 101;
    std::size_t nt = 101;
};

struct PdeSolution {
    Matrix u;  // nx x nt, column k is the state at t_grid(k)
    Vector x_grid;
    Vector t_grid;
    Vector f;
};

/// Crank-Nicolson for the diffusion term, Heun (explicit trapezoidal) for the
/// reaction and source terms, one tridiagonal solve per stage. Second order in
/// both dx and dt. Boundary rows are held at zero whatever f does there.
/// Throws DivergenceError if |u| exceeds 1e10 or turns non-finite.
PdeSolution solve_adr(const Vector& f, const AdrConfig& config);

}  // namespace donlab::datagen
