#include "donlab/datagen/adr.hpp"

#include <cmath>
#include <string>

#include "donlab/datagen/grf.hpp"
#include "donlab/errors.hpp"

namespace donlab::datagen {

namespace {

constexpr double kBlowUp = 1e10;

// Thomas algorithm for a constant symmetric tridiagonal matrix (diag, off), factored once.
class TridiagonalSolver {
public:
    TridiagonalSolver(Eigen::Index n, double diag, double off) : off_(off), c_(n), inv_denom_(n) {
        double prev_c = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double denom = diag - off * prev_c;
            inv_denom_(i) = 1.0 / denom;
            c_(i) = off / denom;
            prev_c = c_(i);
        }
    }

    void solve(Vector& rhs) const {
        const Eigen::Index n = rhs.size();
        if (n == 0) return;
        rhs(0) *= inv_denom_(0);
        for (Eigen::Index i = 1; i < n; ++i) rhs(i) = (rhs(i) - off_ * rhs(i - 1)) * inv_denom_(i);
        for (Eigen::Index i = n - 1; i-- > 0;) rhs(i) -= c_(i) * rhs(i + 1);
    }

private:
    double off_;
    Vector c_;
    Vector inv_denom_;
};

}  // namespace

PdeSolution solve_adr(const Vector& f, const AdrConfig& config) {
    if (config.nx < 3 || config.nt < 3) throw ConfigError("ADR grid needs nx, nt >= 3");
    if (config.D < 0.0) throw ConfigError("ADR diffusion coefficient must be non-negative");
    if (static_cast<std::size_t>(f.size()) != config.nx) {
        throw InputError("solve_adr: source has " + std::to_string(f.size()) + " values, grid has " +
                         std::to_string(config.nx));
    }

    PdeSolution sol;
    sol.x_grid = uniform_grid(config.nx);
    sol.t_grid = uniform_grid(config.nt);
    sol.f = f;
    const auto nx = static_cast<Eigen::Index>(config.nx);
    const auto nt = static_cast<Eigen::Index>(config.nt);
    sol.u = Matrix::Zero(nx, nt);

    const double dx = 1.0 / static_cast<double>(nx - 1);
    const double dt = 1.0 / static_cast<double>(nt - 1);
    const double r = 0.5 * config.D * dt / (dx * dx);
    const Eigen::Index m = nx - 2;  // interior unknowns
    const TridiagonalSolver implicit_part(m, 1.0 + 2.0 * r, -r);
    const Vector source = f.segment(1, m);

    Vector u = Vector::Zero(m);
    Vector explicit_part(m);
    Vector stage(m);
    auto reaction = [&](const Vector& v) -> Vector { return config.k * v.array().square().matrix() + source; };

    for (Eigen::Index step = 1; step < nt; ++step) {
        // (I + r L) u with zero Dirichlet neighbours.
        for (Eigen::Index i = 0; i < m; ++i) {
            const double left = i > 0 ? u(i - 1) : 0.0;
            const double right = i + 1 < m ? u(i + 1) : 0.0;
            explicit_part(i) = (1.0 - 2.0 * r) * u(i) + r * (left + right);
        }
        const Vector n0 = reaction(u);
        stage = explicit_part + dt * n0;
        implicit_part.solve(stage);
        Vector next = explicit_part + 0.5 * dt * (n0 + reaction(stage));
        implicit_part.solve(next);
        u = std::move(next);

        const double peak = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
        if (!std::isfinite(peak) || peak > kBlowUp) {
            throw DivergenceError("ADR solver diverged at time step " + std::to_string(step), static_cast<long>(step));
        }
        sol.u.col(step).segment(1, m) = u;
    }
    return sol;
}

}  // namespace donlab::datagen
