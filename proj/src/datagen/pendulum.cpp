#include "donlab/datagen/pendulum.hpp"

#include <array>
#include <cmath>

#include "donlab/errors.hpp"

namespace donlab::datagen {

Vector solve_pendulum(double k, const Vector& f_samples, double y0, double v0, double t_end, std::size_t substeps) {
    if (f_samples.size() < 2) throw InputError("solve_pendulum: need at least two forcing samples");
    if (substeps < 1) throw InputError("solve_pendulum: substeps must be positive");
    if (!(t_end > 0.0)) throw InputError("solve_pendulum: t_end must be positive");

    const Eigen::Index intervals = f_samples.size() - 1;
    const double h = t_end / static_cast<double>(intervals) / static_cast<double>(substeps);
    Vector y(f_samples.size());
    y(0) = y0;

    double pos = y0;
    double vel = v0;
    for (Eigen::Index i = 0; i < intervals; ++i) {
        const double f_left = f_samples(i);
        const double f_right = f_samples(i + 1);
        // Forcing at fraction s in [0, 1] of the current sample interval.
        auto forcing = [&](double s) { return f_left + (f_right - f_left) * s; };
        auto accel = [&](double yy, double s) { return -k * std::sin(yy) + forcing(s); };
        const double ds = 1.0 / static_cast<double>(substeps);
        for (std::size_t j = 0; j < substeps; ++j) {
            const double s0 = static_cast<double>(j) * ds;
            const double k1y = vel;
            const double k1v = accel(pos, s0);
            const double k2y = vel + 0.5 * h * k1v;
            const double k2v = accel(pos + 0.5 * h * k1y, s0 + 0.5 * ds);
            const double k3y = vel + 0.5 * h * k2v;
            const double k3v = accel(pos + 0.5 * h * k2y, s0 + 0.5 * ds);
            const double k4y = vel + h * k3v;
            const double k4v = accel(pos + h * k3y, s0 + ds);
            pos += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            vel += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        y(i + 1) = pos;
    }
    return y;
}

Vector solve_pendulum(const PendulumConfig& config, const Vector& f_samples) {
    return solve_pendulum(config.k, f_samples, config.y0, config.v0, config.t_end, config.substeps);
}

}  // namespace donlab::datagen
