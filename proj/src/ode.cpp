#include "observerlab/ode.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace observerlab {

namespace {

void check_finite(std::span<const double> dxdt, double t) {
    for (double v : dxdt) {
        if (!std::isfinite(v)) {
            throw std::runtime_error("rk4_step: non-finite derivative at t=" + std::to_string(t));
        }
    }
}

// Core step writing into out; scratch buffers owned by the caller.
void rk4_step_into(const StateFn& f, double t, std::span<const double> x, double h,
                   std::span<double> out, std::vector<double>& k1, std::vector<double>& k2,
                   std::vector<double>& k3, std::vector<double>& k4, std::vector<double>& tmp) {
    const std::size_t n = x.size();
    f(t, x, k1);
    check_finite(k1, t);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    check_finite(k2, t + 0.5 * h);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    check_finite(k3, t + 0.5 * h);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    f(t + h, tmp, k4);
    check_finite(k4, t + h);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

}  // namespace

std::vector<double> rk4_step(const StateFn& f, double t, std::span<const double> x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("rk4_step: h must be > 0");
    const std::size_t n = x.size();
    std::vector<double> out(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
    rk4_step_into(f, t, x, h, out, k1, k2, k3, k4, tmp);
    return out;
}

Trajectory integrate(const StateFn& f, const TimeGrid& grid, std::span<const double> x0) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("integrate: empty initial state");
    Trajectory traj(grid, n);
    auto first = traj.sample(0);
    for (std::size_t i = 0; i < n; ++i) first[i] = x0[i];

    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    const double h = grid.step();
    for (std::size_t k = 0; k + 1 < grid.count(); ++k) {
        try {
            rk4_step_into(f, grid.time_at(k), traj.sample(k), h, traj.sample(k + 1),
                          k1, k2, k3, k4, tmp);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error(std::string(e.what()) + " (sample " + std::to_string(k) + ")");
        }
    }
    return traj;
}

SampledInput::SampledInput(const Signal& s, Interp mode) : signal_(&s), mode_(mode) {}

double SampledInput::operator()(double t) const {
    const Signal& s = *signal_;
    const TimeGrid& g = s.grid();
    const std::size_t last = g.count() - 1;
    double pos = (t - g.t0()) / g.step();
    if (mode_ == Interp::kHold) {
        // keep the left sample across the whole step; the small backoff makes
        // the stage at t + h land on the left sample despite rounding
        pos -= 1e-9;
        if (pos <= 0.0) return s[0];
        const auto k = static_cast<std::size_t>(pos);
        return s[std::min(k, last)];
    }
    if (pos <= 0.0) return s[0];
    if (pos >= static_cast<double>(last)) return s[last];
    const auto k = static_cast<std::size_t>(pos);
    if (mode_ == Interp::kCubic && g.count() >= 4) {
        // Lagrange cubic through the 4 samples around the step
        std::size_t base = k == 0 ? 0 : k - 1;
        base = std::min(base, g.count() - 4);
        const double x = pos - static_cast<double>(base);  // in [0, 3]
        double acc = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            double w = 1.0;
            for (std::size_t j = 0; j < 4; ++j) {
                if (j == i) continue;
                w *= (x - static_cast<double>(j)) /
                     (static_cast<double>(i) - static_cast<double>(j));
            }
            acc += w * s[base + i];
        }
        return acc;
    }
    const double frac = pos - static_cast<double>(k);
    return s[k] + frac * (s[k + 1] - s[k]);
}

}  // namespace observerlab
