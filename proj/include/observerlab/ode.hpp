#pragma once

#include <functional>
#include <span>
#include <vector>

#include "observerlab/signal.hpp"

namespace observerlab {

/// Vector field: writes dx/dt for (t, x) into dxdt (same length as x).
using StateFn = std::function<void(double t, std::span<const double> x, std::span<double> dxdt)>;

/// One classical 4th-order Runge-Kutta step from (t, x) with step h > 0.
/// Throws std::runtime_error naming t if any stage derivative is non-finite.
std::vector<double> rk4_step(const StateFn& f, double t, std::span<const double> x, double h);

/// Fixed-step RK4 over the grid; sample 0 is x0, sample k+1 is the RK4 update
/// at sample k. Integration failures carry the failing sample index.
Trajectory integrate(const StateFn& f, const TimeGrid& grid, std::span<const double> x0);

/// How sampled inputs are evaluated between grid points inside RK4 stages.
/// kCubic reconstructs with a local 4-point Lagrange polynomial, matching the
/// integrator's order; measurement-injection paths need it to keep their
/// equilibria at roundoff level.
enum class Interp { kLinear, kHold, kCubic };

/// Evaluates a Signal at arbitrary stage times, clamped to the grid ends.
/// kHold keeps the left sample across the whole step.
class SampledInput {
public:
    explicit SampledInput(const Signal& s, Interp mode = Interp::kLinear);
    double operator()(double t) const;

private:
    const Signal* signal_;
    Interp mode_;
};

}  // namespace observerlab
