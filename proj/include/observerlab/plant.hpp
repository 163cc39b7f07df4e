#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "observerlab/matrix.hpp"
#include "observerlab/ode.hpp"
#include "observerlab/signal.hpp"

namespace observerlab {

/// Continuous LTI plant x' = A x + B u with scalar output y = C^T x + delta.
/// Observability of {A, C} is checked once at construction; simulation works
/// either way, estimation entry points refuse unobservable plants.
class LtiPlant {
public:
    LtiPlant(Matrix A, std::vector<double> B, std::vector<double> C);

    std::size_t dim() const { return n_; }
    const Matrix& A() const { return A_; }
    std::span<const double> B() const { return B_; }
    std::span<const double> C() const { return C_; }

    std::size_t observability_rank() const { return obs_rank_; }
    bool observable() const { return obs_rank_ == n_; }

private:
    Matrix A_;
    std::vector<double> B_;
    std::vector<double> C_;
    std::size_t n_ = 0;
    std::size_t obs_rank_ = 0;
};

/// Rank of [C, A^T C, ..., (A^T)^(n-1) C] with a relative pivot tolerance.
std::size_t observability_rank(const Matrix& A, std::span<const double> C,
                               double rel_tol = 1e-10);

/// Declarative test/input signal. White noise is reproducible from its seed
/// (hand-rolled Box-Muller over mt19937_64, so realizations do not depend on
/// the standard library's distribution internals).
struct SignalSpec {
    enum class Kind { kZero, kUnitStep, kConstant, kSinusoid, kGaussianWhite, kCustomSamples };

    Kind kind = Kind::kZero;
    double amplitude = 0.0;   // sinusoid
    double omega = 0.0;       // sinusoid, rad/s
    double phase = 0.0;       // sinusoid
    double value = 0.0;       // constant
    double stddev = 0.0;      // gaussian white
    std::uint64_t seed = 0;   // gaussian white
    std::vector<double> samples;  // custom

    static SignalSpec zero();
    static SignalSpec unit_step();
    static SignalSpec constant(double value);
    static SignalSpec sinusoid(double amplitude, double omega, double phase = 0.0);
    static SignalSpec gaussian_white(double stddev, std::uint64_t seed);
    static SignalSpec custom(std::vector<double> samples);

    /// White noise is held constant across each RK4 step; everything else is
    /// interpolated linearly.
    Interp interp() const {
        return kind == Kind::kGaussianWhite ? Interp::kHold : Interp::kLinear;
    }
};

Signal eval_signal(const SignalSpec& spec, const TimeGrid& grid);

/// One simulated experiment: true state, noisy output, and the realized
/// input/disturbance. y[k] = C^T x[k] + delta[k] by construction.
struct PlantRun {
    Trajectory x;
    Signal y;
    Signal u;
    Signal delta;
    std::size_t observability_rank = 0;
    bool observable = false;
    Interp input_interp = Interp::kLinear;
};

PlantRun simulate_plant(const LtiPlant& plant, std::span<const double> x0,
                        const SignalSpec& input, const SignalSpec& disturbance,
                        const TimeGrid& grid);

}  // namespace observerlab
