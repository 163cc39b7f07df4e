#pragma once

#include <optional>
#include <span>
#include <vector>

#include "observerlab/observers.hpp"
#include "observerlab/plant.hpp"
#include "observerlab/signal.hpp"

namespace observerlab {

/// Scalar-measurement regression z = phi * theta + delta with a row regressor
/// per sample (z = y - C^T xi, phi = C^T Phi).
struct LinearRegression {
    Signal z;
    Trajectory phi_row;
    std::optional<double> delta_bound;
};

LinearRegression build_regression(const PlantRun& run, const GpeboState& gpebo,
                                  std::span<const double> C);

/// First-order lag a/(p+a), unity DC gain, pole a > 0.
class FilterSpec {
public:
    explicit FilterSpec(double pole);
    double pole() const { return pole_; }

private:
    double pole_;
};

struct FilteredSignal {
    Signal value;
    /// Exact filter-state derivative a*(s - w); no numerical differentiation.
    Signal derivative;
};

/// Integrates w' = a (s - w) on the signal's grid (RK4, linear interpolation
/// of s inside the step).
FilteredSignal apply_filter(const FilterSpec& f, const Signal& s, double initial_state = 0.0);

/// Row-stacked extension: row 0 is the raw regressor, row i is the regressor
/// passed through filters[i-1] componentwise (zero initial filter states).
struct DremExtension {
    Trajectory z_bar;       // dim n
    MatrixSeries phi_bar;   // n x n per sample
    std::vector<FilterSpec> filters;
};

DremExtension drem_extend(const LinearRegression& reg, const std::vector<FilterSpec>& filters);

struct Assumption2Channel {
    double max_abs_delta1 = 0.0;
    bool ok = false;  // max |delta1_i| < 1
};

/// Per-parameter scalar regressions m_bar_i = phi_bar * theta_i + delta1_i
/// with the shared regressor phi_bar = det(Phi_bar), m_bar = adj(Phi_bar) z_bar.
/// Samples with phi_bar = 0 are kept; the gradient flow is a no-op there.
struct MixedRegression {
    std::vector<Signal> m_bar;
    Signal phi_bar;
    /// adj(Phi_bar) * delta_bar, computable only when the disturbance
    /// realization is known (simulation side).
    std::optional<std::vector<Signal>> delta1;
    std::vector<Assumption2Channel> assumption2;
};

MixedRegression drem_mix(const DremExtension& ext);

/// Simulation-side diagnostics: propagates the known disturbance through the
/// same extension filters, mixes it, and fills delta1 / assumption2.
void attach_disturbance(MixedRegression& mixed, const DremExtension& ext, const Signal& delta);

inline constexpr int kDefaultSubstepCap = 10000;

/// Substep count ceil(gamma * max|phi|^2 * step / 0.1) clamped to [1, cap];
/// `capped` reports whether the cap bound.
int gradient_substeps(double gamma, double max_abs_phi, double step, int cap, bool& capped);

struct GradientEstimate {
    Signal theta_hat;
    double excitation = 0.0;  // sum phi^2 * step
    double max_abs_phi = 0.0;
    int substeps = 1;
    bool substeps_capped = false;
};

/// Gradient flow theta' = -gamma * phi * (phi*theta - m). Explicit RK4 with
/// per-step subdivision keeping gamma * max|phi|^2 * h_sub <= 0.1.
GradientEstimate gradient_estimate(const Signal& m, const Signal& phi, double gamma,
                                   double theta0, int substep_cap = kDefaultSubstepCap);

}  // namespace observerlab
