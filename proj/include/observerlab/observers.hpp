#pragma once

#include <optional>
#include <span>
#include <vector>

#include "observerlab/plant.hpp"
#include "observerlab/signal.hpp"

namespace observerlab {

struct LuenbergerConfig {
    std::vector<double> L;      // output-injection gain
    std::vector<double> xhat0;  // initial estimate
};

/// Full-order observer xhat' = A xhat + B u + L (y - C^T xhat). The closed
/// loop A - L C^T is characterized at construction: a non-Hurwitz loop is a
/// reported condition, not an error.
class LuenbergerObserver {
public:
    LuenbergerObserver(const LtiPlant& plant, LuenbergerConfig cfg);

    const std::vector<double>& closed_loop_eigen_real_parts() const { return eig_real_; }
    bool hurwitz() const { return hurwitz_; }

    Trajectory observe(const Signal& y, const Signal& u,
                       Interp input_interp = Interp::kLinear) const;

private:
    const LtiPlant* plant_;
    LuenbergerConfig cfg_;
    std::vector<double> eig_real_;
    bool hurwitz_ = false;
};

Trajectory luenberger_observe(const LtiPlant& plant, const LuenbergerConfig& cfg,
                              const Signal& y, const Signal& u,
                              Interp input_interp = Interp::kLinear);

/// Open-loop copy state xi and fundamental matrix Phi of the plant. The true
/// state satisfies x = xi + Phi * theta with constant theta = x(0) - xi(0),
/// so state estimation reduces to identifying theta. Phi(0) = I and each
/// column solves phi' = A phi; none of this ever touches the measurement.
struct GpeboState {
    Trajectory xi;
    MatrixSeries phi;
    /// Simulation-side ground truth for validation; estimators never read it.
    std::optional<std::vector<double>> theta_true_hint;
};

GpeboState gpebo_propagate(const LtiPlant& plant, const Signal& u,
                           std::span<const double> xi0,
                           Interp input_interp = Interp::kLinear);

/// Pointwise xhat[k] = xi[k] + Phi[k] * theta_hat[k].
Trajectory gpebo_reconstruct(const GpeboState& gpebo, const Trajectory& theta_hat);

}  // namespace observerlab
