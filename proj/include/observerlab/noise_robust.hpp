#pragma once

#include <optional>
#include <vector>

#include "observerlab/kernels.hpp"
#include "observerlab/regression.hpp"
#include "observerlab/signal.hpp"

namespace observerlab {

/// One mixed channel after the unity-DC smoothing lag k/(p+k): filtered
/// measurement and regressor with their exact filter-state derivatives,
/// m_dot[j] = k * (m_bar[j] - m[j]) pointwise.
struct SmoothedChannel {
    Signal m;
    Signal m_dot;
    Signal phi_f;
    Signal phi_f_dot;
    std::optional<Signal> delta1_f;  // filtered mixed disturbance, simulation side
    double pole = 0.0;
};

SmoothedChannel smooth_channel(const MixedRegression& mixed, std::size_t channel, double pole);

struct ExpTransform {
    Signal g;      // exp(m)
    Signal g_dot;  // m_dot * exp(m)
};

/// Exponential reparametrization g = e^m turning the additive channel noise
/// into a multiplicative factor. Guards |m| <= 300 against overflow.
ExpTransform exp_transform(const SmoothedChannel& ch);

/// Linear-in-Theta relation zeta = psi1*theta + psi2*theta^2 + psi3*theta^3.
/// Exact when the channel disturbance is zero; defect is cubic in the
/// disturbance otherwise.
struct CubicRegression {
    Signal zeta;
    Signal psi1;
    Signal psi2;
    Signal psi3;
    Signal g;
    Signal g_dot;
};

CubicRegression build_cubic_regression(const SmoothedChannel& ch, const ExpTransform& exp_tf,
                                       kernels::Psi1Form form = kernels::Psi1Form::kRederived);

/// Estimates of (theta, theta^2, theta^3) for one channel plus the released
/// scalar estimate (first component, the only one linear in theta) and the
/// |Theta2 - Theta1^2| self-check.
struct ThetaEstimate {
    Trajectory Theta_hat;  // dim 3
    Signal theta_hat;
    Signal consistency;
    double excitation = 0.0;
    double max_abs_phi = 0.0;  // scale of the mixed cubic regressor
    int substeps = 1;
    bool substeps_capped = false;
};

/// Extends (zeta, Psi) with exactly two lags into a 3x3 system, mixes it by
/// adjugate/determinant, and runs one scalar gradient flow per Theta
/// component (flows are independent and run as a parallel bank).
ThetaEstimate estimate_theta_cubic(const CubicRegression& cr,
                                   const std::vector<FilterSpec>& drem_filters, double gamma,
                                   int substep_cap = kDefaultSubstepCap);

}  // namespace observerlab
