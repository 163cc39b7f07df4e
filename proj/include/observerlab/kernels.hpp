#pragma once

#include <cstddef>
#include <span>

namespace observerlab::kernels {

/// Runtime switch between the OpenMP kernels and the serial references.
/// The serial variants stay available unconditionally for testing and
/// benchmarking; outputs are bit-identical by construction (pointwise maps,
/// no reductions).
bool parallel_enabled();
void set_parallel(bool enabled);

/// Regressor mixing: per sample, m = adj(Phi) * z and det = det(Phi).
/// phi: count * n * n (row-major per sample), z: count * n,
/// m_out: count * n, det_out: count. Supported n: 1..6.
void mix_serial(std::size_t n, std::size_t count, const double* phi, const double* z,
                double* m_out, double* det_out);
void mix_parallel(std::size_t n, std::size_t count, const double* phi, const double* z,
                  double* m_out, double* det_out);
void mix(std::size_t n, std::size_t count, const double* phi, const double* z,
         double* m_out, double* det_out);

/// g = exp(m), g_dot = m_dot * g, elementwise. Range checks live at the call
/// site (exp_transform) so the kernel stays branch-free.
void exp_serial(std::size_t count, const double* m, const double* m_dot,
                double* g, double* g_dot);
void exp_parallel(std::size_t count, const double* m, const double* m_dot,
                  double* g, double* g_dot);
void exp_map(std::size_t count, const double* m, const double* m_dot,
             double* g, double* g_dot);

/// Which regressor-row expression the cubic assembly uses. kRederived is the
/// form that satisfies the exact disturbance-free identity; kPublished keeps
/// the six-term variant around for comparison only.
enum class Psi1Form { kRederived, kPublished };

/// Pointwise assembly of the cubic regression
///   zeta = g_dot + m*g_dot + 0.5*m^2*g_dot - g*m*m_dot - g*m_dot
///   psi1 = phi*g_dot + phi*m*g_dot + 0.5*m^2*phi_dot*g - phi*g*m_dot
///   psi2 = -0.5*phi^2*g_dot - m*phi*phi_dot*g
///   psi3 = 0.5*phi^2*phi_dot*g
void cubic_assemble_serial(std::size_t count, const double* m, const double* m_dot,
                           const double* phi, const double* phi_dot,
                           const double* g, const double* g_dot, Psi1Form form,
                           double* zeta, double* psi1, double* psi2, double* psi3);
void cubic_assemble_parallel(std::size_t count, const double* m, const double* m_dot,
                             const double* phi, const double* phi_dot,
                             const double* g, const double* g_dot, Psi1Form form,
                             double* zeta, double* psi1, double* psi2, double* psi3);
void cubic_assemble(std::size_t count, const double* m, const double* m_dot,
                    const double* phi, const double* phi_dot,
                    const double* g, const double* g_dot, Psi1Form form,
                    double* zeta, double* psi1, double* psi2, double* psi3);

/// One scalar gradient flow theta' = -gamma * phi * (phi*theta - m) driven by
/// sampled (m, phi), RK4 with `substeps` equal subdivisions per grid step and
/// linear interpolation of the drivers inside the step.
struct GradientFlow {
    const double* m = nullptr;
    const double* phi = nullptr;
    double gamma = 0.0;
    double theta0 = 0.0;
    double* theta_out = nullptr;
};

/// Integrates a single flow over `count` samples spaced `step` apart.
/// Throws std::runtime_error naming the sample if the state goes non-finite.
void gradient_flow_run(const GradientFlow& flow, std::size_t count, double step, int substeps);

/// Independent flows; the parallel variant distributes whole flows across
/// threads (each flow is sequential in time).
void gradient_flow_bank_serial(std::span<const GradientFlow> flows, std::size_t count,
                               double step, int substeps);
void gradient_flow_bank_parallel(std::span<const GradientFlow> flows, std::size_t count,
                                 double step, int substeps);
void gradient_flow_bank(std::span<const GradientFlow> flows, std::size_t count,
                        double step, int substeps);

}  // namespace observerlab::kernels
