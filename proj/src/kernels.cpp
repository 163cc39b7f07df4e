#include "observerlab/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace observerlab::kernels {

namespace {

std::atomic<bool> g_parallel{true};

constexpr std::size_t kMaxDim = 6;

// Cofactor determinant on a raw row-major buffer, small n only.
double det_small(std::size_t n, const double* a) {
    if (n == 1) return a[0];
    if (n == 2) return a[0] * a[3] - a[1] * a[2];
    if (n == 3) {
        return a[0] * (a[4] * a[8] - a[5] * a[7])
             - a[1] * (a[3] * a[8] - a[5] * a[6])
             + a[2] * (a[3] * a[7] - a[4] * a[6]);
    }
    double minor[kMaxDim * kMaxDim];
    double acc = 0.0;
    double sign = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t w = 0;
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) minor[w++] = a[r * n + c];
        acc += sign * a[j] * det_small(n - 1, minor);
        sign = -sign;
    }
    return acc;
}

// m_out = adj(a) * z, det_out = det(a), one sample.
void mix_one(std::size_t n, const double* a, const double* z, double* m_out, double* det_out) {
    switch (n) {
        case 1:
            *det_out = a[0];
            m_out[0] = z[0];  // adj of 1x1 is the identity
            return;
        case 2: {
            *det_out = a[0] * a[3] - a[1] * a[2];
            m_out[0] = a[3] * z[0] - a[1] * z[1];
            m_out[1] = -a[2] * z[0] + a[0] * z[1];
            return;
        }
        case 3: {
            const double c00 = a[4] * a[8] - a[5] * a[7];
            const double c01 = -(a[3] * a[8] - a[5] * a[6]);
            const double c02 = a[3] * a[7] - a[4] * a[6];
            const double c10 = -(a[1] * a[8] - a[2] * a[7]);
            const double c11 = a[0] * a[8] - a[2] * a[6];
            const double c12 = -(a[0] * a[7] - a[1] * a[6]);
            const double c20 = a[1] * a[5] - a[2] * a[4];
            const double c21 = -(a[0] * a[5] - a[2] * a[3]);
            const double c22 = a[0] * a[4] - a[1] * a[3];
            *det_out = a[0] * c00 + a[1] * c01 + a[2] * c02;
            m_out[0] = c00 * z[0] + c10 * z[1] + c20 * z[2];
            m_out[1] = c01 * z[0] + c11 * z[1] + c21 * z[2];
            m_out[2] = c02 * z[0] + c12 * z[1] + c22 * z[2];
            return;
        }
        default: {
            *det_out = det_small(n, a);
            double minor[kMaxDim * kMaxDim];
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    std::size_t w = 0;
                    for (std::size_t r = 0; r < n; ++r) {
                        if (r == i) continue;
                        for (std::size_t c = 0; c < n; ++c)
                            if (c != j) minor[w++] = a[r * n + c];
                    }
                    const double cof = (((i + j) % 2) ? -1.0 : 1.0) * det_small(n - 1, minor);
                    acc += cof * z[i];
                }
                m_out[j] = acc;
            }
            return;
        }
    }
}

void check_mix_dims(std::size_t n) {
    if (n == 0 || n > kMaxDim) {
        throw std::invalid_argument("mix: supported matrix sizes are 1.." +
                                    std::to_string(kMaxDim));
    }
}

}  // namespace

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool enabled) { g_parallel.store(enabled, std::memory_order_relaxed); }

void mix_serial(std::size_t n, std::size_t count, const double* phi, const double* z,
                double* m_out, double* det_out) {
    check_mix_dims(n);
    for (std::size_t k = 0; k < count; ++k) {
        mix_one(n, phi + k * n * n, z + k * n, m_out + k * n, det_out + k);
    }
}

void mix_parallel(std::size_t n, std::size_t count, const double* phi, const double* z,
                  double* m_out, double* det_out) {
    check_mix_dims(n);
    const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
        mix_one(n, phi + k * n * n, z + k * n, m_out + k * n, det_out + k);
    }
}

void mix(std::size_t n, std::size_t count, const double* phi, const double* z,
         double* m_out, double* det_out) {
    if (parallel_enabled()) {
        mix_parallel(n, count, phi, z, m_out, det_out);
    } else {
        mix_serial(n, count, phi, z, m_out, det_out);
    }
}

void exp_serial(std::size_t count, const double* m, const double* m_dot,
                double* g, double* g_dot) {
    for (std::size_t k = 0; k < count; ++k) {
        const double e = std::exp(m[k]);
        g[k] = e;
        g_dot[k] = m_dot[k] * e;
    }
}

void exp_parallel(std::size_t count, const double* m, const double* m_dot,
                  double* g, double* g_dot) {
    const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
        const double e = std::exp(m[k]);
        g[k] = e;
        g_dot[k] = m_dot[k] * e;
    }
}

void exp_map(std::size_t count, const double* m, const double* m_dot,
             double* g, double* g_dot) {
    if (parallel_enabled()) {
        exp_parallel(count, m, m_dot, g, g_dot);
    } else {
        exp_serial(count, m, m_dot, g, g_dot);
    }
}

namespace {

inline void cubic_one(double m, double md, double p, double pd, double g, double gd,
                      Psi1Form form, double* zeta, double* psi1, double* psi2, double* psi3) {
    *zeta = gd + m * gd + 0.5 * m * m * gd - g * m * md - g * md;
    if (form == Psi1Form::kRederived) {
        *psi1 = p * gd + p * m * gd + 0.5 * m * m * pd * g - p * g * md;
    } else {
        *psi1 = p * gd + p * m * gd + g * pd - p * g * md + 0.5 * m * m * pd * g - p * g;
    }
    *psi2 = -0.5 * p * p * gd - m * p * pd * g;
    *psi3 = 0.5 * p * p * pd * g;
}

}  // namespace

void cubic_assemble_serial(std::size_t count, const double* m, const double* m_dot,
                           const double* phi, const double* phi_dot,
                           const double* g, const double* g_dot, Psi1Form form,
                           double* zeta, double* psi1, double* psi2, double* psi3) {
    for (std::size_t k = 0; k < count; ++k) {
        cubic_one(m[k], m_dot[k], phi[k], phi_dot[k], g[k], g_dot[k], form,
                  zeta + k, psi1 + k, psi2 + k, psi3 + k);
    }
}

void cubic_assemble_parallel(std::size_t count, const double* m, const double* m_dot,
                             const double* phi, const double* phi_dot,
                             const double* g, const double* g_dot, Psi1Form form,
                             double* zeta, double* psi1, double* psi2, double* psi3) {
    const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
        cubic_one(m[k], m_dot[k], phi[k], phi_dot[k], g[k], g_dot[k], form,
                  zeta + k, psi1 + k, psi2 + k, psi3 + k);
    }
}

void cubic_assemble(std::size_t count, const double* m, const double* m_dot,
                    const double* phi, const double* phi_dot,
                    const double* g, const double* g_dot, Psi1Form form,
                    double* zeta, double* psi1, double* psi2, double* psi3) {
    if (parallel_enabled()) {
        cubic_assemble_parallel(count, m, m_dot, phi, phi_dot, g, g_dot, form,
                                zeta, psi1, psi2, psi3);
    } else {
        cubic_assemble_serial(count, m, m_dot, phi, phi_dot, g, g_dot, form,
                              zeta, psi1, psi2, psi3);
    }
}

void gradient_flow_run(const GradientFlow& flow, std::size_t count, double step, int substeps) {
    if (count == 0) return;
    double x = flow.theta0;
    flow.theta_out[0] = x;
    const double hs = step / substeps;
    const double inv = 1.0 / substeps;
    for (std::size_t k = 0; k + 1 < count; ++k) {
        const double p0 = flow.phi[k];
        const double dp = flow.phi[k + 1] - p0;
        const double m0 = flow.m[k];
        const double dm = flow.m[k + 1] - m0;
        for (int j = 0; j < substeps; ++j) {
            const double a0 = j * inv;
            const double am = (j + 0.5) * inv;
            const double a1 = (j + 1.0) * inv;
            const double pa = p0 + dp * a0, ma = m0 + dm * a0;
            const double pm = p0 + dp * am, mm = m0 + dm * am;
            const double pb = p0 + dp * a1, mb = m0 + dm * a1;
            const double k1 = -flow.gamma * pa * (pa * x - ma);
            const double k2 = -flow.gamma * pm * (pm * (x + 0.5 * hs * k1) - mm);
            const double k3 = -flow.gamma * pm * (pm * (x + 0.5 * hs * k2) - mm);
            const double k4 = -flow.gamma * pb * (pb * (x + hs * k3) - mb);
            x += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!std::isfinite(x)) {
            throw std::runtime_error("gradient flow diverged at sample " + std::to_string(k + 1));
        }
        flow.theta_out[k + 1] = x;
    }
}

void gradient_flow_bank_serial(std::span<const GradientFlow> flows, std::size_t count,
                               double step, int substeps) {
    for (const auto& flow : flows) gradient_flow_run(flow, count, step, substeps);
}

void gradient_flow_bank_parallel(std::span<const GradientFlow> flows, std::size_t count,
                                 double step, int substeps) {
    const auto total = static_cast<std::ptrdiff_t>(flows.size());
    std::exception_ptr err;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < total; ++i) {
        try {
            gradient_flow_run(flows[i], count, step, substeps);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

void gradient_flow_bank(std::span<const GradientFlow> flows, std::size_t count,
                        double step, int substeps) {
    if (parallel_enabled()) {
        gradient_flow_bank_parallel(flows, count, step, substeps);
    } else {
        gradient_flow_bank_serial(flows, count, step, substeps);
    }
}

}  // namespace observerlab::kernels
