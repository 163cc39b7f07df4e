#include "observerlab/noise_robust.hpp"

#include <cmath>
#include <stdexcept>

namespace observerlab {

SmoothedChannel smooth_channel(const MixedRegression& mixed, std::size_t channel, double pole) {
    if (channel >= mixed.m_bar.size()) {
        throw std::invalid_argument("smooth_channel: channel index out of range");
    }
    const FilterSpec lag(pole);  // rejects pole <= 0
    FilteredSignal m = apply_filter(lag, mixed.m_bar[channel]);
    FilteredSignal phi = apply_filter(lag, mixed.phi_bar);

    SmoothedChannel ch;
    ch.m = std::move(m.value);
    ch.m_dot = std::move(m.derivative);
    ch.phi_f = std::move(phi.value);
    ch.phi_f_dot = std::move(phi.derivative);
    ch.pole = pole;
    if (mixed.delta1) {
        FilteredSignal d = apply_filter(lag, (*mixed.delta1)[channel]);
        ch.delta1_f = std::move(d.value);
    }
    return ch;
}

ExpTransform exp_transform(const SmoothedChannel& ch) {
    const double peak = ch.m.max_abs();
    if (!(peak <= 300.0)) {
        throw std::runtime_error("exp_transform: |m| exceeds overflow guard, max|m|=" +
                                 std::to_string(peak));
    }
    const TimeGrid& grid = ch.m.grid();
    std::vector<double> g(grid.count()), g_dot(grid.count());
    kernels::exp_map(grid.count(), ch.m.values().data(), ch.m_dot.values().data(),
                     g.data(), g_dot.data());
    return ExpTransform{Signal(grid, std::move(g)), Signal(grid, std::move(g_dot))};
}

CubicRegression build_cubic_regression(const SmoothedChannel& ch, const ExpTransform& exp_tf,
                                       kernels::Psi1Form form) {
    const TimeGrid& grid = ch.m.grid();
    if (!(exp_tf.g.grid() == grid)) {
        throw std::invalid_argument("build_cubic_regression: transform grid differs");
    }
    const std::size_t count = grid.count();
    std::vector<double> zeta(count), psi1(count), psi2(count), psi3(count);
    kernels::cubic_assemble(count, ch.m.values().data(), ch.m_dot.values().data(),
                            ch.phi_f.values().data(), ch.phi_f_dot.values().data(),
                            exp_tf.g.values().data(), exp_tf.g_dot.values().data(), form,
                            zeta.data(), psi1.data(), psi2.data(), psi3.data());
    return CubicRegression{Signal(grid, std::move(zeta)), Signal(grid, std::move(psi1)),
                           Signal(grid, std::move(psi2)), Signal(grid, std::move(psi3)),
                           exp_tf.g, exp_tf.g_dot};
}

ThetaEstimate estimate_theta_cubic(const CubicRegression& cr,
                                   const std::vector<FilterSpec>& drem_filters, double gamma,
                                   int substep_cap) {
    if (drem_filters.size() != 2) {
        throw std::invalid_argument("estimate_theta_cubic: exactly 2 extension filters required");
    }
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("estimate_theta_cubic: gamma must be > 0");
    }
    const TimeGrid& grid = cr.zeta.grid();
    const std::size_t count = grid.count();

    // Reuse the regression machinery: the three powers of theta play the role
    // of unknowns in a 3-dimensional row regression.
    Trajectory psi_rows(grid, 3);
    for (std::size_t k = 0; k < count; ++k) {
        auto row = psi_rows.sample(k);
        row[0] = cr.psi1[k];
        row[1] = cr.psi2[k];
        row[2] = cr.psi3[k];
    }
    LinearRegression reg{cr.zeta, std::move(psi_rows), std::nullopt};
    const DremExtension ext = drem_extend(reg, drem_filters);
    const MixedRegression mixed = drem_mix(ext);

    ThetaEstimate est;
    est.max_abs_phi = mixed.phi_bar.max_abs();
    est.substeps = gradient_substeps(gamma, est.max_abs_phi, grid.step(), substep_cap,
                                     est.substeps_capped);
    double excitation = 0.0;
    for (std::size_t k = 0; k < count; ++k)
        excitation += mixed.phi_bar[k] * mixed.phi_bar[k] * grid.step();
    est.excitation = excitation;

    Trajectory Theta(grid, 3);
    std::vector<std::vector<double>> outs(3, std::vector<double>(count));
    std::vector<kernels::GradientFlow> flows(3);
    for (std::size_t j = 0; j < 3; ++j) {
        flows[j] = kernels::GradientFlow{mixed.m_bar[j].values().data(),
                                         mixed.phi_bar.values().data(), gamma, 0.0,
                                         outs[j].data()};
    }
    kernels::gradient_flow_bank(flows, count, grid.step(), est.substeps);
    for (std::size_t k = 0; k < count; ++k) {
        auto s = Theta.sample(k);
        for (std::size_t j = 0; j < 3; ++j) s[j] = outs[j][k];
    }

    std::vector<double> released(count), cons(count);
    for (std::size_t k = 0; k < count; ++k) {
        released[k] = Theta.value(k, 0);
        cons[k] = std::abs(Theta.value(k, 1) - Theta.value(k, 0) * Theta.value(k, 0));
    }
    est.Theta_hat = std::move(Theta);
    est.theta_hat = Signal(grid, std::move(released));
    est.consistency = Signal(grid, std::move(cons));
    return est;
}

}  // namespace observerlab
