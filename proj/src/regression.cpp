#include "observerlab/regression.hpp"

#include <cmath>
#include <stdexcept>

#include "observerlab/kernels.hpp"

namespace observerlab {

LinearRegression build_regression(const PlantRun& run, const GpeboState& gpebo,
                                  std::span<const double> C) {
    if (!(run.y.grid() == gpebo.xi.grid())) {
        throw std::invalid_argument("build_regression: run and observer grids differ");
    }
    const std::size_t n = gpebo.xi.dim();
    if (C.size() != n) {
        throw std::invalid_argument("build_regression: C length must equal state dim");
    }
    const TimeGrid& grid = run.y.grid();
    std::vector<double> zv(grid.count());
    Trajectory phi_row(grid, n);
    for (std::size_t k = 0; k < grid.count(); ++k) {
        zv[k] = run.y[k] - dot(C, gpebo.xi.sample(k));
        auto row = phi_row.sample(k);
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += C[i] * gpebo.phi.entry(k, i, j);
            row[j] = acc;
        }
    }
    return LinearRegression{Signal(grid, std::move(zv)), std::move(phi_row), std::nullopt};
}

FilterSpec::FilterSpec(double pole) : pole_(pole) {
    if (!(pole > 0.0)) {
        throw std::invalid_argument("FilterSpec: pole must be > 0 for a stable lag");
    }
}

FilteredSignal apply_filter(const FilterSpec& f, const Signal& s, double initial_state) {
    const double a = f.pole();
    const TimeGrid& grid = s.grid();
    const double h = grid.step();
    std::vector<double> w(grid.count());
    double x = initial_state;
    w[0] = x;
    for (std::size_t k = 0; k + 1 < grid.count(); ++k) {
        const double s0 = s[k];
        const double s1 = s[k + 1];
        const double sm = 0.5 * (s0 + s1);
        const double k1 = a * (s0 - x);
        const double k2 = a * (sm - (x + 0.5 * h * k1));
        const double k3 = a * (sm - (x + 0.5 * h * k2));
        const double k4 = a * (s1 - (x + h * k3));
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        w[k + 1] = x;
    }
    Signal value(grid, std::move(w));
    std::vector<double> d(grid.count());
    for (std::size_t k = 0; k < grid.count(); ++k) d[k] = a * (s[k] - value[k]);
    return FilteredSignal{std::move(value), Signal(grid, std::move(d))};
}

DremExtension drem_extend(const LinearRegression& reg, const std::vector<FilterSpec>& filters) {
    const std::size_t n = reg.phi_row.dim();
    if (filters.size() + 1 != n) {
        throw std::invalid_argument("drem_extend: need exactly dim-1 filters (" +
                                    std::to_string(n - 1) + " for this regression)");
    }
    const TimeGrid& grid = reg.z.grid();
    Trajectory z_bar(grid, n);
    MatrixSeries phi_bar(grid, n, n);

    for (std::size_t k = 0; k < grid.count(); ++k) {
        z_bar.sample(k)[0] = reg.z[k];
        auto row = reg.phi_row.sample(k);
        for (std::size_t j = 0; j < n; ++j) phi_bar.entry(k, 0, j) = row[j];
    }
    for (std::size_t fi = 0; fi < filters.size(); ++fi) {
        const FilteredSignal zf = apply_filter(filters[fi], reg.z);
        for (std::size_t k = 0; k < grid.count(); ++k) z_bar.sample(k)[fi + 1] = zf.value[k];
        for (std::size_t j = 0; j < n; ++j) {
            const FilteredSignal pf = apply_filter(filters[fi], reg.phi_row.component(j));
            for (std::size_t k = 0; k < grid.count(); ++k)
                phi_bar.entry(k, fi + 1, j) = pf.value[k];
        }
    }
    return DremExtension{std::move(z_bar), std::move(phi_bar), filters};
}

MixedRegression drem_mix(const DremExtension& ext) {
    const std::size_t n = ext.z_bar.dim();
    if (ext.phi_bar.rows() != n || ext.phi_bar.cols() != n) {
        throw std::invalid_argument("drem_mix: extension dimensions inconsistent");
    }
    const TimeGrid& grid = ext.z_bar.grid();
    const std::size_t count = grid.count();

    std::vector<double> m_flat(count * n);
    std::vector<double> det(count);
    kernels::mix(n, count, ext.phi_bar.flat().data(), ext.z_bar.flat().data(),
                 m_flat.data(), det.data());

    MixedRegression mixed;
    mixed.phi_bar = Signal(grid, std::move(det));
    mixed.m_bar.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> ch(count);
        for (std::size_t k = 0; k < count; ++k) ch[k] = m_flat[k * n + i];
        mixed.m_bar.emplace_back(grid, std::move(ch));
    }
    return mixed;
}

void attach_disturbance(MixedRegression& mixed, const DremExtension& ext, const Signal& delta) {
    const std::size_t n = ext.z_bar.dim();
    const TimeGrid& grid = ext.z_bar.grid();
    if (!(delta.grid() == grid)) {
        throw std::invalid_argument("attach_disturbance: delta grid differs");
    }
    const std::size_t count = grid.count();

    Trajectory delta_bar(grid, n);
    for (std::size_t k = 0; k < count; ++k) delta_bar.sample(k)[0] = delta[k];
    for (std::size_t fi = 0; fi < ext.filters.size(); ++fi) {
        const FilteredSignal df = apply_filter(ext.filters[fi], delta);
        for (std::size_t k = 0; k < count; ++k) delta_bar.sample(k)[fi + 1] = df.value[k];
    }

    std::vector<double> d1_flat(count * n);
    std::vector<double> det_unused(count);
    kernels::mix(n, count, ext.phi_bar.flat().data(), delta_bar.flat().data(),
                 d1_flat.data(), det_unused.data());

    std::vector<Signal> delta1;
    std::vector<Assumption2Channel> assumption2(n);
    delta1.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> ch(count);
        double peak = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            ch[k] = d1_flat[k * n + i];
            peak = std::max(peak, std::abs(ch[k]));
        }
        delta1.emplace_back(grid, std::move(ch));
        assumption2[i] = Assumption2Channel{peak, peak < 1.0};
    }
    mixed.delta1 = std::move(delta1);
    mixed.assumption2 = std::move(assumption2);
}

int gradient_substeps(double gamma, double max_abs_phi, double step, int cap, bool& capped) {
    capped = false;
    const double raw = std::ceil(gamma * max_abs_phi * max_abs_phi * step / 0.1);
    if (!(raw > 1.0)) return 1;
    if (raw > static_cast<double>(cap)) {
        capped = true;
        return cap;
    }
    return static_cast<int>(raw);
}

GradientEstimate gradient_estimate(const Signal& m, const Signal& phi, double gamma,
                                   double theta0, int substep_cap) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gradient_estimate: gamma must be > 0");
    if (!(m.grid() == phi.grid())) {
        throw std::invalid_argument("gradient_estimate: m and phi grids differ");
    }
    const TimeGrid& grid = m.grid();

    GradientEstimate est;
    est.max_abs_phi = phi.max_abs();
    est.substeps = gradient_substeps(gamma, est.max_abs_phi, grid.step(), substep_cap,
                                     est.substeps_capped);
    double excitation = 0.0;
    for (std::size_t k = 0; k < grid.count(); ++k) excitation += phi[k] * phi[k] * grid.step();
    est.excitation = excitation;

    std::vector<double> out(grid.count());
    kernels::GradientFlow flow{m.values().data(), phi.values().data(), gamma, theta0, out.data()};
    kernels::gradient_flow_run(flow, grid.count(), grid.step(), est.substeps);
    est.theta_hat = Signal(grid, std::move(out));
    return est;
}

}  // namespace observerlab
