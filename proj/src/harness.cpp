#include "observerlab/harness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "observerlab/export.hpp"
#include "observerlab/noise_robust.hpp"
#include "observerlab/observers.hpp"

namespace observerlab {

namespace {

[[noreturn]] void stage_fail(const std::string& stage, const std::exception& e) {
    throw std::runtime_error("run_scenario stage '" + stage + "': " + e.what());
}

std::vector<double> window_max_abs(const Trajectory& e, std::size_t from) {
    std::vector<double> out(e.dim(), 0.0);
    for (std::size_t k = from; k < e.count(); ++k) {
        auto s = e.sample(k);
        for (std::size_t j = 0; j < e.dim(); ++j) out[j] = std::max(out[j], std::abs(s[j]));
    }
    return out;
}

std::vector<double> terminal_abs(const Trajectory& e) {
    auto s = e.sample(e.count() - 1);
    std::vector<double> out(s.begin(), s.end());
    for (double& v : out) v = std::abs(v);
    return out;
}

std::vector<double> window_mean_abs_err(const Trajectory& theta_hat,
                                        std::span<const double> theta_true, std::size_t from) {
    std::vector<double> out(theta_hat.dim(), 0.0);
    const std::size_t count = theta_hat.count() - from;
    for (std::size_t k = from; k < theta_hat.count(); ++k) {
        auto s = theta_hat.sample(k);
        for (std::size_t j = 0; j < theta_hat.dim(); ++j)
            out[j] += std::abs(s[j] - theta_true[j]);
    }
    for (double& v : out) v /= static_cast<double>(count);
    return out;
}

void fill_metrics(SchemeResult& r, const Trajectory& x, std::span<const double> theta_true,
                  std::size_t window_start) {
    r.error = x - r.xhat;
    r.eps = window_max_abs(r.error, window_start);
    r.terminal_error = terminal_abs(r.error);
    if (r.theta_hat) {
        r.theta_avg_err = window_mean_abs_err(*r.theta_hat, theta_true, window_start);
    }
}

}  // namespace

ExperimentResult run_scenario(const Scenario& s) {
    validate_scenario(s);
    const std::size_t n = s.A.rows();

    ExperimentResult out;
    out.grid = s.grid;
    out.config_hash = scenario_hash(s);
    out.seed = s.disturbance.kind == SignalSpec::Kind::kGaussianWhite ? s.disturbance.seed : 0;

    LtiPlant plant(s.A, s.B, s.C);

    PlantRun run;
    try {
        run = simulate_plant(plant, s.x0, s.input, s.disturbance, s.grid);
        if (!run.x.all_finite()) throw std::runtime_error("state trajectory is not finite");
    } catch (const std::exception& e) {
        stage_fail("plant simulation", e);
    }
    out.x = run.x;
    out.y = run.y;
    out.u = run.u;
    out.delta = run.delta;

    out.theta_true.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.theta_true[i] = s.x0[i] - s.xi0[i];
    const std::size_t w0 = out.window_start();

    // scheme 1: full-order observer
    try {
        LuenbergerObserver obs(plant, s.luenberger);
        SchemeResult& r = out.schemes[0];
        r.name = "luenberger";
        r.xhat = obs.observe(run.y, run.u, run.input_interp);
        fill_metrics(r, run.x, out.theta_true, w0);
    } catch (const std::exception& e) {
        stage_fail("luenberger", e);
    }

    // shared parametrization stage for schemes 2 and 3
    GpeboState gpebo;
    MixedRegression mixed;
    DremExtension ext;
    try {
        gpebo = gpebo_propagate(plant, run.u, s.xi0, run.input_interp);
        gpebo.theta_true_hint = out.theta_true;
        LinearRegression reg = build_regression(run, gpebo, s.C);
        std::vector<FilterSpec> filters;
        filters.reserve(s.drem_poles.size());
        for (double p : s.drem_poles) filters.emplace_back(p);
        ext = drem_extend(reg, filters);
        mixed = drem_mix(ext);
        attach_disturbance(mixed, ext, run.delta);
    } catch (const std::exception& e) {
        stage_fail("regressor extension", e);
    }
    out.assumption2 = mixed.assumption2;
    out.delta1 = *mixed.delta1;

    // scheme 2: gradient baseline on the mixed scalar regressions
    try {
        SchemeResult& r = out.schemes[1];
        r.name = "gradient";
        Trajectory theta(s.grid, n);
        for (std::size_t i = 0; i < n; ++i) {
            GradientEstimate est =
                gradient_estimate(mixed.m_bar[i], mixed.phi_bar, s.gradient_gamma, 0.0);
            for (std::size_t k = 0; k < s.grid.count(); ++k)
                theta.sample(k)[i] = est.theta_hat[k];
            if (i == 0) {
                out.excitation_gradient = est.excitation;
                out.gradient_substeps = est.substeps;
                out.gradient_capped = est.substeps_capped;
            }
        }
        r.theta_hat = std::move(theta);
        r.xhat = gpebo_reconstruct(gpebo, *r.theta_hat);
        fill_metrics(r, run.x, out.theta_true, w0);
    } catch (const std::exception& e) {
        stage_fail("gradient baseline", e);
    }

    // scheme 3: exponential reparametrization + cubic regression per channel
    try {
        SchemeResult& r = out.schemes[2];
        r.name = "cubic";
        if (s.cubic_gamma.size() != n) {
            throw std::invalid_argument("cubic gains must match parameter count");
        }
        std::vector<FilterSpec> cubic_filters;
        for (double p : s.cubic_poles) cubic_filters.emplace_back(p);

        Trajectory theta(s.grid, n);
        out.excitation_cubic.assign(n, 0.0);
        out.cubic_regressor_scale.assign(n, 0.0);
        out.cubic_substeps.assign(n, 1);
        out.cubic_capped.assign(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            SmoothedChannel ch = smooth_channel(mixed, i, s.smoothing_pole);
            ExpTransform tf = exp_transform(ch);
            CubicRegression cr = build_cubic_regression(ch, tf);
            ThetaEstimate est = estimate_theta_cubic(cr, cubic_filters, s.cubic_gamma[i]);
            for (std::size_t k = 0; k < s.grid.count(); ++k)
                theta.sample(k)[i] = est.theta_hat[k];
            out.excitation_cubic[i] = est.excitation;
            out.cubic_regressor_scale[i] = est.max_abs_phi;
            out.cubic_substeps[i] = est.substeps;
            out.cubic_capped[i] = est.substeps_capped;
        }
        r.theta_hat = std::move(theta);
        r.xhat = gpebo_reconstruct(gpebo, *r.theta_hat);
        fill_metrics(r, run.x, out.theta_true, w0);
    } catch (const std::exception& e) {
        stage_fail("cubic estimation", e);
    }

    return out;
}

std::vector<double> cubic_defect_rms(const Scenario& s, double delta_scale) {
    Scenario scaled = s;
    switch (scaled.disturbance.kind) {
        case SignalSpec::Kind::kSinusoid: scaled.disturbance.amplitude *= delta_scale; break;
        case SignalSpec::Kind::kConstant: scaled.disturbance.value *= delta_scale; break;
        case SignalSpec::Kind::kGaussianWhite: scaled.disturbance.stddev *= delta_scale; break;
        case SignalSpec::Kind::kCustomSamples:
            for (double& v : scaled.disturbance.samples) v *= delta_scale;
            break;
        case SignalSpec::Kind::kZero:
        case SignalSpec::Kind::kUnitStep:
            throw std::invalid_argument(
                "cubic_defect_rms: disturbance kind does not support amplitude scaling");
    }
    validate_scenario(scaled);
    const std::size_t n = scaled.A.rows();

    LtiPlant plant(scaled.A, scaled.B, scaled.C);
    PlantRun run = simulate_plant(plant, scaled.x0, scaled.input, scaled.disturbance, scaled.grid);
    GpeboState gpebo = gpebo_propagate(plant, run.u, scaled.xi0, run.input_interp);
    LinearRegression reg = build_regression(run, gpebo, scaled.C);
    std::vector<FilterSpec> filters;
    for (double p : scaled.drem_poles) filters.emplace_back(p);
    DremExtension ext = drem_extend(reg, filters);
    MixedRegression mixed = drem_mix(ext);

    std::vector<double> rms(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = scaled.x0[i] - scaled.xi0[i];
        SmoothedChannel ch = smooth_channel(mixed, i, scaled.smoothing_pole);
        ExpTransform tf = exp_transform(ch);
        CubicRegression cr = build_cubic_regression(ch, tf);
        double acc = 0.0;
        for (std::size_t k = 0; k < scaled.grid.count(); ++k) {
            const double defect =
                cr.zeta[k] - (cr.psi1[k] * th + cr.psi2[k] * th * th + cr.psi3[k] * th * th * th);
            acc += defect * defect;
        }
        rms[i] = std::sqrt(acc / static_cast<double>(scaled.grid.count()));
    }
    return rms;
}

std::vector<SweepRow> run_defect_sweep(const Scenario& s, const std::vector<double>& scales) {
    if (scales.empty()) {
        throw std::invalid_argument("run_defect_sweep: need at least one scale");
    }
    std::vector<SweepRow> rows;
    rows.reserve(scales.size());
    for (double sc : scales) {
        rows.push_back(SweepRow{sc, cubic_defect_rms(s, sc)});
    }
    return rows;
}

}  // namespace observerlab
