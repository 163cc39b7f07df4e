#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "observerlab/noise_robust.hpp"

using namespace observerlab;

namespace {

LtiPlant paper_plant() {
    return LtiPlant(Matrix::from_rows({{0.0, 1.0}, {-9.0, 0.0}}), {0.0, 1.0}, {5.0, 0.0});
}

struct Channels {
    MixedRegression mixed;
    Signal delta;
};

Channels paper_channels(const SignalSpec& delta, std::size_t count = 20001) {
    LtiPlant p = paper_plant();
    PlantRun run = simulate_plant(p, std::vector<double>{1.0, 2.0}, SignalSpec::unit_step(),
                                  delta, TimeGrid(0.0, 1e-3, count));
    GpeboState gp = gpebo_propagate(p, run.u, std::vector<double>{0.0, 0.0});
    LinearRegression reg = build_regression(run, gp, p.C());
    DremExtension ext = drem_extend(reg, {FilterSpec(1.0)});
    MixedRegression mixed = drem_mix(ext);
    attach_disturbance(mixed, ext, run.delta);
    return {std::move(mixed), run.delta};
}

// channel built directly from analytic signals, bypassing the pipeline
SmoothedChannel synthetic_channel(const TimeGrid& g, double theta,
                                  double (*phi)(double), double (*phi_dot)(double),
                                  double (*d1)(double), double (*d1_dot)(double)) {
    SmoothedChannel ch;
    std::vector<double> m(g.count()), md(g.count()), pf(g.count()), pfd(g.count());
    for (std::size_t k = 0; k < g.count(); ++k) {
        const double t = g.time_at(k);
        pf[k] = phi(t);
        pfd[k] = phi_dot(t);
        m[k] = phi(t) * theta + d1(t);
        md[k] = phi_dot(t) * theta + d1_dot(t);
    }
    ch.m = Signal(g, std::move(m));
    ch.m_dot = Signal(g, std::move(md));
    ch.phi_f = Signal(g, std::move(pf));
    ch.phi_f_dot = Signal(g, std::move(pfd));
    ch.pole = 1.0;
    return ch;
}

constexpr double kTheta[2] = {1.0, 2.0};

}  // namespace

TEST_CASE("smooth_channel: zero inputs stay zero, pole is validated") {
    TimeGrid g(0.0, 1e-3, 501);
    MixedRegression mixed;
    mixed.m_bar = {Signal::zeros(g)};
    mixed.phi_bar = Signal::zeros(g);
    SmoothedChannel ch = smooth_channel(mixed, 0, 1.0);
    CHECK(ch.m.max_abs() == 0.0);
    CHECK(ch.m_dot.max_abs() == 0.0);
    CHECK(ch.phi_f.max_abs() == 0.0);
    CHECK(ch.phi_f_dot.max_abs() == 0.0);
    CHECK_THROWS_AS(smooth_channel(mixed, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(smooth_channel(mixed, 1, 1.0), std::invalid_argument);
}

TEST_CASE("smooth_channel: constant channel follows the lag step response") {
    TimeGrid g(0.0, 1e-3, 5001);
    const double c = -3.0;
    MixedRegression mixed;
    mixed.m_bar = {Signal::constant(g, c)};
    mixed.phi_bar = Signal::zeros(g);
    SmoothedChannel ch = smooth_channel(mixed, 0, 1.0);
    double worst_m = 0.0, worst_md = 0.0;
    for (std::size_t k = 0; k < g.count(); ++k) {
        const double t = g.time_at(k);
        worst_m = std::max(worst_m, std::abs(ch.m[k] - c * (1.0 - std::exp(-t))));
        worst_md = std::max(worst_md, std::abs(ch.m_dot[k] - c * std::exp(-t)));
    }
    CHECK(worst_m < 1e-6);
    CHECK(worst_md < 1e-6);
    // the exposed derivative is exactly the filter-state algebra
    for (std::size_t k = 0; k < g.count(); ++k) {
        CHECK(ch.m_dot[k] == 1.0 * (mixed.m_bar[0][k] - ch.m[k]));
    }
}

TEST_CASE("smooth_channel keeps the filtered regression identity") {
    Channels chs = paper_channels(SignalSpec::sinusoid(0.3, 1.0), 8001);
    for (std::size_t i = 0; i < 2; ++i) {
        SmoothedChannel ch = smooth_channel(chs.mixed, i, 1.0);
        REQUIRE(ch.delta1_f.has_value());
        double worst = 0.0, scale = 1.0;
        for (std::size_t k = 0; k < ch.m.size(); ++k) {
            worst = std::max(worst,
                             std::abs(ch.m[k] - ch.phi_f[k] * kTheta[i] - (*ch.delta1_f)[k]));
            scale = std::max(scale, std::abs(ch.m[k]));
        }
        CHECK(worst < 1e-9 * scale);  // lag is linear, applied to an exact identity
    }
}

TEST_CASE("exp_transform: zero channel gives the unit transform") {
    TimeGrid g(0.0, 1e-3, 101);
    SmoothedChannel ch;
    ch.m = Signal::zeros(g);
    ch.m_dot = Signal::zeros(g);
    ch.phi_f = Signal::zeros(g);
    ch.phi_f_dot = Signal::zeros(g);
    ch.pole = 1.0;
    ExpTransform tf = exp_transform(ch);
    for (std::size_t k = 0; k < g.count(); ++k) {
        CHECK(tf.g[k] == 1.0);
        CHECK(tf.g_dot[k] == 0.0);
    }
}

TEST_CASE("exp_transform: ramp channel gives e^t with matching derivative") {
    TimeGrid g(0.0, 1e-3, 2001);
    SmoothedChannel ch;
    std::vector<double> m(g.count()), md(g.count(), 1.0);
    for (std::size_t k = 0; k < g.count(); ++k) m[k] = g.time_at(k);
    ch.m = Signal(g, std::move(m));
    ch.m_dot = Signal(g, std::move(md));
    ch.phi_f = Signal::zeros(g);
    ch.phi_f_dot = Signal::zeros(g);
    ch.pole = 1.0;
    ExpTransform tf = exp_transform(ch);
    for (std::size_t k = 0; k < g.count(); ++k) {
        const double want = std::exp(g.time_at(k));
        CHECK(tf.g[k] == want);
        CHECK(tf.g_dot[k] == 1.0 * want);
        CHECK(std::abs(std::log(tf.g[k]) - ch.m[k]) <= 4e-16 * std::max(1.0, ch.m[k]));
    }
}

TEST_CASE("exp_transform guards against overflow with a diagnostic") {
    TimeGrid g(0.0, 1.0, 3);
    SmoothedChannel ch;
    ch.m = Signal(g, {0.0, 301.0, 0.0});
    ch.m_dot = Signal::zeros(g);
    ch.phi_f = Signal::zeros(g);
    ch.phi_f_dot = Signal::zeros(g);
    ch.pole = 1.0;
    try {
        exp_transform(ch);
        FAIL("expected runtime_error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("301") != std::string::npos);
    }
}

TEST_CASE("cubic identity is exact on the noise-free pipeline") {
    Channels chs = paper_channels(SignalSpec::zero());
    for (std::size_t i = 0; i < 2; ++i) {
        SmoothedChannel ch = smooth_channel(chs.mixed, i, 1.0);
        ExpTransform tf = exp_transform(ch);
        CubicRegression cr = build_cubic_regression(ch, tf);
        const double th = kTheta[i];
        double worst_ratio = 0.0;
        for (std::size_t k = 0; k < cr.zeta.size(); ++k) {
            const double pred = cr.psi1[k] * th + cr.psi2[k] * th * th + cr.psi3[k] * th * th * th;
            const double bound = 1e-9 * std::max(1.0, std::abs(cr.zeta[k]));
            worst_ratio = std::max(worst_ratio, std::abs(cr.zeta[k] - pred) / bound);
        }
        CHECK(worst_ratio < 1.0);
    }
}

TEST_CASE("published psi1 variant breaks the noise-free identity") {
    Channels chs = paper_channels(SignalSpec::zero(), 8001);
    SmoothedChannel ch = smooth_channel(chs.mixed, 0, 1.0);
    ExpTransform tf = exp_transform(ch);
    CubicRegression pub = build_cubic_regression(ch, tf, kernels::Psi1Form::kPublished);
    const double th = kTheta[0];
    double worst = 0.0;
    for (std::size_t k = 0; k < pub.zeta.size(); ++k) {
        const double pred = pub.psi1[k] * th + pub.psi2[k] * th * th + pub.psi3[k] * th * th * th;
        worst = std::max(worst, std::abs(pub.zeta[k] - pred));
    }
    CHECK(worst > 1e-3);  // grossly violated, not a tolerance artifact
}

TEST_CASE("surrogate transform satisfies the identity for any disturbance") {
    // g built as (1 + d1 + d1^2/2) e^(phi theta) with its analytic derivative:
    // the identity must then hold exactly, independent of the truncation step
    TimeGrid g(0.0, 1e-3, 20001);
    const double theta = 1.7;
    auto phi = [](double t) { return 1.0 + 0.6 * std::sin(0.9 * t) + 0.3 * std::cos(2.2 * t); };
    auto phi_dot = [](double t) {
        return 0.6 * 0.9 * std::cos(0.9 * t) - 0.3 * 2.2 * std::sin(2.2 * t);
    };
    auto d1 = [](double t) { return 0.8 * std::sin(1.3 * t) + 0.4 * std::cos(3.1 * t); };
    auto d1_dot = [](double t) {
        return 0.8 * 1.3 * std::cos(1.3 * t) - 0.4 * 3.1 * std::sin(3.1 * t);
    };

    SmoothedChannel ch = synthetic_channel(g, theta, phi, phi_dot, d1, d1_dot);
    std::vector<double> gs(g.count()), gds(g.count());
    for (std::size_t k = 0; k < g.count(); ++k) {
        const double t = g.time_at(k);
        const double E = std::exp(phi(t) * theta);
        const double q = 1.0 + d1(t) + 0.5 * d1(t) * d1(t);
        gs[k] = q * E;
        gds[k] = (d1_dot(t) + d1(t) * d1_dot(t)) * E + q * phi_dot(t) * theta * E;
    }
    ExpTransform surrogate{Signal(g, std::move(gs)), Signal(g, std::move(gds))};
    CubicRegression cr = build_cubic_regression(ch, surrogate);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.count(); ++k) {
        const double pred =
            cr.psi1[k] * theta + cr.psi2[k] * theta * theta + cr.psi3[k] * theta * theta * theta;
        const double scale = std::max({1.0, std::abs(cr.zeta[k]), std::abs(pred)});
        worst = std::max(worst, std::abs(cr.zeta[k] - pred) / scale);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("estimate_theta_cubic recovers Theta from an exciting synthetic regression") {
    TimeGrid g(0.0, 1e-3, 60001);
    std::vector<double> p1(g.count()), p2(g.count()), p3(g.count()), z(g.count());
    for (std::size_t k = 0; k < g.count(); ++k) {
        const double t = g.time_at(k);
        p1[k] = 1.0 + 0.5 * std::sin(1.1 * t);
        p2[k] = 0.8 * std::cos(0.7 * t) + 0.2 * std::sin(2.3 * t);
        p3[k] = 0.6 + 0.4 * std::sin(1.9 * t + 0.5);
        z[k] = p1[k] + p2[k] + p3[k];  // Theta = (1, 1, 1)
    }
    CubicRegression cr;
    cr.zeta = Signal(g, std::move(z));
    cr.psi1 = Signal(g, std::move(p1));
    cr.psi2 = Signal(g, std::move(p2));
    cr.psi3 = Signal(g, std::move(p3));
    cr.g = Signal::zeros(g);
    cr.g_dot = Signal::zeros(g);

    const std::vector<FilterSpec> filters{FilterSpec(2.0), FilterSpec(6.0)};
    ThetaEstimate est = estimate_theta_cubic(cr, filters, 1e4);
    const std::size_t last = g.count() - 1;
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(std::abs(est.Theta_hat.value(last, j) - 1.0) < 1e-8);
    }
    CHECK(est.theta_hat[last] == est.Theta_hat.value(last, 0));
    CHECK(est.consistency[last] < 1e-6);
    CHECK(est.excitation > 0.0);

    // released-estimate self-check once converged
    CHECK(est.consistency[last] < 1e-3);
    const double t1 = est.Theta_hat.value(last, 0);
    CHECK(std::abs(est.Theta_hat.value(last, 1) - t1 * t1) < 1e-2);
    CHECK(std::abs(est.Theta_hat.value(last, 2) - t1 * t1 * t1) < 1e-2);

    CHECK_THROWS_AS(estimate_theta_cubic(cr, {FilterSpec(1.0)}, 1e4), std::invalid_argument);
    CHECK_THROWS_AS(estimate_theta_cubic(cr, filters, 0.0), std::invalid_argument);
}

TEST_CASE("estimate_theta_cubic exercises substepping at stiff gains") {
    TimeGrid g(0.0, 1e-3, 20001);
    std::vector<double> p1(g.count()), p2(g.count()), p3(g.count()), z(g.count());
    for (std::size_t k = 0; k < g.count(); ++k) {
        const double t = g.time_at(k);
        p1[k] = 1.0 + 0.5 * std::sin(1.1 * t);
        p2[k] = 0.8 * std::cos(0.7 * t) + 0.2 * std::sin(2.3 * t);
        p3[k] = 0.6 + 0.4 * std::sin(1.9 * t + 0.5);
        z[k] = 2.0 * p1[k] + 4.0 * p2[k] + 8.0 * p3[k];  // theta = 2
    }
    CubicRegression cr;
    cr.zeta = Signal(g, std::move(z));
    cr.psi1 = Signal(g, std::move(p1));
    cr.psi2 = Signal(g, std::move(p2));
    cr.psi3 = Signal(g, std::move(p3));
    cr.g = Signal::zeros(g);
    cr.g_dot = Signal::zeros(g);
    ThetaEstimate est = estimate_theta_cubic(cr, {FilterSpec(2.0), FilterSpec(6.0)}, 1e6);
    CHECK(est.substeps > 1);
    CHECK_FALSE(est.substeps_capped);
    const std::size_t last = g.count() - 1;
    CHECK(std::abs(est.Theta_hat.value(last, 0) - 2.0) < 1e-6);
    CHECK(std::abs(est.Theta_hat.value(last, 1) - 4.0) < 1e-6);
    CHECK(std::abs(est.Theta_hat.value(last, 2) - 8.0) < 1e-6);
}

TEST_CASE("zero cubic regression leaves the estimate at its initial value") {
    TimeGrid g(0.0, 1e-3, 1001);
    CubicRegression cr;
    cr.zeta = Signal::zeros(g);
    cr.psi1 = Signal::zeros(g);
    cr.psi2 = Signal::zeros(g);
    cr.psi3 = Signal::zeros(g);
    cr.g = Signal::zeros(g);
    cr.g_dot = Signal::zeros(g);
    ThetaEstimate est = estimate_theta_cubic(cr, {FilterSpec(2.0), FilterSpec(6.0)}, 1e4);
    CHECK(est.Theta_hat.max_abs() == 0.0);
}

TEST_CASE("all-zero channel assembles an all-zero cubic regression") {
    TimeGrid g(0.0, 1e-3, 101);
    SmoothedChannel ch;
    ch.m = Signal::zeros(g);
    ch.m_dot = Signal::zeros(g);
    ch.phi_f = Signal::zeros(g);
    ch.phi_f_dot = Signal::zeros(g);
    ch.pole = 1.0;
    CubicRegression cr = build_cubic_regression(ch, exp_transform(ch));
    CHECK(cr.zeta.max_abs() == 0.0);
    CHECK(cr.psi1.max_abs() == 0.0);
    CHECK(cr.psi2.max_abs() == 0.0);
    CHECK(cr.psi3.max_abs() == 0.0);
}

TEST_CASE("noise-free channel: both identity sides reduce to 0.5 phi^2 phi_dot g theta^3") {
    Channels chs = paper_channels(SignalSpec::zero(), 8001);
    const double th = kTheta[0];
    SmoothedChannel ch = smooth_channel(chs.mixed, 0, 1.0);
    ExpTransform tf = exp_transform(ch);
    CubicRegression cr = build_cubic_regression(ch, tf);
    double worst = 0.0;
    for (std::size_t k = 0; k < cr.zeta.size(); ++k) {
        const double reduced =
            0.5 * ch.phi_f[k] * ch.phi_f[k] * ch.phi_f_dot[k] * tf.g[k] * th * th * th;
        worst = std::max(worst, std::abs(cr.zeta[k] - reduced));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("noise-free real channels are collinear: the cubic extension is singular") {
    // with no disturbance, psi1 = 3 theta^2 psi3 and psi2 = -3 theta psi3
    // pointwise, so the extended system carries no information and the
    // estimate stays put; the disturbance itself is the excitation
    Channels chs = paper_channels(SignalSpec::zero(), 20001);
    SmoothedChannel ch = smooth_channel(chs.mixed, 0, 1.0);
    ExpTransform tf = exp_transform(ch);
    CubicRegression cr = build_cubic_regression(ch, tf);

    double worst_rel = 0.0;
    for (std::size_t k = 0; k < cr.zeta.size(); ++k) {
        const double th = kTheta[0];
        worst_rel = std::max(worst_rel, std::abs(cr.psi1[k] - 3.0 * th * th * cr.psi3[k]));
        worst_rel = std::max(worst_rel, std::abs(cr.psi2[k] + 3.0 * th * cr.psi3[k]));
    }
    CHECK(worst_rel < 1e-9);

    ThetaEstimate est = estimate_theta_cubic(cr, {FilterSpec(2.0), FilterSpec(6.0)}, 1e4);
    CHECK(est.max_abs_phi < 1e-12);          // determinant is numerically zero
    CHECK(est.Theta_hat.max_abs() < 1e-6);   // nothing to adapt on
}
