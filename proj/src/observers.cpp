#include "observerlab/observers.hpp"

#include <stdexcept>

#include "observerlab/ode.hpp"

namespace observerlab {

namespace {

void require_observable(const LtiPlant& plant, const char* who) {
    if (!plant.observable()) {
        throw std::invalid_argument(std::string(who) + ": plant is not observable (rank " +
                                    std::to_string(plant.observability_rank()) + " of " +
                                    std::to_string(plant.dim()) + ")");
    }
}

}  // namespace

LuenbergerObserver::LuenbergerObserver(const LtiPlant& plant, LuenbergerConfig cfg)
    : plant_(&plant), cfg_(std::move(cfg)) {
    const std::size_t n = plant.dim();
    if (cfg_.L.size() != n) {
        throw std::invalid_argument("LuenbergerObserver: L length must equal plant dim");
    }
    if (cfg_.xhat0.size() != n) {
        throw std::invalid_argument("LuenbergerObserver: xhat0 length must equal plant dim");
    }
    require_observable(plant, "LuenbergerObserver");
    const Matrix closed = plant.A() - outer(cfg_.L, plant.C());
    eig_real_ = eigen_real_parts(closed);
    hurwitz_ = true;
    for (double re : eig_real_)
        if (!(re < 0.0)) hurwitz_ = false;
}

Trajectory LuenbergerObserver::observe(const Signal& y, const Signal& u,
                                       Interp input_interp) const {
    if (!(y.grid() == u.grid())) {
        throw std::invalid_argument("LuenbergerObserver::observe: y and u grids differ");
    }
    const LtiPlant& plant = *plant_;
    const std::size_t n = plant.dim();
    SampledInput uin(u, input_interp);
    // the measurement drives the loop through L; reconstruct it at the
    // integrator's order so a matched estimate stays matched
    SampledInput yin(y, Interp::kCubic);
    const Matrix& A = plant.A();
    auto B = plant.B();
    auto C = plant.C();
    const auto& L = cfg_.L;

    StateFn f = [&](double t, std::span<const double> x, std::span<double> dx) {
        const double ut = uin(t);
        const double innov = yin(t) - dot(C, x);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = B[i] * ut + L[i] * innov;
            for (std::size_t j = 0; j < n; ++j) acc += A(i, j) * x[j];
            dx[i] = acc;
        }
    };
    return integrate(f, y.grid(), cfg_.xhat0);
}

Trajectory luenberger_observe(const LtiPlant& plant, const LuenbergerConfig& cfg,
                              const Signal& y, const Signal& u, Interp input_interp) {
    return LuenbergerObserver(plant, cfg).observe(y, u, input_interp);
}

GpeboState gpebo_propagate(const LtiPlant& plant, const Signal& u,
                           std::span<const double> xi0, Interp input_interp) {
    const std::size_t n = plant.dim();
    if (xi0.size() != n) {
        throw std::invalid_argument("gpebo_propagate: xi0 length must equal plant dim");
    }
    require_observable(plant, "gpebo_propagate");

    const TimeGrid& grid = u.grid();
    SampledInput uin(u, input_interp);
    const Matrix& A = plant.A();
    auto B = plant.B();

    StateFn fxi = [&](double t, std::span<const double> x, std::span<double> dx) {
        const double ut = uin(t);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = B[i] * ut;
            for (std::size_t j = 0; j < n; ++j) acc += A(i, j) * x[j];
            dx[i] = acc;
        }
    };
    Trajectory xi = integrate(fxi, grid, xi0);

    // The fundamental matrix is integrated column by column; each column obeys
    // the homogeneous plant dynamics starting from a unit vector.
    StateFn fhom = [&](double, std::span<const double> x, std::span<double> dx) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += A(i, j) * x[j];
            dx[i] = acc;
        }
    };
    MatrixSeries phi(grid, n, n);
    std::vector<double> unit(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        unit.assign(n, 0.0);
        unit[c] = 1.0;
        Trajectory col = integrate(fhom, grid, unit);
        for (std::size_t k = 0; k < grid.count(); ++k) {
            auto s = col.sample(k);
            for (std::size_t i = 0; i < n; ++i) phi.entry(k, i, c) = s[i];
        }
    }
    return GpeboState{std::move(xi), std::move(phi), std::nullopt};
}

Trajectory gpebo_reconstruct(const GpeboState& gpebo, const Trajectory& theta_hat) {
    const std::size_t n = gpebo.xi.dim();
    if (!(theta_hat.grid() == gpebo.xi.grid())) {
        throw std::invalid_argument("gpebo_reconstruct: grids differ");
    }
    if (theta_hat.dim() != n) {
        throw std::invalid_argument("gpebo_reconstruct: theta_hat dim must equal state dim");
    }
    Trajectory xhat(gpebo.xi.grid(), n);
    for (std::size_t k = 0; k < gpebo.xi.count(); ++k) {
        auto xik = gpebo.xi.sample(k);
        auto th = theta_hat.sample(k);
        auto out = xhat.sample(k);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = xik[i];
            for (std::size_t j = 0; j < n; ++j) acc += gpebo.phi.entry(k, i, j) * th[j];
            out[i] = acc;
        }
    }
    return xhat;
}

}  // namespace observerlab
