#include "observerlab/plant.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace observerlab {

LtiPlant::LtiPlant(Matrix A, std::vector<double> B, std::vector<double> C)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)) {
    if (!A_.square()) throw std::invalid_argument("LtiPlant: A must be square");
    n_ = A_.rows();
    if (B_.size() != n_) throw std::invalid_argument("LtiPlant: B length must equal dim(A)");
    if (C_.size() != n_) throw std::invalid_argument("LtiPlant: C length must equal dim(A)");
    obs_rank_ = observerlab::observability_rank(A_, C_);
}

std::size_t observability_rank(const Matrix& A, std::span<const double> C, double rel_tol) {
    const std::size_t n = A.rows();
    // columns: C, A^T C, ..., (A^T)^(n-1) C
    Matrix obs(n, n);
    const Matrix At = A.transposed();
    std::vector<double> col(C.begin(), C.end());
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) obs(i, j) = col[i];
        col = mat_vec(At, col);
    }
    return rank(obs, rel_tol);
}

SignalSpec SignalSpec::zero() { return {}; }

SignalSpec SignalSpec::unit_step() {
    SignalSpec s;
    s.kind = Kind::kUnitStep;
    return s;
}

SignalSpec SignalSpec::constant(double value) {
    SignalSpec s;
    s.kind = Kind::kConstant;
    s.value = value;
    return s;
}

SignalSpec SignalSpec::sinusoid(double amplitude, double omega, double phase) {
    SignalSpec s;
    s.kind = Kind::kSinusoid;
    s.amplitude = amplitude;
    s.omega = omega;
    s.phase = phase;
    return s;
}

SignalSpec SignalSpec::gaussian_white(double stddev, std::uint64_t seed) {
    SignalSpec s;
    s.kind = Kind::kGaussianWhite;
    s.stddev = stddev;
    s.seed = seed;
    return s;
}

SignalSpec SignalSpec::custom(std::vector<double> samples) {
    SignalSpec s;
    s.kind = Kind::kCustomSamples;
    s.samples = std::move(samples);
    return s;
}

namespace {

double uniform01(std::mt19937_64& rng) {
    // 53 random bits -> [0, 1)
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> gaussian_samples(std::size_t count, double stddev, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(count);
    std::size_t k = 0;
    while (k < count) {
        // Box-Muller; avoids log(0)
        const double u1 = 1.0 - uniform01(rng);
        const double u2 = uniform01(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        out[k++] = stddev * r * std::cos(2.0 * M_PI * u2);
        if (k < count) out[k++] = stddev * r * std::sin(2.0 * M_PI * u2);
    }
    return out;
}

}  // namespace

Signal eval_signal(const SignalSpec& spec, const TimeGrid& grid) {
    const std::size_t n = grid.count();
    std::vector<double> out(n, 0.0);
    switch (spec.kind) {
        case SignalSpec::Kind::kZero:
            break;
        case SignalSpec::Kind::kUnitStep:
            for (std::size_t k = 0; k < n; ++k) out[k] = grid.time_at(k) >= 0.0 ? 1.0 : 0.0;
            break;
        case SignalSpec::Kind::kConstant:
            for (std::size_t k = 0; k < n; ++k) out[k] = spec.value;
            break;
        case SignalSpec::Kind::kSinusoid:
            if (spec.amplitude < 0.0) {
                throw std::invalid_argument("eval_signal: sinusoid amplitude must be >= 0");
            }
            for (std::size_t k = 0; k < n; ++k)
                out[k] = spec.amplitude * std::sin(spec.omega * grid.time_at(k) + spec.phase);
            break;
        case SignalSpec::Kind::kGaussianWhite:
            if (spec.stddev < 0.0) {
                throw std::invalid_argument("eval_signal: white-noise stddev must be >= 0");
            }
            out = gaussian_samples(n, spec.stddev, spec.seed);
            break;
        case SignalSpec::Kind::kCustomSamples:
            if (spec.samples.size() != n) {
                throw std::invalid_argument("eval_signal: custom sample count does not match grid");
            }
            out = spec.samples;
            break;
    }
    return Signal(grid, std::move(out));
}

PlantRun simulate_plant(const LtiPlant& plant, std::span<const double> x0,
                        const SignalSpec& input, const SignalSpec& disturbance,
                        const TimeGrid& grid) {
    const std::size_t n = plant.dim();
    if (x0.size() != n) {
        throw std::invalid_argument("simulate_plant: x0 length must equal plant dim");
    }
    Signal u = eval_signal(input, grid);
    Signal delta = eval_signal(disturbance, grid);

    SampledInput uin(u, input.interp());
    const Matrix& A = plant.A();
    auto B = plant.B();
    StateFn f = [&](double t, std::span<const double> x, std::span<double> dx) {
        const double ut = uin(t);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = B[i] * ut;
            for (std::size_t j = 0; j < n; ++j) acc += A(i, j) * x[j];
            dx[i] = acc;
        }
    };
    Trajectory x = integrate(f, grid, x0);

    std::vector<double> yv(grid.count());
    for (std::size_t k = 0; k < grid.count(); ++k) {
        yv[k] = dot(plant.C(), x.sample(k)) + delta[k];
    }

    PlantRun run{std::move(x), Signal(grid, std::move(yv)), std::move(u), std::move(delta),
                 plant.observability_rank(), plant.observable(), input.interp()};
    return run;
}

}  // namespace observerlab
