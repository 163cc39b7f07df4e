// Serial vs OpenMP kernel comparison: wall time, speedup, and a max-abs-diff
// column that must read 0 (the parallel loops are pointwise and reorder
// nothing).
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "observerlab/kernels.hpp"

using namespace observerlab;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t count, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<double> v(count);
    for (double& x : v) x = dist(rng);
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = omp_get_wtime();
        fn();
        best = std::min(best, omp_get_wtime() - t0);
    }
    return best;
}

void row(const char* name, double serial_s, double parallel_s, double diff) {
    std::printf("%-24s %10.4f ms %10.4f ms %8.2fx %12.3g\n", name, serial_s * 1e3,
                parallel_s * 1e3, serial_s / parallel_s, diff);
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t count = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000000;
    const int reps = 5;
    std::mt19937_64 rng(1);

    std::printf("samples: %zu, threads: %d\n", count, omp_get_max_threads());
    std::printf("%-24s %13s %13s %9s %12s\n", "kernel", "serial", "openmp", "speedup",
                "max|diff|");

    {
        const std::size_t n = 3;
        auto phi = random_vector(rng, count * n * n, 2.0);
        auto z = random_vector(rng, count * n, 2.0);
        std::vector<double> ms(count * n), ds(count), mp(count * n), dp(count);
        const double ts = time_best_of(reps, [&] {
            kernels::mix_serial(n, count, phi.data(), z.data(), ms.data(), ds.data());
        });
        const double tp = time_best_of(reps, [&] {
            kernels::mix_parallel(n, count, phi.data(), z.data(), mp.data(), dp.data());
        });
        row("mix 3x3", ts, tp, std::max(max_abs_diff(ms, mp), max_abs_diff(ds, dp)));
    }
    {
        const std::size_t n = 2;
        auto phi = random_vector(rng, count * n * n, 2.0);
        auto z = random_vector(rng, count * n, 2.0);
        std::vector<double> ms(count * n), ds(count), mp(count * n), dp(count);
        const double ts = time_best_of(reps, [&] {
            kernels::mix_serial(n, count, phi.data(), z.data(), ms.data(), ds.data());
        });
        const double tp = time_best_of(reps, [&] {
            kernels::mix_parallel(n, count, phi.data(), z.data(), mp.data(), dp.data());
        });
        row("mix 2x2", ts, tp, std::max(max_abs_diff(ms, mp), max_abs_diff(ds, dp)));
    }
    {
        auto m = random_vector(rng, count, 4.0);
        auto md = random_vector(rng, count, 2.0);
        std::vector<double> gs(count), gds(count), gp(count), gdp(count);
        const double ts = time_best_of(
            reps, [&] { kernels::exp_serial(count, m.data(), md.data(), gs.data(), gds.data()); });
        const double tp = time_best_of(reps, [&] {
            kernels::exp_parallel(count, m.data(), md.data(), gp.data(), gdp.data());
        });
        row("exp transform", ts, tp, std::max(max_abs_diff(gs, gp), max_abs_diff(gds, gdp)));
    }
    {
        auto m = random_vector(rng, count, 2.0);
        auto md = random_vector(rng, count, 1.0);
        auto p = random_vector(rng, count, 2.0);
        auto pd = random_vector(rng, count, 1.0);
        auto g = random_vector(rng, count, 3.0);
        auto gd = random_vector(rng, count, 3.0);
        std::vector<double> z1(count), a1(count), b1(count), c1(count);
        std::vector<double> z2(count), a2(count), b2(count), c2(count);
        const double ts = time_best_of(reps, [&] {
            kernels::cubic_assemble_serial(count, m.data(), md.data(), p.data(), pd.data(),
                                           g.data(), gd.data(), kernels::Psi1Form::kRederived,
                                           z1.data(), a1.data(), b1.data(), c1.data());
        });
        const double tp = time_best_of(reps, [&] {
            kernels::cubic_assemble_parallel(count, m.data(), md.data(), p.data(), pd.data(),
                                             g.data(), gd.data(), kernels::Psi1Form::kRederived,
                                             z2.data(), a2.data(), b2.data(), c2.data());
        });
        double diff = std::max({max_abs_diff(z1, z2), max_abs_diff(a1, a2), max_abs_diff(b1, b2),
                                max_abs_diff(c1, c2)});
        row("cubic assembly", ts, tp, diff);
    }
    {
        // a bank of stiff scalar flows, one flow per estimated quantity
        const std::size_t flows_n = 6;
        const std::size_t len = std::min<std::size_t>(count, 200000);
        auto phi = random_vector(rng, len, 1.0);
        std::vector<std::vector<double>> m(flows_n), outs_s(flows_n), outs_p(flows_n);
        std::vector<kernels::GradientFlow> fs(flows_n), fp(flows_n);
        for (std::size_t i = 0; i < flows_n; ++i) {
            m[i] = random_vector(rng, len, 2.0);
            outs_s[i].assign(len, 0.0);
            outs_p[i].assign(len, 0.0);
            fs[i] = kernels::GradientFlow{m[i].data(), phi.data(), 10.0, 0.0, outs_s[i].data()};
            fp[i] = kernels::GradientFlow{m[i].data(), phi.data(), 10.0, 0.0, outs_p[i].data()};
        }
        const double ts =
            time_best_of(reps, [&] { kernels::gradient_flow_bank_serial(fs, len, 1e-3, 8); });
        const double tp =
            time_best_of(reps, [&] { kernels::gradient_flow_bank_parallel(fp, len, 1e-3, 8); });
        double diff = 0.0;
        for (std::size_t i = 0; i < flows_n; ++i)
            diff = std::max(diff, max_abs_diff(outs_s[i], outs_p[i]));
        row("gradient flow bank x6", ts, tp, diff);
    }
    return 0;
}
