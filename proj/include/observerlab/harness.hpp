#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "observerlab/noise_robust.hpp"
#include "observerlab/regression.hpp"
#include "observerlab/scenario.hpp"

namespace observerlab {

/// One estimation scheme's trajectories and steady-state metrics. The
/// comparison window is the final 20% of the horizon.
struct SchemeResult {
    std::string name;
    Trajectory xhat;
    Trajectory error;  // x - xhat
    std::optional<Trajectory> theta_hat;

    std::vector<double> eps;             // max |e_i| over the window
    std::vector<double> terminal_error;  // |e_i| at the last sample
    std::optional<std::vector<double>> theta_avg_err;  // mean |theta_i - theta| over the window
};

struct ExperimentResult {
    TimeGrid grid;
    Trajectory x;
    Signal y;
    Signal u;
    Signal delta;
    std::vector<double> theta_true;  // x(0) - xi(0), simulation side

    // scheme 1: full-order observer; scheme 2: gradient baseline on the mixed
    // regression; scheme 3: cubic noise-robust pipeline
    std::array<SchemeResult, 3> schemes;

    std::vector<Assumption2Channel> assumption2;
    std::vector<Signal> delta1;  // simulated mixed disturbance per channel

    double excitation_gradient = 0.0;
    int gradient_substeps = 1;
    bool gradient_capped = false;

    std::vector<double> excitation_cubic;
    std::vector<double> cubic_regressor_scale;  // max |det| of the extended cubic system
    std::vector<int> cubic_substeps;
    std::vector<bool> cubic_capped;

    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;

    std::size_t window_start() const { return (grid.count() * 4) / 5; }
};

/// Runs the full comparison: plant simulation, full-order observer, GPEBO +
/// mixing + gradient baseline, GPEBO + cubic noise-robust estimation, state
/// reconstruction, metrics. Stage failures are rethrown with the stage name.
ExperimentResult run_scenario(const Scenario& s);

/// RMS of the cubic-regression defect zeta - Psi^T Theta_true per channel,
/// for one disturbance amplitude scale. Used by the amplitude sweep.
std::vector<double> cubic_defect_rms(const Scenario& s, double delta_scale);

struct SweepRow {
    double scale = 0.0;
    std::vector<double> rms;  // per channel
};

std::vector<SweepRow> run_defect_sweep(const Scenario& s, const std::vector<double>& scales);

}  // namespace observerlab
