#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "observerlab/matrix.hpp"
#include "observerlab/observers.hpp"
#include "observerlab/plant.hpp"
#include "observerlab/regression.hpp"
#include "observerlab/signal.hpp"

namespace observerlab {

/// Complete description of one comparative experiment. Physical quantities
/// have no defaults; only the grid and output directory do.
struct Scenario {
    Matrix A;
    std::vector<double> B;
    std::vector<double> C;
    std::vector<double> x0;
    std::vector<double> xi0;

    SignalSpec input;
    SignalSpec disturbance;

    TimeGrid grid{0.0, 1e-3, 60001};

    LuenbergerConfig luenberger;

    std::vector<double> drem_poles;    // n-1 extension lags
    double smoothing_pole = 0.0;       // k of the smoothing lag
    std::vector<double> cubic_poles;   // 2 extension lags for the cubic stage
    std::vector<double> cubic_gamma;   // adaptation gain per parameter
    double gradient_gamma = 0.0;       // baseline gradient gain

    std::string output_dir = "out";
};

/// The built-in simulation study: second-order oscillator plant
/// A=[[0,1],[-9,0]], B=[0,1], C=[5,0], x0=[1,2], xi0=[0,0], unit-step input,
/// disturbance 0.3 sin t, L=[2,3.2], extension lag 1/(p+1), smoothing lag
/// 1/(p+1), cubic lags 2/(p+2) and 6/(p+6), gradient gain 1, cubic gains
/// 1e11 and 1e13, grid t in [0,60] at 1 ms.
Scenario paper_scenario();

/// Throws std::invalid_argument naming the offending field on any
/// inconsistency (dimensions, missing keys, bad kinds, degenerate grid).
void validate_scenario(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& config_path);
std::string scenario_to_json(const Scenario& s);

/// FNV-1a over the canonical JSON form; stable across runs.
std::uint64_t scenario_hash(const Scenario& s);

/// Output directory resolution: OBSERVER_LAB_OUT overrides the scenario's.
std::filesystem::path resolve_output_dir(const Scenario& s);

}  // namespace observerlab
