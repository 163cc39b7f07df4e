#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "observerlab/harness.hpp"

namespace observerlab {

/// Figure ids: "theta1".."thetan" (parameter estimates) and "e1".."en"
/// (state-estimate errors).
std::vector<std::string> figure_ids(const ExperimentResult& r);

/// Writes one CSV per figure into dir: columns t,scheme1,scheme2,scheme3 with
/// 17 significant digits, '.' decimal point, '\n' newlines. Scheme 1 carries
/// no parameter estimate, so theta CSVs hold nan in its column. Byte-identical
/// across re-exports of the same result.
std::vector<std::filesystem::path> export_csv(const ExperimentResult& r,
                                              const std::filesystem::path& dir);

/// Standalone deterministic SVG line chart for one figure id (one polyline
/// per scheme, axes, legend). Unknown ids are rejected.
void export_svg(const ExperimentResult& r, const std::string& figure_id,
                const std::filesystem::path& file);

/// Renders every figure as <id>.svg into dir.
std::vector<std::filesystem::path> export_all_svg(const ExperimentResult& r,
                                                  const std::filesystem::path& dir);

/// Machine-readable run report (metrics, disturbance diagnostics, excitation,
/// substep diagnostics, provenance) as report.json.
void write_report(const ExperimentResult& r, const std::filesystem::path& file);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

CsvTable read_csv(const std::filesystem::path& file);

}  // namespace observerlab
