// Command-line harness: runs comparison scenarios, validates configs, and
// sweeps the disturbance amplitude for the cubic-defect study.
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "observerlab/export.hpp"
#include "observerlab/harness.hpp"
#include "observerlab/scenario.hpp"

namespace {

using namespace observerlab;

std::vector<double> parse_scales(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            if (used != cell.size()) throw std::invalid_argument(cell);
            out.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("--delta-scale: '" + cell + "' is not a number");
        }
    }
    if (out.empty()) throw std::invalid_argument("--delta-scale: no scales given");
    return out;
}

void print_summary(const ExperimentResult& r, const std::filesystem::path& dir) {
    std::printf("wrote %zu CSV + %zu SVG files and report.json to %s\n", r.x.dim() * 2,
                r.x.dim() * 2, dir.string().c_str());
    std::printf("steady-state metrics (final 20%% of the horizon):\n");
    for (const auto& s : r.schemes) {
        std::printf("  %-10s eps =", s.name.c_str());
        for (double e : s.eps) std::printf(" %.4g", e);
        if (s.theta_avg_err) {
            std::printf("   avg |theta err| =");
            for (double e : *s.theta_avg_err) std::printf(" %.4g", e);
        }
        std::printf("\n");
    }
    std::printf("mixed-disturbance bound (requires max |delta1_i| < 1):\n");
    for (std::size_t i = 0; i < r.assumption2.size(); ++i) {
        std::printf("  channel %zu: max |delta1| = %.4g  %s\n", i + 1,
                    r.assumption2[i].max_abs_delta1,
                    r.assumption2[i].ok ? "ok" : "VIOLATED");
    }
    for (std::size_t i = 0; i < r.cubic_regressor_scale.size(); ++i) {
        std::printf("  cubic channel %zu: regressor scale %.4g, substeps %d%s\n", i + 1,
                    r.cubic_regressor_scale[i], r.cubic_substeps[i],
                    r.cubic_capped[i] ? " (capped)" : "");
    }
}

int run_and_export(const Scenario& s) {
    const ExperimentResult r = run_scenario(s);
    const std::filesystem::path dir = resolve_output_dir(s);
    export_csv(r, dir);
    export_all_svg(r, dir);
    write_report(r, dir / "report.json");
    print_summary(r, dir);
    return 0;
}

int run_sweep(const Scenario& s, const std::vector<double>& scales) {
    const auto rows = run_defect_sweep(s, scales);
    const std::size_t n = rows.front().rms.size();
    std::printf("%-8s", "scale");
    for (std::size_t i = 0; i < n; ++i)
        std::printf("  %-14s", ("rms ch" + std::to_string(i + 1)).c_str());
    std::printf("\n");
    for (const auto& row : rows) {
        std::printf("%-8.4g", row.scale);
        for (double v : row.rms) std::printf("  %-14.6g", v);
        std::printf("\n");
    }
    if (rows.size() > 1) {
        std::printf("successive ratios:\n");
        for (std::size_t a = 0; a + 1 < rows.size(); ++a) {
            std::printf("  %.4g/%.4g:", rows[a].scale, rows[a + 1].scale);
            for (std::size_t i = 0; i < n; ++i)
                std::printf(" %.4g", rows[a].rms[i] / rows[a + 1].rms[i]);
            std::printf("\n");
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive state-observer simulation harness"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run a scenario from a config file");
    run_cmd->add_option("config", config_path, "scenario config (JSON)")->required();

    auto* paper_cmd = app.add_subcommand("paper", "run the built-in comparison study");

    std::string sweep_config;
    std::string scales_csv = "1,0.5,0.25";
    auto* sweep_cmd =
        app.add_subcommand("sweep", "disturbance-amplitude sweep of the cubic defect");
    sweep_cmd->add_option("--delta-scale", scales_csv, "comma-separated amplitude scales");
    sweep_cmd->add_option("config", sweep_config, "optional scenario config (JSON)");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "check a config file and exit");
    validate_cmd->add_option("config", validate_path, "scenario config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) {
            return run_and_export(load_scenario(config_path));
        }
        if (*paper_cmd) {
            return run_and_export(paper_scenario());
        }
        if (*sweep_cmd) {
            const Scenario s =
                sweep_config.empty() ? paper_scenario() : load_scenario(sweep_config);
            return run_sweep(s, parse_scales(scales_csv));
        }
        if (*validate_cmd) {
            load_scenario(validate_path);
            std::printf("%s: ok\n", validate_path.c_str());
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
