#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "observerlab/export.hpp"
#include "observerlab/harness.hpp"
#include "observerlab/scenario.hpp"

using namespace observerlab;
namespace fs = std::filesystem;

namespace {

Scenario short_paper(std::size_t count = 2001) {
    Scenario s = paper_scenario();
    s.grid = TimeGrid(0.0, 1e-3, count);
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("test_tmp") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("paper_scenario encodes the reference study verbatim") {
    const Scenario s = paper_scenario();
    CHECK(s.A == Matrix::from_rows({{0.0, 1.0}, {-9.0, 0.0}}));
    CHECK(s.B == std::vector<double>{0.0, 1.0});
    CHECK(s.C == std::vector<double>{5.0, 0.0});
    CHECK(s.x0 == std::vector<double>{1.0, 2.0});
    CHECK(s.xi0 == std::vector<double>{0.0, 0.0});
    CHECK(s.input.kind == SignalSpec::Kind::kUnitStep);
    CHECK(s.disturbance.kind == SignalSpec::Kind::kSinusoid);
    CHECK(s.disturbance.amplitude == 0.3);
    CHECK(s.disturbance.omega == 1.0);
    CHECK(s.disturbance.phase == 0.0);
    CHECK(s.luenberger.L == std::vector<double>{2.0, 3.2});
    CHECK(s.luenberger.xhat0 == std::vector<double>{0.0, 0.0});
    CHECK(s.drem_poles == std::vector<double>{1.0});
    CHECK(s.smoothing_pole == 1.0);
    CHECK(s.cubic_poles == std::vector<double>{2.0, 6.0});
    CHECK(s.cubic_gamma == std::vector<double>{1e11, 1e13});
    CHECK(s.gradient_gamma == 1.0);
    CHECK(s.grid.t0() == 0.0);
    CHECK(s.grid.step() == 1e-3);
    CHECK(s.grid.count() == 60001);
    CHECK_NOTHROW(validate_scenario(s));
}

TEST_CASE("validate_scenario names the offending field") {
    auto expect_field = [](Scenario s, const std::string& needle) {
        try {
            validate_scenario(s);
            FAIL("expected invalid_argument for ", needle);
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    {
        Scenario s = paper_scenario();
        s.B = {0.0};
        expect_field(s, "plant.B");
    }
    {
        Scenario s = paper_scenario();
        s.x0 = {1.0, 2.0, 3.0};
        expect_field(s, "plant.x0");
    }
    {
        Scenario s = paper_scenario();
        s.luenberger.L = {2.0};
        expect_field(s, "observer.L");
    }
    {
        Scenario s = paper_scenario();
        s.drem_poles = {1.0, 2.0};
        expect_field(s, "drem.filters");
    }
    {
        Scenario s = paper_scenario();
        s.cubic_poles = {2.0};
        expect_field(s, "cubic.filters");
    }
    {
        Scenario s = paper_scenario();
        s.cubic_gamma = {1e11};
        expect_field(s, "cubic.gamma");
    }
    {
        Scenario s = paper_scenario();
        s.gradient_gamma = 0.0;
        expect_field(s, "gradient.gamma");
    }
    {
        Scenario s = paper_scenario();
        s.grid = TimeGrid(0.0, 1e-3, 1);  // degenerate zero-horizon grid
        expect_field(s, "grid");
    }
}

TEST_CASE("config round trip and hashing") {
    TempDir tmp("config");
    const Scenario s = paper_scenario();
    const fs::path cfg = tmp.path / "paper.json";
    {
        std::ofstream out(cfg);
        out << scenario_to_json(s);
    }
    const Scenario loaded = load_scenario(cfg);
    CHECK(loaded.A == s.A);
    CHECK(loaded.cubic_gamma == s.cubic_gamma);
    CHECK(loaded.grid == s.grid);
    CHECK(scenario_hash(loaded) == scenario_hash(s));

    Scenario changed = s;
    changed.gradient_gamma = 2.0;
    CHECK(scenario_hash(changed) != scenario_hash(s));
}

TEST_CASE("load_scenario reports the failing field path") {
    TempDir tmp("badcfg");
    auto write_and_try = [&](const std::string& name, const std::string& body,
                             const std::string& needle) {
        const fs::path p = tmp.path / name;
        std::ofstream(p) << body;
        try {
            load_scenario(p);
            FAIL("expected invalid_argument for ", needle);
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    write_and_try("notjson.json", "{ nope", "not valid JSON");
    write_and_try("missing_plant.json", R"({"observer": {}})", "plant");
    write_and_try("bad_A.json",
                  R"({"plant": {"A": [[0, 1], [1]], "B": [0,1], "C": [5,0], "x0": [1,2]}})",
                  "plant.A");
    write_and_try(
        "bad_kind.json",
        R"({"plant": {"A": [[0,1],[-9,0]], "B": [0,1], "C": [5,0], "x0": [1,2]},
            "observer": {"xi0": [0,0], "L": [2,3.2], "xhat0": [0,0]},
            "input": {"kind": "ramp"},
            "disturbance": {"kind": "zero"},
            "drem": {"filters": [1.0]}, "smoothing": {"pole": 1.0},
            "cubic": {"filters": [2.0, 6.0], "gamma": [1e11, 1e13]},
            "gradient": {"gamma": 1.0}})",
        "input.kind");
    CHECK_THROWS_AS(load_scenario(tmp.path / "absent.json"), std::invalid_argument);
}

TEST_CASE("resolve_output_dir honors OBSERVER_LAB_OUT") {
    Scenario s = paper_scenario();
    s.output_dir = "plain";
    unsetenv("OBSERVER_LAB_OUT");
    CHECK(resolve_output_dir(s) == fs::path("plain"));
    setenv("OBSERVER_LAB_OUT", "override_dir", 1);
    CHECK(resolve_output_dir(s) == fs::path("override_dir"));
    unsetenv("OBSERVER_LAB_OUT");
}

TEST_CASE("run_scenario produces consistent schemes and metrics") {
    const Scenario s = short_paper();
    const ExperimentResult r = run_scenario(s);

    CHECK(r.schemes[0].name == "luenberger");
    CHECK(r.schemes[1].name == "gradient");
    CHECK(r.schemes[2].name == "cubic");
    CHECK(r.theta_true == std::vector<double>{1.0, 2.0});
    CHECK(r.x.all_finite());

    for (const auto& scheme : r.schemes) {
        CHECK(scheme.xhat.all_finite());
        // stored errors match a recomputation from stored trajectories bit for bit
        const Trajectory recomputed = r.x - scheme.xhat;
        CHECK(recomputed == scheme.error);
        REQUIRE(scheme.eps.size() == 2);
        const std::size_t w0 = r.window_start();
        for (std::size_t i = 0; i < 2; ++i) {
            double want = 0.0;
            for (std::size_t k = w0; k < r.grid.count(); ++k)
                want = std::max(want, std::abs(scheme.error.value(k, i)));
            CHECK(scheme.eps[i] == want);
        }
    }
    CHECK_FALSE(r.schemes[0].theta_hat.has_value());
    CHECK(r.schemes[1].theta_hat.has_value());
    CHECK(r.schemes[2].theta_hat.has_value());
    CHECK(r.schemes[1].theta_avg_err.has_value());

    REQUIRE(r.assumption2.size() == 2);
    REQUIRE(r.delta1.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(r.assumption2[i].max_abs_delta1 == r.delta1[i].max_abs());
        CHECK(r.assumption2[i].ok == (r.assumption2[i].max_abs_delta1 < 1.0));
    }
    CHECK(r.excitation_gradient > 0.0);
    CHECK(r.config_hash == scenario_hash(s));
}

TEST_CASE("run_scenario is deterministic across repeated runs") {
    const Scenario s = short_paper(1501);
    const ExperimentResult a = run_scenario(s);
    const ExperimentResult b = run_scenario(s);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.schemes[i].xhat == b.schemes[i].xhat);
        CHECK(a.schemes[i].error == b.schemes[i].error);
        CHECK(a.schemes[i].eps == b.schemes[i].eps);
    }
    CHECK(a.delta1[0] == b.delta1[0]);
    CHECK(a.delta1[1] == b.delta1[1]);
}

TEST_CASE("run_scenario names the failing stage") {
    Scenario s = short_paper(101);
    s.x0 = {1e308, 0.0};  // state derivative overflows immediately
    try {
        run_scenario(s);
        FAIL("expected runtime_error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("plant simulation") != std::string::npos);
    }
}

TEST_CASE("export_csv: layout, determinism, exact parse-back") {
    TempDir tmp("csv");
    const ExperimentResult r = run_scenario(short_paper(501));
    const auto files = export_csv(r, tmp.path);
    REQUIRE(files.size() == 4);  // theta1, theta2, e1, e2

    const CsvTable e1 = read_csv(tmp.path / "e1.csv");
    REQUIRE(e1.header ==
            std::vector<std::string>{"t", "scheme1", "scheme2", "scheme3"});
    REQUIRE(e1.columns[0].size() == r.grid.count());
    CHECK(e1.columns[0].front() == r.grid.t0());
    for (std::size_t k = 0; k < r.grid.count(); ++k) {
        CHECK(e1.columns[0][k] == r.grid.time_at(k));  // 17 digits round-trip exactly
        CHECK(e1.columns[1][k] == r.schemes[0].error.value(k, 0));
        CHECK(e1.columns[2][k] == r.schemes[1].error.value(k, 0));
        CHECK(e1.columns[3][k] == r.schemes[2].error.value(k, 0));
    }

    const CsvTable th1 = read_csv(tmp.path / "theta1.csv");
    for (std::size_t k = 0; k < r.grid.count(); ++k) {
        CHECK(std::isnan(th1.columns[1][k]));  // scheme 1 has no parameter estimate
        CHECK(th1.columns[2][k] == r.schemes[1].theta_hat->value(k, 0));
        CHECK(th1.columns[3][k] == r.schemes[2].theta_hat->value(k, 0));
    }

    const std::string before = slurp(tmp.path / "e2.csv");
    export_csv(r, tmp.path);
    CHECK(slurp(tmp.path / "e2.csv") == before);
}

TEST_CASE("metric fidelity: eps recomputed from the exported CSV matches") {
    TempDir tmp("fidelity");
    const ExperimentResult r = run_scenario(short_paper(501));
    export_csv(r, tmp.path);
    const std::size_t w0 = r.window_start();
    for (std::size_t i = 0; i < 2; ++i) {
        const CsvTable t = read_csv(tmp.path / ("e" + std::to_string(i + 1) + ".csv"));
        for (std::size_t s = 0; s < 3; ++s) {
            double eps = 0.0;
            for (std::size_t k = w0; k < t.columns[s + 1].size(); ++k)
                eps = std::max(eps, std::abs(t.columns[s + 1][k]));
            CHECK(eps == r.schemes[s].eps[i]);
        }
    }
}

TEST_CASE("export_svg: structure, unknown ids, determinism") {
    TempDir tmp("svg");
    const ExperimentResult r = run_scenario(short_paper(501));
    export_svg(r, "e1", tmp.path / "e1.svg");
    const std::string e1 = slurp(tmp.path / "e1.svg");
    CHECK(e1.find("<svg") != std::string::npos);
    std::size_t polylines = 0;
    for (std::size_t pos = 0; (pos = e1.find("<polyline", pos)) != std::string::npos; ++pos)
        ++polylines;
    CHECK(polylines == 3);

    export_svg(r, "theta1", tmp.path / "theta1.svg");
    const std::string t1 = slurp(tmp.path / "theta1.svg");
    polylines = 0;
    for (std::size_t pos = 0; (pos = t1.find("<polyline", pos)) != std::string::npos; ++pos)
        ++polylines;
    CHECK(polylines == 2);  // the full-order observer carries no estimate

    CHECK_THROWS_AS(export_svg(r, "nope", tmp.path / "x.svg"), std::invalid_argument);
    CHECK_THROWS_AS(export_svg(r, "theta9", tmp.path / "x.svg"), std::invalid_argument);

    export_svg(r, "e1", tmp.path / "e1_again.svg");
    CHECK(slurp(tmp.path / "e1_again.svg") == e1);
}

TEST_CASE("write_report emits the disturbance diagnostics") {
    TempDir tmp("report");
    const ExperimentResult r = run_scenario(short_paper(501));
    write_report(r, tmp.path / "report.json");
    const std::string report = slurp(tmp.path / "report.json");
    CHECK(report.find("assumption2") != std::string::npos);
    CHECK(report.find("max_abs_delta1") != std::string::npos);
    CHECK(report.find("config_hash") != std::string::npos);
    CHECK(report.find("theta_avg_err") != std::string::npos);
}

TEST_CASE("defect sweep returns one RMS per channel and scales down") {
    Scenario s = short_paper(4001);
    const auto rows = run_defect_sweep(s, {1.0, 0.5});
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].rms.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(rows[0].rms[i] > rows[1].rms[i]);
        CHECK(rows[1].rms[i] > 0.0);
    }
    Scenario z = s;
    z.disturbance = SignalSpec::zero();
    CHECK_THROWS_AS(cubic_defect_rms(z, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(run_defect_sweep(s, {}), std::invalid_argument);
}
