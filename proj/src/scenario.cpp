#include "observerlab/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace observerlab {

using nlohmann::json;

Scenario paper_scenario() {
    Scenario s;
    s.A = Matrix::from_rows({{0.0, 1.0}, {-9.0, 0.0}});
    s.B = {0.0, 1.0};
    s.C = {5.0, 0.0};
    s.x0 = {1.0, 2.0};
    s.xi0 = {0.0, 0.0};
    s.input = SignalSpec::unit_step();
    s.disturbance = SignalSpec::sinusoid(0.3, 1.0, 0.0);
    s.grid = TimeGrid(0.0, 1e-3, 60001);
    s.luenberger = LuenbergerConfig{{2.0, 3.2}, {0.0, 0.0}};
    s.drem_poles = {1.0};
    s.smoothing_pole = 1.0;
    s.cubic_poles = {2.0, 6.0};
    s.cubic_gamma = {1e11, 1e13};
    s.gradient_gamma = 1.0;
    s.output_dir = "out";
    return s;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw std::invalid_argument("config: " + field + ": " + what);
}

const json& need(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing");
    return *it;
}

double need_number(const json& j, const std::string& key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

std::vector<double> need_vector(const json& j, const std::string& key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_array()) fail(path + "." + key, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) fail(path + "." + key, "expected numbers only");
        out.push_back(e.get<double>());
    }
    return out;
}

Matrix need_matrix(const json& j, const std::string& key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_array() || v.empty()) fail(path + "." + key, "expected an array of rows");
    const std::size_t rows = v.size();
    std::size_t cols = 0;
    if (!v[0].is_array()) fail(path + "." + key, "expected rows to be arrays");
    cols = v[0].size();
    if (cols == 0) fail(path + "." + key, "rows must be non-empty");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!v[i].is_array() || v[i].size() != cols) fail(path + "." + key, "ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!v[i][c].is_number()) fail(path + "." + key, "expected numbers only");
            m(i, c) = v[i][c].get<double>();
        }
    }
    return m;
}

SignalSpec parse_signal(const json& j, const std::string& path) {
    const json& kindv = need(j, "kind", path);
    if (!kindv.is_string()) fail(path + ".kind", "expected a string");
    const std::string kind = kindv.get<std::string>();
    if (kind == "zero") return SignalSpec::zero();
    if (kind == "unit-step") return SignalSpec::unit_step();
    if (kind == "constant") return SignalSpec::constant(need_number(j, "value", path));
    if (kind == "sinusoid") {
        SignalSpec s = SignalSpec::sinusoid(need_number(j, "amplitude", path),
                                            need_number(j, "omega", path));
        if (j.contains("phase")) s.phase = need_number(j, "phase", path);
        if (s.amplitude < 0.0) fail(path + ".amplitude", "must be >= 0");
        return s;
    }
    if (kind == "gaussian-white") {
        const double sd = need_number(j, "stddev", path);
        if (sd < 0.0) fail(path + ".stddev", "must be >= 0");
        const json& seedv = need(j, "seed", path);
        if (!seedv.is_number_unsigned()) fail(path + ".seed", "expected an unsigned integer");
        return SignalSpec::gaussian_white(sd, seedv.get<std::uint64_t>());
    }
    if (kind == "custom-samples") {
        return SignalSpec::custom(need_vector(j, "samples", path));
    }
    fail(path + ".kind", "unknown kind '" + kind + "'");
}

json signal_to_json(const SignalSpec& s) {
    json j;
    switch (s.kind) {
        case SignalSpec::Kind::kZero: j["kind"] = "zero"; break;
        case SignalSpec::Kind::kUnitStep: j["kind"] = "unit-step"; break;
        case SignalSpec::Kind::kConstant:
            j["kind"] = "constant";
            j["value"] = s.value;
            break;
        case SignalSpec::Kind::kSinusoid:
            j["kind"] = "sinusoid";
            j["amplitude"] = s.amplitude;
            j["omega"] = s.omega;
            j["phase"] = s.phase;
            break;
        case SignalSpec::Kind::kGaussianWhite:
            j["kind"] = "gaussian-white";
            j["stddev"] = s.stddev;
            j["seed"] = s.seed;
            break;
        case SignalSpec::Kind::kCustomSamples:
            j["kind"] = "custom-samples";
            j["samples"] = s.samples;
            break;
    }
    return j;
}

TimeGrid parse_grid(const json& root) {
    double t0 = 0.0, step = 1e-3, horizon = 60.0;
    if (root.contains("grid")) {
        const json& g = root["grid"];
        if (!g.is_object()) fail("grid", "expected an object");
        if (g.contains("t0")) t0 = need_number(g, "t0", "grid");
        if (g.contains("step")) step = need_number(g, "step", "grid");
        if (g.contains("horizon")) horizon = need_number(g, "horizon", "grid");
    }
    if (!(step > 0.0)) fail("grid.step", "must be > 0");
    if (!(horizon > 0.0)) fail("grid.horizon", "must be > 0");
    const auto count = static_cast<std::size_t>(std::llround(horizon / step)) + 1;
    return TimeGrid(t0, step, count);
}

}  // namespace

void validate_scenario(const Scenario& s) {
    if (!s.A.square() || s.A.rows() == 0) fail("plant.A", "must be square and non-empty");
    const std::size_t n = s.A.rows();
    if (s.B.size() != n) fail("plant.B", "length must equal dim(A)");
    if (s.C.size() != n) fail("plant.C", "length must equal dim(A)");
    if (s.x0.size() != n) fail("plant.x0", "length must equal dim(A)");
    if (s.xi0.size() != n) fail("observer.xi0", "length must equal dim(A)");
    if (s.luenberger.L.size() != n) fail("observer.L", "length must equal dim(A)");
    if (s.luenberger.xhat0.size() != n) fail("observer.xhat0", "length must equal dim(A)");
    if (s.grid.count() < 2) fail("grid", "needs at least two samples (horizon too short)");
    if (s.drem_poles.size() != n - 1) fail("drem.filters", "need exactly dim-1 poles");
    for (std::size_t i = 0; i < s.drem_poles.size(); ++i)
        if (!(s.drem_poles[i] > 0.0))
            fail("drem.filters[" + std::to_string(i) + "]", "pole must be > 0");
    if (!(s.smoothing_pole > 0.0)) fail("smoothing.pole", "must be > 0");
    if (s.cubic_poles.size() != 2) fail("cubic.filters", "need exactly 2 poles");
    for (std::size_t i = 0; i < s.cubic_poles.size(); ++i)
        if (!(s.cubic_poles[i] > 0.0))
            fail("cubic.filters[" + std::to_string(i) + "]", "pole must be > 0");
    if (s.cubic_gamma.size() != n) fail("cubic.gamma", "need one gain per parameter");
    for (std::size_t i = 0; i < s.cubic_gamma.size(); ++i)
        if (!(s.cubic_gamma[i] > 0.0))
            fail("cubic.gamma[" + std::to_string(i) + "]", "must be > 0");
    if (!(s.gradient_gamma > 0.0)) fail("gradient.gamma", "must be > 0");
    if (s.input.kind == SignalSpec::Kind::kCustomSamples &&
        s.input.samples.size() != s.grid.count())
        fail("input.samples", "sample count must match the grid");
    if (s.disturbance.kind == SignalSpec::Kind::kCustomSamples &&
        s.disturbance.samples.size() != s.grid.count())
        fail("disturbance.samples", "sample count must match the grid");
}

Scenario load_scenario(const std::filesystem::path& config_path) {
    std::ifstream in(config_path);
    if (!in) {
        throw std::invalid_argument("config: cannot open '" + config_path.string() + "'");
    }
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: not valid JSON: " + std::string(e.what()));
    }

    Scenario s;
    const json& plant = need(root, "plant", "");
    s.A = need_matrix(plant, "A", "plant");
    s.B = need_vector(plant, "B", "plant");
    s.C = need_vector(plant, "C", "plant");
    s.x0 = need_vector(plant, "x0", "plant");

    const json& obs = need(root, "observer", "");
    s.xi0 = need_vector(obs, "xi0", "observer");
    s.luenberger.L = need_vector(obs, "L", "observer");
    s.luenberger.xhat0 = need_vector(obs, "xhat0", "observer");

    s.input = parse_signal(need(root, "input", ""), "input");
    s.disturbance = parse_signal(need(root, "disturbance", ""), "disturbance");
    s.grid = parse_grid(root);

    s.drem_poles = need_vector(need(root, "drem", ""), "filters", "drem");
    s.smoothing_pole = need_number(need(root, "smoothing", ""), "pole", "smoothing");
    const json& cubic = need(root, "cubic", "");
    s.cubic_poles = need_vector(cubic, "filters", "cubic");
    s.cubic_gamma = need_vector(cubic, "gamma", "cubic");
    s.gradient_gamma = need_number(need(root, "gradient", ""), "gamma", "gradient");

    if (root.contains("output_dir")) {
        const json& od = root["output_dir"];
        if (!od.is_string()) fail("output_dir", "expected a string");
        s.output_dir = od.get<std::string>();
    }

    validate_scenario(s);
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    json A = json::array();
    for (std::size_t i = 0; i < s.A.rows(); ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < s.A.cols(); ++c) row.push_back(s.A(i, c));
        A.push_back(row);
    }
    j["plant"] = {{"A", A}, {"B", s.B}, {"C", s.C}, {"x0", s.x0}};
    j["observer"] = {{"xi0", s.xi0}, {"L", s.luenberger.L}, {"xhat0", s.luenberger.xhat0}};
    j["input"] = signal_to_json(s.input);
    j["disturbance"] = signal_to_json(s.disturbance);
    j["grid"] = {{"t0", s.grid.t0()},
                 {"step", s.grid.step()},
                 {"horizon", s.grid.step() * static_cast<double>(s.grid.count() - 1)}};
    j["drem"] = {{"filters", s.drem_poles}};
    j["smoothing"] = {{"pole", s.smoothing_pole}};
    j["cubic"] = {{"filters", s.cubic_poles}, {"gamma", s.cubic_gamma}};
    j["gradient"] = {{"gamma", s.gradient_gamma}};
    j["output_dir"] = s.output_dir;
    return j.dump(2) + "\n";
}

std::uint64_t scenario_hash(const Scenario& s) {
    const std::string canon = scenario_to_json(s);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::filesystem::path resolve_output_dir(const Scenario& s) {
    if (const char* env = std::getenv("OBSERVER_LAB_OUT"); env && *env) {
        return std::filesystem::path(env);
    }
    return std::filesystem::path(s.output_dir);
}

}  // namespace observerlab
