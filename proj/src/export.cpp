#include "observerlab/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace observerlab {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_fixed(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string fmt_label(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

void write_file(const std::filesystem::path& file, const std::string& contents) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw std::runtime_error("export: cannot open '" + file.string() + "' for writing");
    }
    out << contents;
    if (!out) {
        throw std::runtime_error("export: write failed for '" + file.string() + "'");
    }
}

// figure id -> one scalar series per scheme (empty optional = no curve)
struct FigureData {
    std::string title;
    std::array<std::optional<Signal>, 3> series;
};

FigureData figure_data(const ExperimentResult& r, const std::string& id) {
    const std::size_t n = r.x.dim();
    auto parse_index = [&](std::size_t prefix_len) -> std::size_t {
        const std::string num = id.substr(prefix_len);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("export_svg: unknown figure id '" + id + "'");
        }
        const std::size_t i = std::stoul(num);
        if (i < 1 || i > n) {
            throw std::invalid_argument("export_svg: figure index out of range in '" + id + "'");
        }
        return i - 1;
    };

    FigureData fd;
    if (id.rfind("theta", 0) == 0) {
        const std::size_t i = parse_index(5);
        fd.title = "parameter estimate theta" + std::to_string(i + 1);
        for (std::size_t s = 0; s < 3; ++s) {
            if (r.schemes[s].theta_hat) fd.series[s] = r.schemes[s].theta_hat->component(i);
        }
        return fd;
    }
    if (id.rfind("e", 0) == 0) {
        const std::size_t i = parse_index(1);
        fd.title = "state estimation error e" + std::to_string(i + 1);
        for (std::size_t s = 0; s < 3; ++s) fd.series[s] = r.schemes[s].error.component(i);
        return fd;
    }
    throw std::invalid_argument("export_svg: unknown figure id '" + id + "'");
}

}  // namespace

std::vector<std::string> figure_ids(const ExperimentResult& r) {
    std::vector<std::string> ids;
    for (std::size_t i = 1; i <= r.x.dim(); ++i) ids.push_back("theta" + std::to_string(i));
    for (std::size_t i = 1; i <= r.x.dim(); ++i) ids.push_back("e" + std::to_string(i));
    return ids;
}

std::vector<std::filesystem::path> export_csv(const ExperimentResult& r,
                                              const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const std::string& id : figure_ids(r)) {
        const FigureData fd = figure_data(r, id);
        std::string body;
        body.reserve(r.grid.count() * 80);
        body += "t,scheme1,scheme2,scheme3\n";
        const double qnan = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t k = 0; k < r.grid.count(); ++k) {
            body += fmt17(r.grid.time_at(k));
            for (std::size_t s = 0; s < 3; ++s) {
                body += ',';
                body += fmt17(fd.series[s] ? (*fd.series[s])[k] : qnan);
            }
            body += '\n';
        }
        const std::filesystem::path file = dir / (id + ".csv");
        write_file(file, body);
        written.push_back(file);
    }
    return written;
}

void export_svg(const ExperimentResult& r, const std::string& figure_id,
                const std::filesystem::path& file) {
    if (r.grid.count() < 2) {
        throw std::invalid_argument("export_svg: result has no usable samples");
    }
    const FigureData fd = figure_data(r, figure_id);

    constexpr double W = 960, H = 540;
    constexpr double ml = 70, mr = 20, mt = 40, mb = 50;
    const double plot_w = W - ml - mr;
    const double plot_h = H - mt - mb;

    const double x_min = r.grid.t0();
    const double x_max = r.grid.t_end();
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -std::numeric_limits<double>::infinity();
    for (const auto& s : fd.series) {
        if (!s) continue;
        for (double v : s->values()) {
            if (!std::isfinite(v)) continue;
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    }
    if (!(y_min <= y_max)) {
        y_min = -1.0;
        y_max = 1.0;
    }
    if (y_min == y_max) {
        y_min -= 1.0;
        y_max += 1.0;
    }
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    auto X = [&](double t) { return ml + (t - x_min) / (x_max - x_min) * plot_w; };
    auto Y = [&](double v) { return mt + (y_max - v) / (y_max - y_min) * plot_h; };

    static const char* kColors[3] = {"#1f77b4", "#d62728", "#2ca02c"};
    static const char* kNames[3] = {"scheme 1", "scheme 2", "scheme 3"};

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"540\" "
           "viewBox=\"0 0 960 540\">\n";
    svg += "<rect width=\"960\" height=\"540\" fill=\"white\"/>\n";
    svg += "<text x=\"480\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + fd.title + "</text>\n";

    // axes + ticks
    svg += "<rect x=\"" + fmt_fixed(ml, 1) + "\" y=\"" + fmt_fixed(mt, 1) + "\" width=\"" +
           fmt_fixed(plot_w, 1) + "\" height=\"" + fmt_fixed(plot_h, 1) +
           "\" fill=\"none\" stroke=\"#333333\"/>\n";
    constexpr int kTicks = 6;
    for (int i = 0; i <= kTicks; ++i) {
        const double ft = static_cast<double>(i) / kTicks;
        const double tx = x_min + ft * (x_max - x_min);
        const double px = X(tx);
        svg += "<line x1=\"" + fmt_fixed(px, 1) + "\" y1=\"" + fmt_fixed(mt + plot_h, 1) +
               "\" x2=\"" + fmt_fixed(px, 1) + "\" y2=\"" + fmt_fixed(mt + plot_h + 5, 1) +
               "\" stroke=\"#333333\"/>\n";
        svg += "<text x=\"" + fmt_fixed(px, 1) + "\" y=\"" + fmt_fixed(mt + plot_h + 20, 1) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt_label(tx) + "</text>\n";
        const double vy = y_min + ft * (y_max - y_min);
        const double py = Y(vy);
        svg += "<line x1=\"" + fmt_fixed(ml - 5, 1) + "\" y1=\"" + fmt_fixed(py, 1) + "\" x2=\"" +
               fmt_fixed(ml, 1) + "\" y2=\"" + fmt_fixed(py, 1) + "\" stroke=\"#333333\"/>\n";
        svg += "<text x=\"" + fmt_fixed(ml - 8, 1) + "\" y=\"" + fmt_fixed(py + 4, 1) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt_label(vy) + "</text>\n";
    }
    svg += "<text x=\"" + fmt_fixed(ml + plot_w / 2, 1) + "\" y=\"" + fmt_fixed(H - 10, 1) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">t, s</text>\n";

    // polylines, uniformly strided so files stay reviewable
    const std::size_t stride = std::max<std::size_t>(1, (r.grid.count() - 1) / 2000);
    for (std::size_t s = 0; s < 3; ++s) {
        if (!fd.series[s]) continue;
        const Signal& sig = *fd.series[s];
        std::string pts;
        for (std::size_t k = 0; k < r.grid.count(); k += stride) {
            pts += fmt_fixed(X(r.grid.time_at(k)), 2) + "," + fmt_fixed(Y(sig[k]), 2) + " ";
        }
        if ((r.grid.count() - 1) % stride != 0) {
            const std::size_t k = r.grid.count() - 1;
            pts += fmt_fixed(X(r.grid.time_at(k)), 2) + "," + fmt_fixed(Y(sig[k]), 2) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(kColors[s]) +
               "\" stroke-width=\"1.2\" points=\"" + pts + "\"/>\n";
    }

    // legend
    double ly = mt + 14;
    for (std::size_t s = 0; s < 3; ++s) {
        if (!fd.series[s]) continue;
        svg += "<line x1=\"" + fmt_fixed(ml + plot_w - 130, 1) + "\" y1=\"" + fmt_fixed(ly - 4, 1) +
               "\" x2=\"" + fmt_fixed(ml + plot_w - 105, 1) + "\" y2=\"" + fmt_fixed(ly - 4, 1) +
               "\" stroke=\"" + kColors[s] + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt_fixed(ml + plot_w - 100, 1) + "\" y=\"" + fmt_fixed(ly, 1) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + kNames[s] + "</text>\n";
        ly += 18;
    }
    svg += "</svg>\n";
    write_file(file, svg);
}

std::vector<std::filesystem::path> export_all_svg(const ExperimentResult& r,
                                                  const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const std::string& id : figure_ids(r)) {
        const std::filesystem::path file = dir / (id + ".svg");
        export_svg(r, id, file);
        written.push_back(file);
    }
    return written;
}

void write_report(const ExperimentResult& r, const std::filesystem::path& file) {
    using nlohmann::json;
    json j;
    {
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(r.config_hash));
        j["provenance"] = {{"config_hash", hash},
                           {"seed", r.seed},
                           {"grid", {{"t0", r.grid.t0()},
                                     {"step", r.grid.step()},
                                     {"count", r.grid.count()}}}};
    }
    {
        json ch = json::array();
        for (const auto& a : r.assumption2) {
            ch.push_back({{"max_abs_delta1", a.max_abs_delta1}, {"ok", a.ok}});
        }
        j["assumption2"] = ch;
    }
    j["excitation"] = {{"gradient", r.excitation_gradient}, {"cubic", r.excitation_cubic}};
    j["substeps"] = {{"gradient", r.gradient_substeps},
                     {"gradient_capped", r.gradient_capped},
                     {"cubic", r.cubic_substeps},
                     {"cubic_capped", r.cubic_capped}};
    j["cubic_regressor_scale"] = r.cubic_regressor_scale;
    {
        json schemes = json::array();
        for (const auto& s : r.schemes) {
            json e = {{"name", s.name},
                      {"eps", s.eps},
                      {"terminal_error", s.terminal_error}};
            if (s.theta_avg_err) e["theta_avg_err"] = *s.theta_avg_err;
            schemes.push_back(e);
        }
        j["metrics"] = {{"window", "final 20% of the horizon"}, {"schemes", schemes}};
    }
    write_file(file, j.dump(2) + "\n");
}

CsvTable read_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw std::runtime_error("read_csv: cannot open '" + file.string() + "'");
    }
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("read_csv: empty file '" + file.string() + "'");
    }
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    table.columns.resize(table.header.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= table.columns.size()) {
                throw std::runtime_error("read_csv: ragged row in '" + file.string() + "'");
            }
            table.columns[c++].push_back(std::strtod(cell.c_str(), nullptr));
        }
        if (c != table.columns.size()) {
            throw std::runtime_error("read_csv: ragged row in '" + file.string() + "'");
        }
    }
    return table;
}

}  // namespace observerlab
