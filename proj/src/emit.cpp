#include "wavespeed/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace wavespeed {

namespace {

std::ofstream open_or_throw(const std::string& path, std::ios::openmode mode = std::ios::out)
{
    std::ofstream out(path, mode);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    return out;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double finite_min_speed(const SweepResult& result)
{
    double mn = std::numeric_limits<double>::infinity();
    for (int ik = 0; ik < result.nk(); ++ik)
        for (int id = 0; id < result.nd(); ++id) {
            const double s = result.speed(ik, id);
            if (std::isfinite(s))
                mn = std::min(mn, s);
        }
    if (!std::isfinite(mn))
        throw std::runtime_error("no finite cells");
    return mn;
}

}  // namespace

void write_speeds_csv(const SweepResult& result, const std::string& path)
{
    auto out = open_or_throw(path);
    out << "k\\d";
    for (int id = 0; id < result.nd(); ++id)
        out << ',' << fmt(result.plan.d.at(id));
    out << '\n';
    for (int ik = 0; ik < result.nk(); ++ik) {
        out << fmt(result.plan.k.at(ik));
        for (int id = 0; id < result.nd(); ++id) {
            const double s = result.speed(ik, id);
            out << ',' << (std::isfinite(s) ? fmt(s) : std::string("nan"));
        }
        out << '\n';
    }
}

void write_flags_csv(const SweepResult& result, const std::string& path)
{
    auto out = open_or_throw(path);
    out << "k\\d";
    for (int id = 0; id < result.nd(); ++id)
        out << ',' << fmt(result.plan.d.at(id));
    out << '\n';
    for (int ik = 0; ik < result.nk(); ++ik) {
        out << fmt(result.plan.k.at(ik));
        for (int id = 0; id < result.nd(); ++id) {
            const CellResult& c = result.cell(ik, id);
            out << ',' << (c.failed ? std::string("Failed") : flag::to_string(c.estimate.flags));
        }
        out << '\n';
    }
}

void write_contours_json(const ContourSet& contours, const std::string& path)
{
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t li = 0; li < contours.levels.size(); ++li) {
        nlohmann::json entry;
        entry["level"] = contours.levels[li];
        nlohmann::json lines = nlohmann::json::array();
        for (const auto& line : contours.polylines[li]) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& p : line)
                pts.push_back({p[0], p[1]});
            lines.push_back(std::move(pts));
        }
        entry["polylines"] = std::move(lines);
        arr.push_back(std::move(entry));
    }
    auto out = open_or_throw(path);
    out << arr.dump(2) << "\n";
}

void write_heatmap_pgm(const SweepResult& result, const std::string& path)
{
    const double mn = finite_min_speed(result);
    const int nd = result.nd();
    const int nk = result.nk();

    auto out = open_or_throw(path, std::ios::out | std::ios::binary);
    out << "P5\n" << nd << ' ' << nk << "\n255\n";
    // Row 0 is the largest k so the image reads with k increasing upward.
    for (int ik = nk - 1; ik >= 0; --ik) {
        for (int id = 0; id < nd; ++id) {
            const double s = result.speed(ik, id);
            unsigned char pixel = 0;
            if (std::isfinite(s) && mn < 0.0) {
                const double t = std::clamp((s - mn) / (0.0 - mn), 0.0, 1.0);
                pixel = static_cast<unsigned char>(std::llround(255.0 * t));
            } else if (std::isfinite(s)) {
                pixel = 255;
            }
            out.put(static_cast<char>(pixel));
        }
    }
}

void write_heatmap_svg(const SweepResult& result, const ContourSet& contours,
                       const std::string& path)
{
    const double mn = finite_min_speed(result);
    const int nd = result.nd();
    const int nk = result.nk();
    const double margin = 40.0, plot_w = 600.0, plot_h = 480.0;
    const double d0 = result.plan.d.at(0), d1 = result.plan.d.at(nd - 1);
    const double k0 = result.plan.k.at(0), k1 = result.plan.k.at(nk - 1);
    const double dspan = (d1 > d0) ? d1 - d0 : 1.0;
    const double kspan = (k1 > k0) ? k1 - k0 : 1.0;
    const auto px = [&](double d) { return margin + (d - d0) / dspan * plot_w; };
    const auto py = [&](double k) { return margin + (k1 - k) / kspan * plot_h; };

    auto out = open_or_throw(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << margin * 2 + plot_w
        << "\" height=\"" << margin * 2 + plot_h << "\">\n";

    const double cell_w = plot_w / std::max(nd - 1, 1);
    const double cell_h = plot_h / std::max(nk - 1, 1);
    char buf[240];
    for (int ik = 0; ik < nk; ++ik) {
        for (int id = 0; id < nd; ++id) {
            const double s = result.speed(ik, id);
            int rr = 160, gg = 160, bb = 160;  // masked cells in gray
            if (std::isfinite(s)) {
                const double t =
                    (mn < 0.0) ? std::clamp((s - mn) / (0.0 - mn), 0.0, 1.0) : 1.0;
                // dark blue (most negative) to white (zero)
                rr = static_cast<int>(std::llround(255.0 * t));
                gg = static_cast<int>(std::llround(255.0 * t));
                bb = static_cast<int>(std::llround(128.0 + 127.0 * t));
            }
            std::snprintf(buf, sizeof(buf),
                          "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" "
                          "fill=\"rgb(%d,%d,%d)\"/>\n",
                          px(result.plan.d.at(id)) - cell_w / 2,
                          py(result.plan.k.at(ik)) - cell_h / 2, cell_w, cell_h, rr, gg, bb);
            out << buf;
        }
    }

    for (std::size_t li = 0; li < contours.levels.size(); ++li) {
        const bool zero_level = std::abs(contours.levels[li]) < 1e-12;
        for (const auto& line : contours.polylines[li]) {
            out << "<polyline fill=\"none\" stroke=\"" << (zero_level ? "white" : "black")
                << "\" stroke-width=\"1.2\"";
            if (zero_level)
                out << " stroke-dasharray=\"6,4\"";
            out << " points=\"";
            for (const auto& p : line) {
                std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", px(p[0]), py(p[1]));
                out << buf;
            }
            out << "\"/>\n";
        }
    }

    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\">d</text>\n"
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\">k</text>\n",
                  margin + plot_w / 2, margin * 2 + plot_h - 8.0, 8.0, margin + plot_h / 2);
    out << buf;
    out << "</svg>\n";
}

void write_metadata_json(const SweepResult& result, const std::string& path)
{
    nlohmann::json j;
    j["plan_hash"] = result.plan_hash;
    j["wall_seconds"] = result.wall_seconds;
    j["d"] = {{"min", result.plan.d.min}, {"max", result.plan.d.max}, {"step", result.plan.d.step}};
    j["k"] = {{"min", result.plan.k.min}, {"max", result.plan.k.max}, {"step", result.plan.k.step}};
    j["appendix_protocol"] = result.plan.appendix_protocol;
    j["scheme"] = {{"domain_length", result.plan.domain_length},
                   {"dx", result.plan.dx},
                   {"dt", result.plan.dt},
                   {"t_final", result.plan.t_final},
                   {"window", {result.plan.window_start, result.plan.window_end}}};
    auto out = open_or_throw(path);
    out << j.dump(2) << "\n";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

SweepResult read_sweep_csv(const std::string& speeds_path, const std::string& flags_path)
{
    std::ifstream speeds(speeds_path);
    if (!speeds)
        throw std::runtime_error("cannot open " + speeds_path);
    std::ifstream flags(flags_path);
    if (!flags)
        throw std::runtime_error("cannot open " + flags_path);

    std::string line;
    if (!std::getline(speeds, line))
        throw std::runtime_error("empty speeds file: " + speeds_path);
    const auto header = split_csv_line(line);
    if (header.size() < 2)
        throw std::runtime_error("malformed speeds header: " + speeds_path);

    std::vector<double> d_axis;
    for (std::size_t i = 1; i < header.size(); ++i)
        d_axis.push_back(std::stod(header[i]));

    std::vector<double> k_axis;
    std::vector<std::vector<double>> values;
    while (std::getline(speeds, line)) {
        if (line.empty())
            continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error("ragged speeds row in " + speeds_path);
        k_axis.push_back(std::stod(cells[0]));
        std::vector<double> row;
        for (std::size_t i = 1; i < cells.size(); ++i)
            row.push_back(cells[i] == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                            : std::stod(cells[i]));
        values.push_back(std::move(row));
    }
    if (d_axis.size() < 2 || k_axis.size() < 2)
        throw std::runtime_error("sweep grid needs at least 2x2 cells: " + speeds_path);

    SweepResult result;
    result.plan.d = AxisRange{d_axis.front(), d_axis.back(), d_axis[1] - d_axis[0]};
    result.plan.k = AxisRange{k_axis.front(), k_axis.back(), k_axis[1] - k_axis[0]};
    result.cells.assign(values.size() * d_axis.size(), CellResult{});
    result.plan_hash = result.plan.hash();

    std::getline(flags, line);  // header
    std::size_t ik = 0;
    while (std::getline(flags, line)) {
        if (line.empty())
            continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size() || ik >= values.size())
            throw std::runtime_error("flags file does not match speeds file: " + flags_path);
        for (std::size_t id = 0; id + 1 < cells.size(); ++id) {
            CellResult& c = result.cells[ik * d_axis.size() + id];
            if (cells[id + 1] == "Failed") {
                c.failed = true;
            } else {
                c.estimate.flags = flag::from_string(cells[id + 1]);
                c.estimate.speed = values[ik][id];
            }
        }
        ++ik;
    }
    if (ik != values.size())
        throw std::runtime_error("flags file does not match speeds file: " + flags_path);
    return result;
}

}  // namespace wavespeed
