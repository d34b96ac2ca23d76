#include "fracflow/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fracflow/errors.hpp"

namespace fracflow {

namespace {

const Metric* find(const std::vector<Metric>& list, const std::string& name) {
    auto it = std::find_if(list.begin(), list.end(), [&](const Metric& m) { return m.name == name; });
    return it == list.end() ? nullptr : &*it;
}

}  // namespace

void Report::add_metric(const std::string& metric_name, double value) {
    require(std::isfinite(value), ErrorKind::domain,
            name + ": metric '" + metric_name + "' is not finite");
    metrics.push_back({metric_name, value});
}

void Report::add_tolerance(const std::string& tol_name, double value) {
    tolerances.push_back({tol_name, value});
}

double Report::metric(const std::string& metric_name) const {
    const Metric* m = find(metrics, metric_name);
    require(m != nullptr, ErrorKind::domain, name + ": no metric '" + metric_name + "'");
    return m->value;
}

double Report::tolerance(const std::string& tol_name) const {
    const Metric* m = find(tolerances, tol_name);
    require(m != nullptr, ErrorKind::domain, name + ": no tolerance '" + tol_name + "'");
    return m->value;
}

json Report::to_json() const {
    json j;
    j["name"] = name;
    j["pass"] = pass;
    j["applicable"] = applicable;
    j["inputs"] = inputs;
    json m = json::object();
    for (const auto& x : metrics) m[x.name] = x.value;
    j["metrics"] = m;
    json t = json::object();
    for (const auto& x : tolerances) t[x.name] = x.value;
    j["tolerances"] = t;
    j["notes"] = notes;
    j["artifacts"] = artifacts;
    return j;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string curve_csv(const Curve& curve) {
    std::ostringstream os;
    for (std::size_t c = 0; c < curve.columns.size(); ++c) os << (c ? "," : "") << curve.columns[c];
    os << '\n';
    char buf[32];
    for (const auto& row : curve.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", row[c]);
            os << (c ? "," : "") << buf;
        }
        os << '\n';
    }
    return os.str();
}

std::string curve_svg(const Curve& curve) {
    constexpr double W = 640, H = 400, pad = 50;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    auto tx = [&](double v) { return curve.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return curve.log_y ? std::log10(std::abs(v)) : v; };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& row : curve.rows) {
        const double x = tx(row[0]);
        if (!std::isfinite(x)) continue;
        x0 = std::min(x0, x), x1 = std::max(x1, x);
        for (std::size_t c = 1; c < row.size(); ++c) {
            const double y = ty(row[c]);
            if (std::isfinite(y)) y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<rect x=\"" << pad << "\" y=\"" << pad / 2 << "\" width=\"" << W - 1.5 * pad
       << "\" height=\"" << H - 1.5 * pad << "\" fill=\"none\" stroke=\"black\"/>\n"
       << "<text x=\"" << pad << "\" y=\"16\" font-size=\"12\">" << curve.name << "</text>\n";
    for (std::size_t c = 1; c < curve.columns.size(); ++c) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[(c - 1) % 6] << "\" points=\"";
        for (const auto& row : curve.rows) {
            const double x = tx(row[0]), y = ty(row[c]);
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            os << pad + (x - x0) / (x1 - x0) * (W - 1.5 * pad) << ','
               << H - pad - (y - y0) / (y1 - y0) * (H - 1.5 * pad) << ' ';
        }
        os << "\"/>\n<text x=\"" << W - pad * 3 << "\" y=\"" << pad / 2 + 14 * c << "\" font-size=\"11\" fill=\""
           << colors[(c - 1) % 6] << "\">" << curve.columns[c] << "</text>\n";
    }
    os << "<text x=\"" << pad << "\" y=\"" << H - 10 << "\" font-size=\"11\">" << curve.columns[0]
       << (curve.log_x ? " (log10)" : "") << " [" << format_number(x0) << ", " << format_number(x1)
       << "]" << (curve.log_y ? "  y log10" : "") << " [" << format_number(y0) << ", "
       << format_number(y1) << "]</text>\n</svg>\n";
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path.string());
    out << text;
    require(static_cast<bool>(out), ErrorKind::io, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_report(Report& report, const std::filesystem::path& dir, bool svg) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(!ec, ErrorKind::io, "cannot create " + dir.string());
    report.artifacts.clear();
    for (const auto& c : report.curves) {
        const auto base = dir / (report.name + "_" + c.name);
        write_text(base.string() + ".csv", curve_csv(c));
        report.artifacts.push_back(base.string() + ".csv");
        if (svg) {
            write_text(base.string() + ".svg", curve_svg(c));
            report.artifacts.push_back(base.string() + ".svg");
        }
    }
    write_text(dir / (report.name + ".json"), report.to_json().dump(2) + "\n");
}

}  // namespace fracflow
