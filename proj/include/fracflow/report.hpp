#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace fracflow {

using json = nlohmann::ordered_json;

struct Metric {
    std::string name;
    double value = 0.0;
};

/// Table with named columns, written as CSV and optionally as an SVG line plot
/// of every column against the first.
struct Curve {
    Curve() = default;
    Curve(std::string n, std::vector<std::string> cols, bool logx = false, bool logy = false)
        : name(std::move(n)), columns(std::move(cols)), log_x(logx), log_y(logy) {}

    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    bool log_x = false;
    bool log_y = false;
};

struct Report {
    Report() = default;
    explicit Report(std::string n) : name(std::move(n)) {}

    std::string name;
    json inputs = json::object();
    std::vector<Metric> metrics;
    std::vector<Metric> tolerances;
    bool pass = false;
    /// False when a precondition gate skipped the test; pass is then false too.
    bool applicable = true;
    std::vector<std::string> notes;
    std::vector<Curve> curves;
    std::vector<std::string> artifacts;

    /// Rejects non-finite values.
    void add_metric(const std::string& name, double value);
    void add_tolerance(const std::string& name, double value);
    [[nodiscard]] double metric(const std::string& name) const;
    [[nodiscard]] double tolerance(const std::string& name) const;
    [[nodiscard]] json to_json() const;
};

/// <dir>/<name>.json, one CSV per curve and, with svg set, one SVG per curve.
/// Fills report.artifacts with the written paths.
void write_report(Report& report, const std::filesystem::path& dir, bool svg);

std::string curve_csv(const Curve& curve);
std::string curve_svg(const Curve& curve);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Finite-aware number formatting for console lines.
std::string format_number(double v);

}  // namespace fracflow
