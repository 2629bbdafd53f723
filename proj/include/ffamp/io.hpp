#pragma once

#include "ffamp/analysis.hpp"
#include "ffamp/montecarlo.hpp"

#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ffamp {

enum class OutputFormat { Csv, Json };
OutputFormat parse_output_format(std::string_view name);

/// Ordered key/value record; serialized as a flat JSON object or as
/// `key,value` CSV rows.
using Record = std::vector<std::pair<std::string, double>>;

/// Column-oriented numeric table; CSV with a header row or a JSON array of
/// objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// 12 significant digits, shortest form ("%.12g").
std::string format_number(double x);

Table to_table(const SweepTrace& trace);
Table to_table(const OracleReport& report);
Table to_table(const FormulaComparison& comparison);
Record to_record(const SnrReport& report);
Record to_record(const FitResult& fit);

void write(std::ostream& os, const Table& table, OutputFormat format);
void write(std::ostream& os, const Record& record, OutputFormat format);

/// Writes to a sibling temporary file and renames it into place, so a failed
/// write never leaves a partial file at `path`. Throws std::runtime_error
/// naming the path on I/O failure.
void emit(const Table& table, const std::filesystem::path& path, OutputFormat format);
void emit(const Record& record, const std::filesystem::path& path, OutputFormat format);

SnrReport parse_snr_report_json(const std::string& text);
/// Reads a `phase_rad,variance_linear,variance_db` CSV.
SweepTrace parse_sweep_csv(std::istream& is, bool detected);
SweepTrace read_sweep_csv(const std::filesystem::path& path, bool detected);

/// JSON configuration document for the command-line tool.
struct Config {
    NetworkParams network;
    double phi = std::numbers::pi / 2;
    std::size_t sweep_points = kDefaultSweepPoints;
    SpectrumFormula formula = SpectrumFormula::Paper;
    bool detected = false;
    FitDomain fit_domain = FitDomain::Linear;
    std::optional<SnrLevels> snr;
    SimConfig simulation;
    std::vector<double> mc_phis{0.0, std::numbers::pi / 4, std::numbers::pi / 2};
    std::size_t mc_segments = kDefaultSegments;
};

/// Throws std::invalid_argument on unknown keys or out-of-range values.
Config parse_config(const std::string& json_text);
Config load_config(const std::filesystem::path& path);

}  // namespace ffamp
