#pragma once

#include "wavelab/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace wavelab {

struct Metric {
    std::string name;
    double value = 0.0;
    double variance = 0.0;  ///< sample variance of the replicate values; 0 for derived quantities
    double std_error = 0.0; ///< sqrt(variance / count)
    std::size_t count = 0;
};

struct CheckResult {
    Threshold threshold;
    double value = 0.0;
    bool pass = false;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct EnsembleSummary {
    ExperimentConfig config;
    std::string version;
    Table table;
    std::vector<Metric> metrics;
    std::vector<CheckResult> checks;
    std::vector<std::string> warnings;
    /// Extra files for simulate: (file suffix, bytes).
    std::vector<std::pair<std::string, std::string>> attachments;

    bool passed() const;
    /// ConfigError if absent.
    const Metric& metric(const std::string& name) const;
};

/// Shortest round-trip decimal form; the CSV byte format.
std::string format_number(double v);

/// Runs a validated config. ConfigError when the config is invalid or a
/// threshold names an unknown metric.
EnsembleSummary run(const ExperimentConfig& config);

void write_csv(std::ostream& os, const Table& table);
nlohmann::ordered_json summary_json(const EnsembleSummary& summary);

/// Writes <out_dir>/<name>.csv and <name>.json (plus snapshots for simulate).
/// Error with file context on I/O failure. Returns the written paths.
std::vector<std::filesystem::path> write_artifacts(const EnsembleSummary& summary, const std::filesystem::path& out_dir);

} // namespace wavelab
