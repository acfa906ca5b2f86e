#pragma once

#include "wavelab/linearize.hpp"
#include "wavelab/sigma.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace wavelab {

enum class ExperimentKind { Simulate, QvTime, QvSpace, Clt, Lil, Mart, Linearize, Holder, Moments };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& text);

struct Threshold {
    std::string metric;
    std::optional<double> min;
    std::optional<double> max;

    bool admits(double v) const { return (!min || v >= *min) && (!max || v <= *max); }
};

/// One schema for every subcommand. Numbers may be given as JSON numbers or
/// as strings of the form "1/256" or "2^-8".
struct ExperimentConfig {
    std::string name = "experiment";
    ExperimentKind kind = ExperimentKind::QvTime;
    Equation equation = Equation::Wave;
    SigmaSpec sigma = SigmaSpec::linear(1.0);

    double h = 1.0 / 256; ///< wave lattice step
    double t = 1.0;
    double x = 0.0;
    double x_lo = 0.0;
    double x_hi = 1.0;

    double dx = 1.0 / 256; ///< heat grid
    double dt = 0.0;
    double circumference = 1.0;

    std::vector<int> partitions{8, 16, 32, 64};
    std::vector<double> p_values{2.0, 4.0};
    bool ladder = true;
    std::vector<double> eps{8.0 / 256};
    bool exact_standardization = false;
    std::vector<double> eps_grid{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    std::vector<double> h_grid{2.0 / 256, 4.0 / 256, 8.0 / 256, 16.0 / 256, 32.0 / 256, 64.0 / 256};
    std::vector<double> lags{1.0 / 512, 1.0 / 256, 1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4};
    std::vector<double> scales{1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8};

    std::size_t replicates = 1000;
    std::size_t control_replicates = 20000;
    std::uint64_t seed = 1;
    int workers = 0;
    std::string out_dir = "out";
    bool snapshots = false;

    std::vector<Threshold> thresholds;

    nlohmann::ordered_json to_json() const;
    /// ConfigError on unknown keys or malformed values.
    static ExperimentConfig from_json(const nlohmann::json& j);
};

/// Reads a JSON config file; ConfigError with file context on I/O or parse failure.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies "key=value" where value is JSON (bare words are taken as strings).
void apply_override(ExperimentConfig& config, const std::string& assignment);

/// Parses a number or a "p/q" or "2^k" string.
double parse_scalar(const nlohmann::json& j, const std::string& key);

struct ValidationIssue {
    std::string rule;
    std::string message;
    std::string suggestion;
};

struct ValidationResult {
    std::vector<ValidationIssue> issues;
    std::vector<int> admissible_partitions; ///< echoed for qv kinds

    bool ok() const { return issues.empty(); }
};

ValidationResult validate(const ExperimentConfig& config);

} // namespace wavelab
