#pragma once

#include "wavelab/noise.hpp"
#include "wavelab/qv.hpp"
#include "wavelab/sigma.hpp"
#include "wavelab/wave.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wavelab {

/// V = int_{x-t}^{x+t} sigma(u(t - |x - y|, y))^2 dy by the trapezoid rule on the cone boundary.
double conditional_variance(const WaveField& field, double t, double x);

struct IncrementSample {
    double increment = 0.0;    ///< u(t + eps, x) - u(t, x)
    double variance = 0.0;     ///< V-hat
    double standardized = 0.0; ///< increment / sqrt(eps V-hat)
};

/// DegenerateInputError when V-hat is zero.
IncrementSample increment_sample(const WaveField& field, double t, double x, double eps);

enum class Standardization {
    ConditionalVariance, ///< divide by sqrt(eps V-hat)
    ExactShellArea,      ///< divide by c sqrt((t + eps)^2 - t^2); constant sigma = c only
};

struct CLTConfig {
    SigmaSpec sigma = SigmaSpec::linear(1.0);
    double h = 1.0 / 256;
    double t = 1.0;
    double x = 0.0;
    std::vector<double> eps{8.0 / 256};
    Standardization standardization = Standardization::ConditionalVariance;
    std::size_t replicates = 2000;
    std::uint64_t base_seed = 1;
    int workers = 0;
};

struct CLTRow {
    double eps = 0.0;
    std::size_t count = 0;
    double ks = 0.0;
    double critical = 0.0; ///< 1.358 / sqrt(n)
    bool pass = false;     ///< ks < critical
    double mean = 0.0;
    double variance = 0.0;
};

struct CLTReport {
    CLTConfig config;
    std::vector<CLTRow> rows;
    std::vector<std::string> warnings;
};

/// KS distance of standardized temporal increments to N(0, 1) per eps.
CLTReport clt_harness(const CLTConfig& config);

struct MartingalePoint {
    double h = 0.0;
    double martingale = 0.0; ///< M_h
    double remainder = 0.0;  ///< R_h = u(t + h, x) - u(t, x) - M_h
    double cell_area = 0.0;  ///< area of the truncated shell actually summed
};

/// Cells of Q(x, t + h) \ Q(x, t) whose center column satisfies |y - x| <= t.
std::vector<NoiseCell> truncated_shell_cells(LatticePoint apex, int extra_levels);

/// M_h weights each truncated-shell cell by sigma(u(r(y), y)), r(y) = max(t - |x - y|, 0).
std::vector<MartingalePoint> martingale_decomposition(const WaveField& field, const NoiseRealization& noise,
                                                      double t, double x, std::span<const double> h_grid);

struct MartingaleConfig {
    SigmaSpec sigma = SigmaSpec::linear(1.0);
    double h = 1.0 / 256; ///< lattice step
    double t = 1.0;
    double x = 0.0;
    std::vector<double> h_grid{2.0 / 256, 4.0 / 256, 8.0 / 256, 16.0 / 256, 32.0 / 256, 64.0 / 256};
    std::size_t replicates = 2000;
    std::uint64_t base_seed = 1;
    int workers = 0;
};

struct MartingaleRow {
    double h = 0.0;
    double mean_m = 0.0;
    double se_m = 0.0;
    double mean_m2 = 0.0;
    double m_l2 = 0.0;
    double r_l2 = 0.0;
    double mean_vhat = 0.0;
    double bracket_ratio = 0.0; ///< E[M_h^2] / (h E[V-hat])
    double cell_area = 0.0;
};

struct MartingaleReport {
    MartingaleConfig config;
    std::vector<MartingaleRow> rows;
    double m_exponent = 0.0;
    double m_exponent_se = 0.0;
    double r_exponent = 0.0;
    double r_exponent_se = 0.0;
    std::vector<std::string> warnings;
};

MartingaleReport martingale_study(const MartingaleConfig& config);

/// max over eps of |u(t + eps, x) - u(t, x)| / (sqrt(2 eps log log(1/eps)) sqrt(V-hat)).
double lil_statistic(const WaveField& field, double t, double x, std::span<const double> eps_grid);

/// Same statistic for a standard Brownian motion sampled at the grid (V = 1).
double brownian_lil_statistic(std::uint64_t seed, std::span<const double> eps_grid);

/// Validates an eps grid against a lattice step; ConfigError on eps < 2h or eps >= 1/e.
void check_lil_grid(double h, std::span<const double> eps_grid);

struct LILConfig {
    SigmaSpec sigma = SigmaSpec::constant(1.0);
    double h = 1.0 / 1024;
    double t = 1.0;
    double x = 0.0;
    std::vector<double> eps_grid{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    std::size_t replicates = 1000;
    std::size_t control_replicates = 20000;
    std::uint64_t base_seed = 1;
    int workers = 0;
};

struct Quartiles {
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
};

struct LILReport {
    LILConfig config;
    Quartiles field;
    Quartiles control;
    bool median_in_control_iqr = false;
    std::vector<std::string> warnings;
};

LILReport lil_study(const LILConfig& config);

struct HolderConfig {
    SigmaSpec sigma = SigmaSpec::linear(1.0);
    double h = 1.0 / 1024;
    double t = 1.0;
    double x = 0.0;
    std::vector<double> lags{1.0 / 512, 1.0 / 256, 1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4};
    std::size_t replicates = 500;
    std::uint64_t base_seed = 1;
    int workers = 0;
};

struct HolderReport {
    HolderConfig config;
    std::vector<double> temporal_ms; ///< E|u(t, x) - u(t - lag, x)|^2
    std::vector<double> spatial_ms;  ///< E|u(t, x + lag) - u(t, x)|^2
    double temporal_exponent = 0.0;
    double temporal_exponent_se = 0.0;
    double spatial_exponent = 0.0;
    double spatial_exponent_se = 0.0;
};

/// Log-log slopes of second moments of temporal and spatial increments versus lag.
HolderReport holder_study(const HolderConfig& config);

struct MomentConfig {
    SigmaSpec sigma = SigmaSpec::linear(1.0);
    double h = 1.0 / 64;
    double t = 1.0;
    double x = 0.0;
    std::size_t replicates = 1000;
    std::uint64_t base_seed = 1;
    int workers = 0;
};

struct MomentReport {
    MomentConfig config;
    double max_fourth_moment = 0.0;
    LatticePoint argmax;
    double second_moment_at_apex = 0.0;
};

/// Ensemble E[u^4] at every field point of the cone of (t, x); reports the maximum.
MomentReport moment_study(const MomentConfig& config);

} // namespace wavelab
