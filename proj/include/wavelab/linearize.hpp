#pragma once

#include "wavelab/heat.hpp"
#include "wavelab/sigma.hpp"
#include "wavelab/wave.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wavelab {

/// One replicate at one scale.
struct DefectSample {
    double increment = 0.0; ///< Y(t, x + s) - Y(t, x)
    double defect = 0.0;    ///< [u(t, x + s) - u(t, x)] - sigma(u(t, x)) [Y(t, x + s) - Y(t, x)]
};

/// Spatial defects of a coupled wave pair (u driven by sigma, Y by sigma = 1).
/// PreconditionError when the fields are not coupled or Y is not the linearization.
std::vector<DefectSample> wave_defect(const WaveField& u, const WaveField& y, double t, double x,
                                      std::span<const double> scales);

/// Same for a coupled heat pair (v, Z); scales are spatial offsets.
std::vector<DefectSample> heat_defect(const HeatField& v, const HeatField& z, double t, double x,
                                      std::span<const double> scales);

enum class Equation { Wave, Heat };

struct LinearizationConfig {
    Equation equation = Equation::Wave;
    SigmaSpec sigma = SigmaSpec::linear(1.0);
    double h = 1.0 / 256;       ///< wave lattice step or heat dx
    double t = 1.0;
    double x = 0.0;
    double circumference = 1.0; ///< heat only
    double dt = 0.0;            ///< heat only; 0 selects dx^2 / 4
    std::vector<double> scales{1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8};
    std::size_t replicates = 2000;
    std::uint64_t base_seed = 1;
    int workers = 0;
};

struct LinearizationRow {
    double scale = 0.0;
    double increment_norm = 0.0; ///< ensemble L2 norm of the linearized increment
    double defect_norm = 0.0;
    double ratio = 0.0;          ///< defect_norm / increment_norm
};

struct LinearizationReport {
    LinearizationConfig config;
    std::vector<LinearizationRow> rows; ///< ascending scale
    double slope = 0.0;                 ///< log-log slope of ratio against scale
    double slope_std_error = 0.0;
    std::string threshold_note = "defect thresholds are pilot-calibrated engineering choices";
    std::vector<std::string> warnings;

    /// ratio at the smallest scale over ratio at the largest scale
    double contrast() const;
};

/// Collapses per-replicate samples (replicate-major) into L2 norms and the ratio slope.
LinearizationReport summarize_defects(const LinearizationConfig& config,
                                      const std::vector<std::vector<DefectSample>>& samples);

LinearizationReport linearization_study(const LinearizationConfig& config);

} // namespace wavelab
