#pragma once

#include "wavelab/lattice.hpp"
#include "wavelab/noise.hpp"
#include "wavelab/sigma.hpp"
#include "wavelab/wave.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace wavelab {

/// t_i = (i - 1) t / N, i = 1 .. N + 1, at fixed x.
struct TemporalPartition {
    double t = 0.0;
    double x = 0.0;
    int N = 0;
    LatticePoint apex;  ///< (t, x)
    int step = 0;       ///< lattice levels per interval; always even

    int level(int i) const { return (i - 1) * step; }

    /// AlignmentError unless every (t_i, x) is a field point; the message lists admissible N.
    static TemporalPartition align(double h, double t, double x, int N);
};

/// x_i = X1 + (i - 1)(X2 - X1) / N, i = 1 .. N + 1, at fixed t.
struct SpatialPartition {
    double t = 0.0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    int N = 0;
    int level = 0;
    int m_first = 0;
    int step = 0; ///< lattice columns per interval; always even

    int column(int i) const { return m_first + (i - 1) * step; }
    double delta(double h) const { return step * h; }

    static SpatialPartition align(double h, double t, double x_lo, double x_hi, int N);
};

/// Partition sizes N for which the temporal partition is lattice-aligned.
std::vector<int> admissible_temporal_n(double h, double t, double x);
std::vector<int> admissible_spatial_n(double h, double t, double x_lo, double x_hi);

/// Cells of Q(x, t_{i+1}) \ Q(x, t_i) for i = 1 .. N (index i - 1).
std::vector<std::vector<NoiseCell>> temporal_shells(const TemporalPartition& part);
/// Level of r_i(y) = max(t_i - |x - y|, 0) at column m.
int temporal_boundary_level(const TemporalPartition& part, int i, int m);

struct SpatialShell {
    std::vector<NoiseCell> left;  ///< L_i = Q(x_i, t) \ Q(x_{i+1}, t)
    std::vector<NoiseCell> right; ///< R_i = Q(x_{i+1}, t) \ Q(x_i, t)
};
std::vector<SpatialShell> spatial_shells(const SpatialPartition& part);
/// Level of v_i(y) = max(t + y - x_{i+1}, 0) on L_i.
int spatial_left_boundary_level(const SpatialPartition& part, int i, int m);
/// Level of v_i(y) = max(t - y + x_i, 0) on R_i.
int spatial_right_boundary_level(const SpatialPartition& part, int i, int m);
/// |L_i| = |R_i| = t delta - delta^2 / 4 for cones at distance delta.
inline double spatial_shell_area(double t, double delta) { return t * delta - delta * delta / 4.0; }

double temporal_qv(const WaveField& field, const TemporalPartition& part);
double spatial_qv(const WaveField& field, const SpatialPartition& part);

struct TemporalLimit {
    /// sum over cells of Q(x, t) of area * sigma(u(bottom vertex))^2
    double cell_form = 0.0;
    /// column-wise trapezoid of int dy int_{|x-y|}^{t} sigma(u(tau - |x - y|, y))^2 dtau
    double characteristic_form = 0.0;
};

TemporalLimit temporal_qv_limit_forms(const WaveField& field, double t, double x);
/// Limit functional of the temporal sums (cell form).
double temporal_qv_limit(const WaveField& field, double t, double x);

/// D(t) = int_{X1}^{X2} int_0^t sigma(u(s, x - (t - s)))^2 + sigma(u(s, x + (t - s)))^2 ds dx.
double spatial_qv_limit(const WaveField& field, double t, double x_lo, double x_hi);

/// 2 t int_{X1}^{X2} sigma(u(t, x))^2 dx.
double naive_qv_prediction(const WaveField& field, double t, double x_lo, double x_hi);

struct LadderValues {
    double a = 0.0; ///< the quadratic-variation sum
    double b = 0.0; ///< frozen-weight noise sum
    double c = 0.0; ///< frozen-weight quadrature
    double d = 0.0; ///< limit functional
};

/// A_N, B_N, C_N, D for several partitions sharing one apex; noise is read once per cell.
std::vector<LadderValues> proof_ladder_temporal(const WaveField& field, const NoiseRealization& noise,
                                                std::span<const TemporalPartition> parts);
LadderValues proof_ladder_temporal(const WaveField& field, const NoiseRealization& noise,
                                   const TemporalPartition& part);
LadderValues proof_ladder_spatial(const WaveField& field, const NoiseRealization& noise,
                                  const SpatialPartition& part);

struct QVStudyConfig {
    SigmaSpec sigma = SigmaSpec::linear(1.0);
    double h = 1.0 / 256;
    double t = 1.0;
    double x = 0.0;
    double x_lo = 0.0;
    double x_hi = 1.0;
    bool spatial = false;
    std::vector<int> n_ladder{8, 16, 32, 64};
    std::vector<double> p_values{2.0, 4.0};
    bool with_ladder = true;
    std::size_t replicates = 1000;
    std::uint64_t base_seed = 1;
    int workers = 0;
};

struct ReportRow {
    int n = 0;
    double p = 0.0;
    std::string statistic;
    double value = 0.0;
    double std_error = 0.0;
};

struct SlopeFit {
    std::string name;
    double p = 0.0;
    double slope = 0.0;
    double std_error = 0.0;
    std::size_t points = 0;
};

struct QVReport {
    QVStudyConfig config;
    std::vector<ReportRow> rows;
    std::vector<SlopeFit> fits;
    std::vector<std::string> warnings;

    const ReportRow& row(int n, const std::string& statistic, double p = 0.0) const;
    const SlopeFit& fit(const std::string& name, double p = 0.0) const;
};

/// Dyadic-ladder study of E|A_N - limit|^p with fitted log-log rates.
QVReport qv_convergence_study(const QVStudyConfig& config);

void write_report_csv(std::ostream& os, std::span<const ReportRow> rows, std::span<const SlopeFit> fits);

} // namespace wavelab
