#pragma once

#include "wavelab/lattice.hpp"
#include "wavelab/noise.hpp"
#include "wavelab/sigma.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace wavelab {

/// Solution of u(t, x) = 1 + int_{Q(x,t)} sigma(u) dxi on the light-cone lattice.
/// Immutable once solved.
class WaveField {
public:
    WaveField(LatticeSpec lattice, SigmaSpec sigma, std::uint64_t seed, std::vector<double> values);

    const LatticeSpec& lattice() const { return lattice_; }
    const SigmaSpec& sigma() const { return sigma_; }
    std::uint64_t seed() const { return seed_; }
    std::span<const double> values() const { return values_; }

    /// Value at a field point; DomainError outside the trapezoid.
    double at(LatticePoint p) const;

    /// Unchecked access to an in-domain field point.
    double operator()(int n, int m) const noexcept { return values_[lattice_.index({n, m})]; }

    /// u at level n and column m, reading the initial condition u(0, .) = 1
    /// at any column. Used by the clamped boundary maps.
    double boundary_value(int n, int m) const noexcept { return n == 0 ? 1.0 : (*this)(n, m); }

private:
    LatticeSpec lattice_;
    SigmaSpec sigma_;
    std::uint64_t seed_;
    std::vector<double> values_;
};

/// Layer-by-layer leapfrog over diamonds; points within a layer are updated
/// in parallel (OpenMP). Results are bit-identical to solve_wave_reference.
WaveField solve_wave(const SigmaSpec& sigma, const NoiseRealization& noise);

/// Serial reference solver written against the checked lattice/noise API.
WaveField solve_wave_reference(const SigmaSpec& sigma, const NoiseRealization& noise);

/// u driven by sigma and its linearization Y (sigma = 1) on the same noise.
std::pair<WaveField, WaveField> solve_coupled_linearization(const SigmaSpec& sigma, const NoiseRealization& noise);

/// Stored value at (t, x); AlignmentError off-lattice, DomainError outside.
double field_at(const WaveField& field, double t, double x);

struct TracePoint {
    double y;
    double u;
};

/// y -> u(t - |x - y|, y) for every lattice column y in [x - t, x + t].
std::vector<TracePoint> cone_boundary_trace(const WaveField& field, double t, double x);

/// Trapezoid rule of f(u) over a trace with equally spaced abscissae.
template <class F>
double trace_integral(std::span<const TracePoint> trace, F&& f)
{
    if (trace.size() < 2)
        return 0.0;
    const double dy = trace[1].y - trace[0].y;
    double sum = 0.5 * (f(trace.front().u) + f(trace.back().u));
    for (std::size_t i = 1; i + 1 < trace.size(); ++i)
        sum += f(trace[i].u);
    return sum * dy;
}

void write_field_binary(std::ostream& os, const WaveField& field);
/// Rows "t,x,u" in (n, m) order.
void write_field_csv(std::ostream& os, const WaveField& field);

} // namespace wavelab
