#pragma once

#include "wavelab/sigma.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace wavelab {

/// Explicit finite-difference grid on a periodic circle of circumference L.
struct HeatGridSpec {
    double dx = 0.0;
    double dt = 0.0;
    double circumference = 0.0;
    double t_max = 0.0;
    int columns = 0;
    int steps = 0;

    /// dt <= 0 selects the default dt = dx^2 / 4. Throws ConfigError on
    /// stability violation (dt > dx^2/2), non-integral L/dx or t_max/dt, or
    /// L < 16 sqrt(t_max).
    static HeatGridSpec create(double dx, double circumference, double t_max, double dt = 0.0);

    double ratio() const { return dt / (dx * dx); }
    int wrap(int j) const { return ((j % columns) + columns) % columns; }
    int column_index(double x) const;
    int step_index(double t) const;

    friend bool operator==(const HeatGridSpec&, const HeatGridSpec&) = default;
};

class HeatField {
public:
    HeatField(HeatGridSpec grid, SigmaSpec sigma, std::uint64_t seed, std::vector<double> values)
        : grid_(grid), sigma_(sigma), seed_(seed), values_(std::move(values))
    {
    }

    const HeatGridSpec& grid() const { return grid_; }
    const SigmaSpec& sigma() const { return sigma_; }
    std::uint64_t seed() const { return seed_; }
    std::span<const double> values() const { return values_; }

    double operator()(int step, int j) const noexcept
    {
        return values_[static_cast<std::size_t>(step) * static_cast<std::size_t>(grid_.columns) +
                       static_cast<std::size_t>(grid_.wrap(j))];
    }
    std::span<const double> row(int step) const
    {
        return std::span<const double>(values_).subspan(static_cast<std::size_t>(step) * grid_.columns,
                                                        static_cast<std::size_t>(grid_.columns));
    }

private:
    HeatGridSpec grid_;
    SigmaSpec sigma_;
    std::uint64_t seed_;
    std::vector<double> values_;
};

/// Standard normal driving site (step, j); shared by every heat solve with this seed.
double heat_deviate(std::uint64_t seed, int step, int j);

/// OpenMP-parallel within each time step; bit-identical to the reference.
HeatField solve_heat(const SigmaSpec& sigma, std::uint64_t seed, const HeatGridSpec& grid);
HeatField solve_heat_reference(const SigmaSpec& sigma, std::uint64_t seed, const HeatGridSpec& grid);

/// v driven by sigma and its linearization Z (sigma = 1) on the same deviates.
std::pair<HeatField, HeatField> solve_coupled_heat_linearization(const SigmaSpec& sigma, std::uint64_t seed,
                                                                 const HeatGridSpec& grid);

/// Snapshot header uses h = dx, m_lo = 0, m_hi = columns - 1; rows are time steps.
void write_heat_binary(std::ostream& os, const HeatField& field);
void write_heat_csv(std::ostream& os, const HeatField& field);

} // namespace wavelab
