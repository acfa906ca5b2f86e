#pragma once

#include "wavelab/lattice.hpp"
#include "wavelab/philox.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace wavelab {

/// Discrete space-time white noise on a lattice: each cell carries an
/// independent Normal(0, area) increment that is a pure function of
/// (seed, cell). Immutable; safe to query from any number of threads.
class NoiseRealization {
public:
    NoiseRealization(std::uint64_t seed, LatticeSpec lattice)
        : seed_(seed), lattice_(std::move(lattice)), key_(philox_key(seed))
    {
    }

    std::uint64_t seed() const { return seed_; }
    const LatticeSpec& lattice() const { return lattice_; }

    /// Unit normal behind the cell; no domain check.
    double unit_normal(const NoiseCell& c) const noexcept
    {
        return philox_normal({static_cast<std::uint32_t>(c.n), static_cast<std::uint32_t>(c.m),
                              static_cast<std::uint32_t>(NoiseStream::WaveCell), 0u},
                             key_);
    }

    /// Increment scaled by sqrt(area); no domain check.
    double increment_unchecked(const NoiseCell& c) const noexcept
    {
        const double scale = c.kind == CellKind::Diamond ? diamond_scale() : triangle_scale();
        return scale * unit_normal(c);
    }

    double triangle_scale() const noexcept { return lattice_.h(); }
    double diamond_scale() const noexcept { return lattice_.h() * std::numbers::sqrt2; }

private:
    std::uint64_t seed_;
    LatticeSpec lattice_;
    PhiloxKey key_;
};

NoiseRealization make_noise(std::uint64_t seed, const LatticeSpec& lattice);

/// Increment of one cell; DomainError when the cell is outside the lattice.
double cell_increment(const NoiseRealization& noise, const NoiseCell& cell);

/// Sum of increments over a set of distinct cells; PreconditionError on duplicates.
double region_integral(const NoiseRealization& noise, std::span<const NoiseCell> cells);

/// Every cell increment of the domain, row-major by (n, m).
struct CellGrid {
    LatticeSpec lattice;
    std::vector<NoiseCell> cells;
    std::vector<double> values;
};

/// OpenMP-parallel rendering; bit-identical for any thread count.
CellGrid render_cells(const NoiseRealization& noise);
/// Serial reference rendering.
CellGrid render_cells_reference(const NoiseRealization& noise);

/// Binary dump: 32-byte header ("WLNC", version, kind, h, t_max, m_lo, m_hi)
/// followed by little-endian doubles in row-major (n, m) order.
void write_cell_grid(std::ostream& os, const CellGrid& grid);

} // namespace wavelab
