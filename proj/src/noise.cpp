#include "wavelab/noise.hpp"

#include "wavelab/error.hpp"
#include "wavelab/snapshot.hpp"

#include <algorithm>
#include <sstream>

namespace wavelab {

NoiseRealization make_noise(std::uint64_t seed, const LatticeSpec& lattice)
{
    return NoiseRealization(seed, lattice);
}

double cell_increment(const NoiseRealization& noise, const NoiseCell& cell)
{
    if (!noise.lattice().contains(cell)) {
        std::ostringstream os;
        os << "noise cell (" << cell.n << ", " << cell.m << ") lies outside the lattice";
        throw DomainError(os.str());
    }
    return noise.increment_unchecked(cell);
}

double region_integral(const NoiseRealization& noise, std::span<const NoiseCell> cells)
{
    std::vector<NoiseCell> sorted(cells.begin(), cells.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw PreconditionError("region_integral: duplicate cell in region");
    double sum = 0.0;
    for (const auto& c : cells)
        sum += cell_increment(noise, c);
    return sum;
}

CellGrid render_cells(const NoiseRealization& noise)
{
    CellGrid grid{noise.lattice(), noise.lattice().cells(), {}};
    grid.values.resize(grid.cells.size());
    const auto count = static_cast<std::ptrdiff_t>(grid.cells.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i)
        grid.values[static_cast<std::size_t>(i)] = noise.increment_unchecked(grid.cells[static_cast<std::size_t>(i)]);
    return grid;
}

CellGrid render_cells_reference(const NoiseRealization& noise)
{
    CellGrid grid{noise.lattice(), noise.lattice().cells(), {}};
    grid.values.reserve(grid.cells.size());
    for (const auto& c : grid.cells)
        grid.values.push_back(cell_increment(noise, c));
    return grid;
}

void write_cell_grid(std::ostream& os, const CellGrid& grid)
{
    write_snapshot_header(os, SnapshotKind::NoiseCells, grid.lattice.h(), grid.lattice.t_max(),
                          grid.lattice.m_lo(), grid.lattice.m_hi());
    write_le_doubles(os, grid.values);
}

} // namespace wavelab
