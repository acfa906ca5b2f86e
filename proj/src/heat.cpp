#include "wavelab/heat.hpp"

#include "wavelab/error.hpp"
#include "wavelab/lattice.hpp"
#include "wavelab/philox.hpp"
#include "wavelab/snapshot.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace wavelab {

HeatGridSpec HeatGridSpec::create(double dx, double circumference, double t_max, double dt)
{
    if (!(dx > 0) || !(circumference > 0) || !(t_max > 0))
        throw ConfigError("heat grid: dx, L and t_max must be positive");
    if (dt <= 0)
        dt = dx * dx / 4.0;
    if (dt > dx * dx / 2.0 * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "heat grid: dt = " << dt << " violates explicit-scheme stability dt <= dx^2/2 = " << dx * dx / 2;
        throw ConfigError(os.str());
    }
    HeatGridSpec g;
    g.dx = dx;
    g.dt = dt;
    g.circumference = circumference;
    g.t_max = t_max;
    try {
        g.columns = lattice_index(circumference, dx, "L");
        g.steps = lattice_index(t_max, dt, "t_max");
    } catch (const AlignmentError& e) {
        throw ConfigError(std::string("heat grid: ") + e.what());
    }
    if (g.columns < 3)
        throw ConfigError("heat grid: need at least 3 columns");
    if (circumference < 16.0 * std::sqrt(t_max) * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "heat grid: circumference " << circumference << " below 16 sqrt(t_max) = " << 16.0 * std::sqrt(t_max);
        throw ConfigError(os.str());
    }
    return g;
}

int HeatGridSpec::column_index(double x) const
{
    return wrap(lattice_index(x, dx, "x"));
}

int HeatGridSpec::step_index(double t) const
{
    const int k = lattice_index(t, dt, "t");
    if (k < 0 || k > steps)
        throw DomainError("heat grid: time outside [0, t_max]");
    return k;
}

double heat_deviate(std::uint64_t seed, int step, int j)
{
    return stream_normal(seed, NoiseStream::HeatSite, step, j);
}

namespace {

template <std::size_t K>
void explicit_euler(const std::array<SigmaSpec, K>& sigmas, std::uint64_t seed, const HeatGridSpec& g,
                    std::array<std::vector<double>*, K> out)
{
    const auto cols = static_cast<std::size_t>(g.columns);
    for (auto* v : out)
        v->assign(cols * static_cast<std::size_t>(g.steps + 1), 1.0);
    const double r = g.ratio();
    const double noise_scale = std::sqrt(g.dt / g.dx);
    const int c = g.columns;
    for (int n = 0; n < g.steps; ++n) {
        const std::size_t cur = static_cast<std::size_t>(n) * cols;
        const std::size_t next = cur + cols;
#pragma omp parallel for schedule(static) if (c > 2048)
        for (int j = 0; j < c; ++j) {
            const double z = noise_scale * heat_deviate(seed, n, j);
            const std::size_t left = cur + static_cast<std::size_t>(j == 0 ? c - 1 : j - 1);
            const std::size_t right = cur + static_cast<std::size_t>(j == c - 1 ? 0 : j + 1);
            const std::size_t here = cur + static_cast<std::size_t>(j);
            for (std::size_t k = 0; k < K; ++k) {
                const std::vector<double>& v = *out[k];
                const double vj = v[here];
                (*out[k])[next + static_cast<std::size_t>(j)] =
                    vj + r * (v[right] - 2.0 * vj + v[left]) + sigmas[k](vj) * z;
            }
        }
    }
}

} // namespace

HeatField solve_heat(const SigmaSpec& sigma, std::uint64_t seed, const HeatGridSpec& grid)
{
    std::vector<double> v;
    explicit_euler<1>({sigma}, seed, grid, {&v});
    return HeatField(grid, sigma, seed, std::move(v));
}

HeatField solve_heat_reference(const SigmaSpec& sigma, std::uint64_t seed, const HeatGridSpec& grid)
{
    const int c = grid.columns;
    std::vector<double> v(static_cast<std::size_t>(c) * static_cast<std::size_t>(grid.steps + 1), 1.0);
    auto at = [&](int n, int j) -> double& {
        return v[static_cast<std::size_t>(n) * static_cast<std::size_t>(c) + static_cast<std::size_t>(grid.wrap(j))];
    };
    const double r = grid.dt / (grid.dx * grid.dx);
    for (int n = 0; n < grid.steps; ++n)
        for (int j = 0; j < c; ++j) {
            const double vj = at(n, j);
            at(n + 1, j) = vj + r * (at(n, j + 1) - 2.0 * vj + at(n, j - 1)) +
                           sigma(vj) * (std::sqrt(grid.dt / grid.dx) * heat_deviate(seed, n, j));
        }
    return HeatField(grid, sigma, seed, std::move(v));
}

std::pair<HeatField, HeatField> solve_coupled_heat_linearization(const SigmaSpec& sigma, std::uint64_t seed,
                                                                 const HeatGridSpec& grid)
{
    std::vector<double> v;
    std::vector<double> z;
    explicit_euler<2>({sigma, SigmaSpec::constant(1.0)}, seed, grid, {&v, &z});
    return {HeatField(grid, sigma, seed, std::move(v)),
            HeatField(grid, SigmaSpec::constant(1.0), seed, std::move(z))};
}

void write_heat_binary(std::ostream& os, const HeatField& field)
{
    const HeatGridSpec& g = field.grid();
    write_snapshot_header(os, SnapshotKind::HeatField, g.dx, g.t_max, 0, g.columns - 1);
    write_le_doubles(os, field.values());
}

void write_heat_csv(std::ostream& os, const HeatField& field)
{
    const HeatGridSpec& g = field.grid();
    os << "t,x,v\n" << std::setprecision(17);
    for (int n = 0; n <= g.steps; ++n)
        for (int j = 0; j < g.columns; ++j)
            os << n * g.dt << ',' << j * g.dx << ',' << field(n, j) << '\n';
}

} // namespace wavelab
