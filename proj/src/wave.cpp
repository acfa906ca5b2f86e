#include "wavelab/wave.hpp"

#include "wavelab/error.hpp"
#include "wavelab/snapshot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace wavelab {

WaveField::WaveField(LatticeSpec lattice, SigmaSpec sigma, std::uint64_t seed, std::vector<double> values)
    : lattice_(std::move(lattice)), sigma_(sigma), seed_(seed), values_(std::move(values))
{
}

double WaveField::at(LatticePoint p) const
{
    if (!lattice_.contains(p)) {
        std::ostringstream os;
        os << "field point (n=" << p.n << ", m=" << p.m << ") outside the lattice trapezoid";
        throw DomainError(os.str());
    }
    return values_[lattice_.index(p)];
}

namespace {

// Rows of u for one or two sigmas sharing the same noise draw per cell.
template <std::size_t K>
void leapfrog(const std::array<SigmaSpec, K>& sigmas, const NoiseRealization& noise,
              std::array<std::vector<double>*, K> out)
{
    const LatticeSpec& lat = noise.lattice();
    for (auto* v : out)
        v->assign(lat.point_count(), 0.0);

    for (auto* v : out)
        std::fill_n(v->begin(), lat.row_count(0), 1.0);
    if (lat.levels() == 0)
        return;

    {
        const int first = lat.row_first(1);
        const int count = lat.row_count(1);
        const std::size_t base = lat.row_offset(1);
        const double scale = noise.triangle_scale();
#pragma omp parallel for schedule(static) if (count > 512)
        for (int j = 0; j < count; ++j) {
            const double xi = scale * noise.unit_normal(NoiseCell::triangle(first + 2 * j));
            for (std::size_t k = 0; k < K; ++k)
                (*out[k])[base + static_cast<std::size_t>(j)] = 1.0 + sigmas[k](1.0) * xi;
        }
    }

    const double scale = noise.diamond_scale();
    for (int n = 1; n < lat.levels(); ++n) {
        const int first = lat.row_first(n + 1);
        const int count = lat.row_count(n + 1);
        const std::size_t next = lat.row_offset(n + 1);
        // Column first + 2j sits between entries (first - 1 - row_first(n))/2 + j and +1 of row n.
        const std::size_t cur = lat.row_offset(n) + static_cast<std::size_t>((first - 1 - lat.row_first(n)) / 2);
        const std::size_t prev = lat.row_offset(n - 1) + static_cast<std::size_t>((first - lat.row_first(n - 1)) / 2);
#pragma omp parallel for schedule(static) if (count > 512)
        for (int j = 0; j < count; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            const double xi = scale * noise.unit_normal(NoiseCell::diamond(n, first + 2 * j));
            for (std::size_t k = 0; k < K; ++k) {
                std::vector<double>& u = *out[k];
                const double below = u[prev + sj];
                u[next + sj] = u[cur + sj] + u[cur + sj + 1] - below + sigmas[k](below) * xi;
            }
        }
    }
}

} // namespace

WaveField solve_wave(const SigmaSpec& sigma, const NoiseRealization& noise)
{
    std::vector<double> u;
    leapfrog<1>({sigma}, noise, {&u});
    return WaveField(noise.lattice(), sigma, noise.seed(), std::move(u));
}

WaveField solve_wave_reference(const SigmaSpec& sigma, const NoiseRealization& noise)
{
    const LatticeSpec& lat = noise.lattice();
    std::vector<double> u(lat.point_count(), 0.0);
    auto at = [&](int n, int m) -> double& { return u[lat.index({n, m})]; };
    for (int m = lat.row_first(0); m <= lat.row_last(0); m += 2)
        at(0, m) = 1.0;
    for (int n = 0; n < lat.levels(); ++n) {
        for (int m = lat.row_first(n + 1); m <= lat.row_last(n + 1); m += 2) {
            if (n == 0) {
                at(1, m) = 1.0 + sigma(1.0) * cell_increment(noise, NoiseCell::triangle(m));
            } else {
                const double below = at(n - 1, m);
                at(n + 1, m) = at(n, m - 1) + at(n, m + 1) - below +
                               sigma(below) * cell_increment(noise, NoiseCell::diamond(n, m));
            }
        }
    }
    return WaveField(lat, sigma, noise.seed(), std::move(u));
}

std::pair<WaveField, WaveField> solve_coupled_linearization(const SigmaSpec& sigma, const NoiseRealization& noise)
{
    std::vector<double> u;
    std::vector<double> y;
    leapfrog<2>({sigma, SigmaSpec::constant(1.0)}, noise, {&u, &y});
    return {WaveField(noise.lattice(), sigma, noise.seed(), std::move(u)),
            WaveField(noise.lattice(), SigmaSpec::constant(1.0), noise.seed(), std::move(y))};
}

double field_at(const WaveField& field, double t, double x)
{
    return field.at(field.lattice().align(t, x));
}

std::vector<TracePoint> cone_boundary_trace(const WaveField& field, double t, double x)
{
    const LatticeSpec& lat = field.lattice();
    const LatticePoint apex = lat.align(t, x);
    if (!lat.contains(apex))
        throw DomainError("cone_boundary_trace: apex cone exceeds the lattice trapezoid");
    std::vector<TracePoint> out;
    out.reserve(static_cast<std::size_t>(2 * apex.n + 1));
    for (int j = -apex.n; j <= apex.n; ++j)
        out.push_back({(apex.m + j) * lat.h(), field.boundary_value(apex.n - std::abs(j), apex.m + j)});
    return out;
}

void write_field_binary(std::ostream& os, const WaveField& field)
{
    const LatticeSpec& lat = field.lattice();
    write_snapshot_header(os, SnapshotKind::WaveField, lat.h(), lat.t_max(), lat.m_lo(), lat.m_hi());
    write_le_doubles(os, field.values());
}

void write_field_csv(std::ostream& os, const WaveField& field)
{
    const LatticeSpec& lat = field.lattice();
    os << "t,x,u\n" << std::setprecision(17);
    for (int n = 0; n <= lat.levels(); ++n)
        for (int m = lat.row_first(n); m <= lat.row_last(n); m += 2)
            os << n * lat.h() << ',' << m * lat.h() << ',' << field(n, m) << '\n';
}

} // namespace wavelab
