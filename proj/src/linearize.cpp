#include "wavelab/linearize.hpp"

#include "wavelab/ensemble.hpp"
#include "wavelab/error.hpp"
#include "wavelab/lattice.hpp"
#include "wavelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wavelab {

namespace {

void require_linearization(const SigmaSpec& s, const char* what)
{
    if (!(s == SigmaSpec::constant(1.0)))
        throw PreconditionError(std::string(what) + ": linearized field must be driven by sigma = 1");
}

std::vector<std::size_t> ascending(std::span<const double> scales)
{
    std::vector<std::size_t> order(scales.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scales[a] < scales[b]; });
    return order;
}

} // namespace

std::vector<DefectSample> wave_defect(const WaveField& u, const WaveField& y, double t, double x,
                                      std::span<const double> scales)
{
    if (u.seed() != y.seed() || !(u.lattice() == y.lattice()))
        throw PreconditionError("wave_defect: u and Y are not coupled on identical noise");
    require_linearization(y.sigma(), "wave_defect");
    const double u0 = field_at(u, t, x);
    const double y0 = field_at(y, t, x);
    const double s0 = u.sigma()(u0);
    std::vector<DefectSample> out;
    out.reserve(scales.size());
    for (double s : scales) {
        const double dy = field_at(y, t, x + s) - y0;
        out.push_back({dy, (field_at(u, t, x + s) - u0) - s0 * dy});
    }
    return out;
}

std::vector<DefectSample> heat_defect(const HeatField& v, const HeatField& z, double t, double x,
                                      std::span<const double> scales)
{
    if (v.seed() != z.seed() || !(v.grid() == z.grid()))
        throw PreconditionError("heat_defect: v and Z are not coupled on identical deviates");
    require_linearization(z.sigma(), "heat_defect");
    const HeatGridSpec& g = v.grid();
    const int n = g.step_index(t);
    const int j = g.column_index(x);
    const double s0 = v.sigma()(v(n, j));
    std::vector<DefectSample> out;
    out.reserve(scales.size());
    for (double s : scales) {
        const int k = g.column_index(x + s);
        const double dz = z(n, k) - z(n, j);
        out.push_back({dz, (v(n, k) - v(n, j)) - s0 * dz});
    }
    return out;
}

double LinearizationReport::contrast() const
{
    if (rows.empty() || rows.back().ratio == 0.0)
        return 0.0;
    return rows.front().ratio / rows.back().ratio;
}

LinearizationReport summarize_defects(const LinearizationConfig& config,
                                      const std::vector<std::vector<DefectSample>>& samples)
{
    LinearizationReport report;
    report.config = config;
    const auto order = ascending(config.scales);
    std::vector<double> xs, ratios;
    bool all_positive = true;
    for (std::size_t k : order) {
        std::vector<double> inc, def;
        inc.reserve(samples.size());
        def.reserve(samples.size());
        for (const auto& s : samples) {
            inc.push_back(s[k].increment);
            def.push_back(s[k].defect);
        }
        LinearizationRow row;
        row.scale = config.scales[k];
        row.increment_norm = stats::lp_norm(inc, 2.0);
        row.defect_norm = stats::lp_norm(def, 2.0);
        row.ratio = row.increment_norm > 0 ? row.defect_norm / row.increment_norm : 0.0;
        all_positive = all_positive && row.ratio > 0;
        report.rows.push_back(row);
        xs.push_back(row.scale);
        ratios.push_back(row.ratio);
    }
    if (xs.size() >= 2 && all_positive) {
        const auto fit = stats::loglog_fit(xs, ratios);
        report.slope = fit.slope;
        report.slope_std_error = fit.slope_std_error;
    } else if (!all_positive) {
        report.warnings.push_back("defect vanishes at some scale; no slope fitted");
    }
    if (xs.size() < 4)
        report.warnings.push_back("ratio slope uses fewer than 4 scales");
    return report;
}

LinearizationReport linearization_study(const LinearizationConfig& config)
{
    if (config.scales.empty())
        throw ConfigError("linearize: empty scale ladder");
    if (config.replicates == 0)
        throw ConfigError("linearize: replicates must be positive");

    std::vector<std::vector<DefectSample>> samples;
    if (config.equation == Equation::Wave) {
        const LatticePoint apex{lattice_index(config.t, config.h, "t"), lattice_index(config.x, config.h, "x")};
        std::vector<LatticePoint> points{apex};
        for (double s : config.scales) {
            const int k = lattice_index(s, config.h, "scale");
            if (k <= 0 || (k & 1) != 0)
                throw AlignmentError("linearize: wave scales must be positive even multiples of h");
            points.push_back({apex.n, apex.m + k});
        }
        const LatticeSpec lattice = LatticeSpec::covering(config.h, points);
        samples = run_replicates(config.replicates, config.base_seed, config.workers, [&](std::uint64_t seed) {
            const auto [u, y] = solve_coupled_linearization(config.sigma, make_noise(seed, lattice));
            auto d = wave_defect(u, y, config.t, config.x, config.scales);
            for (const auto& s : d)
                if (!std::isfinite(s.defect))
                    throw ReplicateFailure("linearize: non-finite wave defect", seed);
            return d;
        });
    } else {
        const HeatGridSpec grid = HeatGridSpec::create(config.h, config.circumference, config.t, config.dt);
        for (double s : config.scales) {
            lattice_index(s, config.h, "scale");
            if (s <= 0 || s >= config.circumference / 2)
                throw ConfigError("linearize: heat scales must lie in (0, L/2)");
        }
        samples = run_replicates(config.replicates, config.base_seed, config.workers, [&](std::uint64_t seed) {
            const auto [v, z] = solve_coupled_heat_linearization(config.sigma, seed, grid);
            auto d = heat_defect(v, z, config.t, config.x, config.scales);
            for (const auto& s : d)
                if (!std::isfinite(s.defect))
                    throw ReplicateFailure("linearize: non-finite heat defect", seed);
            return d;
        });
    }
    return summarize_defects(config, samples);
}

} // namespace wavelab
