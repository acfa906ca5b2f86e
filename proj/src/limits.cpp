#include "wavelab/limits.hpp"

#include "wavelab/ensemble.hpp"
#include "wavelab/error.hpp"
#include "wavelab/philox.hpp"
#include "wavelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wavelab {

namespace {

double sq(double v) { return v * v; }

int even_offset(double value, double h, const char* what)
{
    const int k = lattice_index(value, h, what);
    if (k <= 0 || (k & 1) != 0) {
        std::ostringstream os;
        os << what << " = " << value << " must be a positive even multiple of h = " << h;
        throw AlignmentError(os.str());
    }
    return k;
}

bool sigma_vanishes(const SigmaSpec& sigma)
{
    return sigma.is_constant() && sigma(0.0) == 0.0;
}

void require_coupled(const WaveField& field, const NoiseRealization& noise)
{
    if (field.seed() != noise.seed() || !(field.lattice() == noise.lattice()))
        throw PreconditionError("field and noise realization come from different seeds or lattices");
}

// Cells with depth in (apex.n, apex.n + extra] and center column within apex.n of the apex.
template <class Fn>
void for_each_truncated_shell_cell(LatticePoint apex, int extra, Fn&& fn)
{
    const int inner = apex.n;
    const int outer = apex.n + extra;
    for (int n = 0; n < outer; ++n) {
        const int a_lo = std::max(inner - n, 0);
        const int a_hi = std::min(outer - n - 1, inner);
        for (int a = a_lo; a <= a_hi; ++a) {
            for (int sign : {-1, 1}) {
                if (a == 0 && sign == 1)
                    continue;
                const int m = apex.m + sign * a;
                if (((n + m) & 1) == 0)
                    continue;
                fn(n == 0 ? NoiseCell::triangle(m) : NoiseCell::diamond(n, m), n + 1 + a);
            }
        }
    }
}

} // namespace

double conditional_variance(const WaveField& field, double t, double x)
{
    const auto trace = cone_boundary_trace(field, t, x);
    const SigmaSpec& sigma = field.sigma();
    return trace_integral(std::span<const TracePoint>(trace), [&](double u) { return sq(sigma(u)); });
}

IncrementSample increment_sample(const WaveField& field, double t, double x, double eps)
{
    IncrementSample s;
    s.increment = field_at(field, t + eps, x) - field_at(field, t, x);
    s.variance = conditional_variance(field, t, x);
    if (!(s.variance > 0))
        throw DegenerateInputError("conditional variance is zero; standardized increment undefined");
    s.standardized = s.increment / std::sqrt(eps * s.variance);
    return s;
}

CLTReport clt_harness(const CLTConfig& config)
{
    if (sigma_vanishes(config.sigma))
        throw DegenerateInputError("clt: sigma vanishes identically, conditional variance is zero");
    if (config.eps.empty())
        throw ConfigError("clt: empty eps ladder");
    if (config.replicates == 0)
        throw ConfigError("clt: replicates must be positive");
    if (config.standardization == Standardization::ExactShellArea && !config.sigma.is_constant())
        throw PreconditionError("clt: exact shell-area standardization requires constant sigma");
    CLTReport report;
    report.config = config;
    if (config.replicates < 500)
        report.warnings.push_back("fewer than 500 replicates: KS test has low power");

    const LatticePoint apex{lattice_index(config.t, config.h, "t"), lattice_index(config.x, config.h, "x")};
    int max_offset = 0;
    for (double e : config.eps)
        max_offset = std::max(max_offset, even_offset(e, config.h, "eps"));
    const LatticeSpec lattice = LatticeSpec::covering(config.h, {apex, {apex.n + max_offset, apex.m}});

    const auto samples = run_replicates(config.replicates, config.base_seed, config.workers, [&](std::uint64_t seed) {
        const WaveField field = solve_wave(config.sigma, make_noise(seed, lattice));
        std::vector<double> z;
        for (double e : config.eps) {
            if (config.standardization == Standardization::ExactShellArea) {
                const double inc = field_at(field, config.t + e, config.x) - field_at(field, config.t, config.x);
                const double c = config.sigma(0.0);
                z.push_back(inc / (std::abs(c) * std::sqrt(shell_area(config.t, config.t + e))));
            } else {
                z.push_back(increment_sample(field, config.t, config.x, e).standardized);
            }
            if (!std::isfinite(z.back()))
                throw ReplicateFailure("clt: non-finite standardized increment", seed);
        }
        return z;
    });

    for (std::size_t k = 0; k < config.eps.size(); ++k) {
        std::vector<double> z;
        z.reserve(samples.size());
        for (const auto& s : samples)
            z.push_back(s[k]);
        CLTRow row;
        row.eps = config.eps[k];
        row.count = z.size();
        row.ks = stats::ks_normal(z);
        row.critical = stats::ks_critical_5pct(z.size());
        row.pass = row.ks < row.critical;
        const auto m = stats::moments(z);
        row.mean = m.mean;
        row.variance = m.variance;
        report.rows.push_back(row);
    }
    return report;
}

std::vector<NoiseCell> truncated_shell_cells(LatticePoint apex, int extra_levels)
{
    std::vector<NoiseCell> out;
    for_each_truncated_shell_cell(apex, extra_levels, [&](const NoiseCell& c, int) { out.push_back(c); });
    return out;
}

std::vector<MartingalePoint> martingale_decomposition(const WaveField& field, const NoiseRealization& noise,
                                                      double t, double x, std::span<const double> h_grid)
{
    require_coupled(field, noise);
    const LatticeSpec& lat = field.lattice();
    const LatticePoint apex = lat.align(t, x);
    std::vector<int> extra;
    for (double hh : h_grid) {
        extra.push_back(even_offset(hh, lat.h(), "h"));
        if (!lat.contains({apex.n + extra.back(), apex.m}))
            throw DomainError("martingale_decomposition: (t + h, x) outside the lattice");
    }
    if (extra.empty())
        return {};
    const int max_extra = *std::max_element(extra.begin(), extra.end());

    const SigmaSpec& sigma = field.sigma();
    const double h2 = lat.h() * lat.h();
    std::vector<MartingalePoint> out(h_grid.size());
    for (std::size_t k = 0; k < h_grid.size(); ++k)
        out[k].h = h_grid[k];
    for_each_truncated_shell_cell(apex, max_extra, [&](const NoiseCell& c, int depth) {
        const int r = std::max(apex.n - std::abs(c.m - apex.m), 0);
        const double weighted = sigma(field.boundary_value(r, c.m)) * noise.increment_unchecked(c);
        for (std::size_t k = 0; k < extra.size(); ++k)
            if (depth <= apex.n + extra[k]) {
                out[k].martingale += weighted;
                out[k].cell_area += c.area_units() * h2;
            }
    });
    const double base = field(apex.n, apex.m);
    for (std::size_t k = 0; k < extra.size(); ++k)
        out[k].remainder = field(apex.n + extra[k], apex.m) - base - out[k].martingale;
    return out;
}

MartingaleReport martingale_study(const MartingaleConfig& config)
{
    if (config.replicates == 0)
        throw ConfigError("mart: replicates must be positive");
    if (config.h_grid.size() < 2)
        throw ConfigError("mart: h grid needs at least two points");
    MartingaleReport report;
    report.config = config;
    if (config.h_grid.size() < 4)
        report.warnings.push_back("exponent fits use fewer than 4 points");
    const LatticePoint apex{lattice_index(config.t, config.h, "t"), lattice_index(config.x, config.h, "x")};
    int max_extra = 0;
    for (double hh : config.h_grid)
        max_extra = std::max(max_extra, even_offset(hh, config.h, "h"));
    const LatticeSpec lattice = LatticeSpec::covering(config.h, {apex, {apex.n + max_extra, apex.m}});

    struct Rep {
        std::vector<MartingalePoint> points;
        double vhat = 0.0;
    };
    const auto reps = run_replicates(config.replicates, config.base_seed, config.workers, [&](std::uint64_t seed) {
        const NoiseRealization noise = make_noise(seed, lattice);
        const WaveField field = solve_wave(config.sigma, noise);
        Rep r;
        r.points = martingale_decomposition(field, noise, config.t, config.x, config.h_grid);
        r.vhat = conditional_variance(field, config.t, config.x);
        for (const auto& p : r.points)
            if (!std::isfinite(p.martingale) || !std::isfinite(p.remainder))
                throw ReplicateFailure("mart: non-finite decomposition", seed);
        return r;
    });

    std::vector<double> vhat;
    for (const auto& r : reps)
        vhat.push_back(r.vhat);
    const double mean_vhat = stats::mean(vhat);
    std::vector<double> hs, m_norms, r_norms;
    for (std::size_t k = 0; k < config.h_grid.size(); ++k) {
        std::vector<double> m, rem;
        for (const auto& r : reps) {
            m.push_back(r.points[k].martingale);
            rem.push_back(r.points[k].remainder);
        }
        MartingaleRow row;
        row.h = config.h_grid[k];
        const auto mm = stats::moments(m);
        row.mean_m = mm.mean;
        row.se_m = mm.std_error;
        row.mean_m2 = stats::abs_moment(m, 2.0);
        row.m_l2 = std::sqrt(row.mean_m2);
        row.r_l2 = stats::lp_norm(rem, 2.0);
        row.mean_vhat = mean_vhat;
        row.bracket_ratio = row.mean_m2 / (row.h * mean_vhat);
        row.cell_area = reps.front().points[k].cell_area;
        report.rows.push_back(row);
        hs.push_back(row.h);
        m_norms.push_back(row.m_l2);
        r_norms.push_back(row.r_l2);
    }
    const auto mf = stats::loglog_fit(hs, m_norms);
    report.m_exponent = mf.slope;
    report.m_exponent_se = mf.slope_std_error;
    bool remainder_positive = std::all_of(r_norms.begin(), r_norms.end(), [](double v) { return v > 0; });
    if (remainder_positive) {
        const auto rf = stats::loglog_fit(hs, r_norms);
        report.r_exponent = rf.slope;
        report.r_exponent_se = rf.slope_std_error;
    } else {
        report.warnings.push_back("remainder vanishes identically; no exponent fitted");
    }
    return report;
}

void check_lil_grid(double h, std::span<const double> eps_grid)
{
    if (eps_grid.empty())
        throw ConfigError("lil: empty eps grid");
    for (double e : eps_grid) {
        if (e < 2.0 * h) {
            std::ostringstream os;
            os << "lil: eps = " << e << " is below the lattice resolution 2h = " << 2.0 * h;
            throw ConfigError(os.str());
        }
        if (e >= std::exp(-1.0))
            throw ConfigError("lil: eps must be below 1/e for log log(1/eps) to be positive");
    }
}

namespace {

double lil_scale(double eps)
{
    return std::sqrt(2.0 * eps * std::log(std::log(1.0 / eps)));
}

} // namespace

double lil_statistic(const WaveField& field, double t, double x, std::span<const double> eps_grid)
{
    check_lil_grid(field.lattice().h(), eps_grid);
    const double v = conditional_variance(field, t, x);
    if (!(v > 0))
        throw DegenerateInputError("lil: conditional variance is zero");
    const double base = field_at(field, t, x);
    double best = 0.0;
    for (double e : eps_grid)
        best = std::max(best, std::abs(field_at(field, t + e, x) - base) / (lil_scale(e) * std::sqrt(v)));
    return best;
}

double brownian_lil_statistic(std::uint64_t seed, std::span<const double> eps_grid)
{
    std::vector<double> grid(eps_grid.begin(), eps_grid.end());
    std::sort(grid.begin(), grid.end());
    double w = 0.0;
    double prev = 0.0;
    double best = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        w += std::sqrt(grid[k] - prev) * stream_normal(seed, NoiseStream::Brownian, static_cast<std::int32_t>(k), 0);
        prev = grid[k];
        best = std::max(best, std::abs(w) / lil_scale(grid[k]));
    }
    return best;
}

LILReport lil_study(const LILConfig& config)
{
    if (sigma_vanishes(config.sigma))
        throw DegenerateInputError("lil: sigma vanishes identically");
    if (config.replicates == 0 || config.control_replicates == 0)
        throw ConfigError("lil: replicates must be positive");
    check_lil_grid(config.h, config.eps_grid);
    LILReport report;
    report.config = config;
    if (config.eps_grid.size() < 4)
        report.warnings.push_back("eps grid has fewer than 4 dyadic levels");

    const LatticePoint apex{lattice_index(config.t, config.h, "t"), lattice_index(config.x, config.h, "x")};
    int max_offset = 0;
    for (double e : config.eps_grid)
        max_offset = std::max(max_offset, even_offset(e, config.h, "eps"));
    const LatticeSpec lattice = LatticeSpec::covering(config.h, {apex, {apex.n + max_offset, apex.m}});

    const auto field_stats = run_replicates(config.replicates, config.base_seed, config.workers, [&](std::uint64_t seed) {
        const WaveField field = solve_wave(config.sigma, make_noise(seed, lattice));
        return lil_statistic(field, config.t, config.x, config.eps_grid);
    });
    const auto control = run_replicates(config.control_replicates, config.base_seed, config.workers,
                                        [&](std::uint64_t seed) { return brownian_lil_statistic(seed, config.eps_grid); });
    auto quartiles = [](const std::vector<double>& xs) {
        return Quartiles{stats::quantile(xs, 0.25), stats::quantile(xs, 0.5), stats::quantile(xs, 0.75)};
    };
    report.field = quartiles(field_stats);
    report.control = quartiles(control);
    report.median_in_control_iqr =
        report.field.median >= report.control.q25 && report.field.median <= report.control.q75;
    return report;
}

HolderReport holder_study(const HolderConfig& config)
{
    if (config.lags.size() < 2)
        throw ConfigError("holder: need at least two lags");
    if (config.replicates == 0)
        throw ConfigError("holder: replicates must be positive");
    const LatticePoint apex{lattice_index(config.t, config.h, "t"), lattice_index(config.x, config.h, "x")};
    std::vector<int> offsets;
    for (double lag : config.lags) {
        offsets.push_back(even_offset(lag, config.h, "lag"));
        if (offsets.back() > apex.n)
            throw ConfigError("holder: lag exceeds t");
    }
    const int max_offset = *std::max_element(offsets.begin(), offsets.end());
    const LatticeSpec lattice = LatticeSpec::covering(config.h, {apex, {apex.n, apex.m + max_offset}});

    const auto reps = run_replicates(config.replicates, config.base_seed, config.workers, [&](std::uint64_t seed) {
        const WaveField field = solve_wave(config.sigma, make_noise(seed, lattice));
        std::vector<double> out;
        const double base = field(apex.n, apex.m);
        for (int k : offsets)
            out.push_back(sq(base - field(apex.n - k, apex.m)));
        for (int k : offsets)
            out.push_back(sq(field(apex.n, apex.m + k) - base));
        return out;
    });

    HolderReport report;
    report.config = config;
    const std::size_t n = offsets.size();
    for (std::size_t k = 0; k < 2 * n; ++k) {
        double sum = 0.0;
        for (const auto& r : reps)
            sum += r[k];
        (k < n ? report.temporal_ms : report.spatial_ms).push_back(sum / static_cast<double>(reps.size()));
    }
    const auto tf = stats::loglog_fit(config.lags, report.temporal_ms);
    const auto sf = stats::loglog_fit(config.lags, report.spatial_ms);
    report.temporal_exponent = tf.slope;
    report.temporal_exponent_se = tf.slope_std_error;
    report.spatial_exponent = sf.slope;
    report.spatial_exponent_se = sf.slope_std_error;
    return report;
}

MomentReport moment_study(const MomentConfig& config)
{
    if (config.replicates == 0)
        throw ConfigError("moments: replicates must be positive");
    const LatticePoint apex{lattice_index(config.t, config.h, "t"), lattice_index(config.x, config.h, "x")};
    const LatticeSpec lattice = LatticeSpec::covering(config.h, {apex});
    std::vector<double> fourth(lattice.point_count(), 0.0);
    double second_apex = 0.0;
    constexpr std::size_t kBatch = 64;
    for (std::size_t start = 0; start < config.replicates; start += kBatch) {
        const std::size_t count = std::min(kBatch, config.replicates - start);
        const auto batch = run_replicates(count, config.base_seed + start, config.workers, [&](std::uint64_t seed) {
            const WaveField field = solve_wave(config.sigma, make_noise(seed, lattice));
            return std::vector<double>(field.values().begin(), field.values().end());
        });
        for (const auto& values : batch) {
            for (std::size_t i = 0; i < values.size(); ++i)
                fourth[i] += sq(sq(values[i]));
            second_apex += sq(values[lattice.index(apex)]);
        }
    }
    MomentReport report;
    report.config = config;
    const auto reps = static_cast<double>(config.replicates);
    for (int n = 0; n <= lattice.levels(); ++n)
        for (int m = lattice.row_first(n); m <= lattice.row_last(n); m += 2) {
            const double v = fourth[lattice.index({n, m})] / reps;
            if (v > report.max_fourth_moment) {
                report.max_fourth_moment = v;
                report.argmax = {n, m};
            }
        }
    report.second_moment_at_apex = second_apex / reps;
    return report;
}

} // namespace wavelab
