#include "wavelab/qv.hpp"

#include "wavelab/ensemble.hpp"
#include "wavelab/error.hpp"
#include "wavelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace wavelab {

namespace {

std::string nearest_admissible(const std::vector<int>& admissible, int n)
{
    std::ostringstream os;
    if (admissible.empty()) {
        os << "no admissible N (check parity of the fixed coordinate)";
        return os.str();
    }
    const auto best = *std::min_element(admissible.begin(), admissible.end(),
                                        [n](int a, int b) { return std::abs(a - n) < std::abs(b - n); });
    os << "nearest admissible N = " << best << "; admissible N in {";
    for (std::size_t i = 0; i < admissible.size(); ++i)
        os << (i ? "," : "") << admissible[i];
    os << "}";
    return os.str();
}

double sq(double v) { return v * v; }

} // namespace

std::vector<int> admissible_temporal_n(double h, double t, double x)
{
    const int levels = lattice_index(t, h, "t");
    const int m = lattice_index(x, h, "x");
    std::vector<int> out;
    if ((m & 1) != 0)
        return out;
    for (int n = 2; n <= levels; ++n)
        if (levels % n == 0 && (levels / n) % 2 == 0)
            out.push_back(n);
    return out;
}

std::vector<int> admissible_spatial_n(double h, double t, double x_lo, double x_hi)
{
    const int level = lattice_index(t, h, "t");
    const int m1 = lattice_index(x_lo, h, "X1");
    const int m2 = lattice_index(x_hi, h, "X2");
    std::vector<int> out;
    if (((level + m1) & 1) != 0 || m2 <= m1)
        return out;
    const int width = m2 - m1;
    for (int n = 2; n <= width; ++n)
        if (width % n == 0 && (width / n) % 2 == 0)
            out.push_back(n);
    return out;
}

TemporalPartition TemporalPartition::align(double h, double t, double x, int N)
{
    if (N < 1)
        throw AlignmentError("temporal partition: N must be >= 1");
    const auto admissible = admissible_temporal_n(h, t, x);
    if (std::find(admissible.begin(), admissible.end(), N) == admissible.end()) {
        std::ostringstream os;
        os << "temporal partition N = " << N << " is not lattice-aligned for t = " << t << ", x = " << x
           << ", h = " << h << " (t/N must be an even multiple of h and x/h even); "
           << nearest_admissible(admissible, N);
        throw AlignmentError(os.str());
    }
    TemporalPartition p;
    p.t = t;
    p.x = x;
    p.N = N;
    p.apex = {lattice_index(t, h, "t"), lattice_index(x, h, "x")};
    p.step = p.apex.n / N;
    return p;
}

SpatialPartition SpatialPartition::align(double h, double t, double x_lo, double x_hi, int N)
{
    if (N < 1)
        throw AlignmentError("spatial partition: N must be >= 1");
    if (!(x_hi > x_lo))
        throw AlignmentError("spatial partition: need X1 < X2");
    const auto admissible = admissible_spatial_n(h, t, x_lo, x_hi);
    if (std::find(admissible.begin(), admissible.end(), N) == admissible.end()) {
        std::ostringstream os;
        os << "spatial partition N = " << N << " is not lattice-aligned for t = " << t << ", [X1, X2] = [" << x_lo
           << ", " << x_hi << "], h = " << h << " ((X2 - X1)/N must be an even multiple of h, (t, X1) a field point); "
           << nearest_admissible(admissible, N);
        throw AlignmentError(os.str());
    }
    SpatialPartition p;
    p.t = t;
    p.x_lo = x_lo;
    p.x_hi = x_hi;
    p.N = N;
    p.level = lattice_index(t, h, "t");
    p.m_first = lattice_index(x_lo, h, "X1");
    p.step = (lattice_index(x_hi, h, "X2") - p.m_first) / N;
    return p;
}

std::vector<std::vector<NoiseCell>> temporal_shells(const TemporalPartition& part)
{
    std::vector<std::vector<NoiseCell>> shells(static_cast<std::size_t>(part.N));
    for (const auto& c : ConeRegion{part.apex}.cells()) {
        const int i = (cell_depth(c, part.apex.m) + part.step - 1) / part.step;
        shells[static_cast<std::size_t>(i - 1)].push_back(c);
    }
    return shells;
}

int temporal_boundary_level(const TemporalPartition& part, int i, int m)
{
    return std::max(part.level(i) - std::abs(m - part.apex.m), 0);
}

int spatial_left_boundary_level(const SpatialPartition& part, int i, int m)
{
    return std::max(part.level + m - part.column(i + 1), 0);
}

int spatial_right_boundary_level(const SpatialPartition& part, int i, int m)
{
    return std::max(part.level - m + part.column(i), 0);
}

namespace {

// Calls fn(cell, is_right) for every cell of L_i (is_right = false) and R_i.
template <class Fn>
void for_each_spatial_shell_cell(const SpatialPartition& part, int i, Fn&& fn)
{
    const int left_apex = part.column(i);
    const int right_apex = part.column(i + 1);
    for (int n = 0; n < part.level; ++n) {
        const int w = part.level - n - 1;
        auto make = [n](int m) { return n == 0 ? NoiseCell::triangle(m) : NoiseCell::diamond(n, m); };
        const int l_hi = std::min(left_apex + w, right_apex - w - 1);
        for (int m = left_apex - w; m <= l_hi; m += 2)
            fn(make(m), false);
        int r_lo = std::max(right_apex - w, left_apex + w + 1);
        if (((n + r_lo) & 1) == 0)
            ++r_lo;
        for (int m = r_lo; m <= right_apex + w; m += 2)
            fn(make(m), true);
    }
}

void require_contains(const WaveField& field, LatticePoint p, const char* what)
{
    if (!field.lattice().contains(p)) {
        std::ostringstream os;
        os << what << ": dependence cone of (n=" << p.n << ", m=" << p.m << ") exceeds the lattice trapezoid";
        throw DomainError(os.str());
    }
}

void require_coupled(const WaveField& field, const NoiseRealization& noise)
{
    if (field.seed() != noise.seed() || !(field.lattice() == noise.lattice()))
        throw PreconditionError("field and noise realization come from different seeds or lattices");
}

} // namespace

std::vector<SpatialShell> spatial_shells(const SpatialPartition& part)
{
    std::vector<SpatialShell> out(static_cast<std::size_t>(part.N));
    for (int i = 1; i <= part.N; ++i)
        for_each_spatial_shell_cell(part, i, [&](const NoiseCell& c, bool right) {
            auto& s = out[static_cast<std::size_t>(i - 1)];
            (right ? s.right : s.left).push_back(c);
        });
    return out;
}

double temporal_qv(const WaveField& field, const TemporalPartition& part)
{
    require_contains(field, part.apex, "temporal_qv");
    double sum = 0.0;
    for (int i = 1; i <= part.N; ++i)
        sum += sq(field(part.level(i + 1), part.apex.m) - field(part.level(i), part.apex.m));
    return sum;
}

double spatial_qv(const WaveField& field, const SpatialPartition& part)
{
    require_contains(field, {part.level, part.column(1)}, "spatial_qv");
    require_contains(field, {part.level, part.column(part.N + 1)}, "spatial_qv");
    double sum = 0.0;
    for (int i = 1; i <= part.N; ++i)
        sum += sq(field(part.level, part.column(i + 1)) - field(part.level, part.column(i)));
    return sum;
}

TemporalLimit temporal_qv_limit_forms(const WaveField& field, double t, double x)
{
    const LatticeSpec& lat = field.lattice();
    const LatticePoint apex = lat.align(t, x);
    require_contains(field, apex, "temporal_qv_limit");
    const SigmaSpec& sigma = field.sigma();
    const double h = lat.h();
    const double s1 = sq(sigma(1.0));

    TemporalLimit out;
    double cells = apex.n * s1;
    for (int n = 1; n < apex.n; ++n) {
        const int w = apex.n - n - 1;
        for (int m = apex.m - w; m <= apex.m + w; m += 2)
            cells += 2.0 * sq(sigma(field(n - 1, m)));
    }
    out.cell_form = cells * h * h;

    double total = 0.0;
    for (int j = -apex.n; j <= apex.n; ++j) {
        const int top = apex.n - std::abs(j);
        const int m = apex.m + j;
        double column = 0.0;
        double upper = sq(sigma(field.boundary_value(top, m)));
        int level = top;
        while (level > 0) {
            const int lower_level = std::max(level - 2, 0);
            const double lower = lower_level == 0 ? s1 : sq(sigma(field(lower_level, m)));
            column += 0.5 * (level - lower_level) * (upper + lower);
            upper = lower;
            level = lower_level;
        }
        total += column * h;
    }
    out.characteristic_form = total * h;
    return out;
}

double temporal_qv_limit(const WaveField& field, double t, double x)
{
    return temporal_qv_limit_forms(field, t, x).cell_form;
}

namespace {

struct Segment {
    int level;
    int m1;
    int m2;
};

Segment align_segment(const WaveField& field, double t, double x_lo, double x_hi, const char* what)
{
    const LatticeSpec& lat = field.lattice();
    const LatticePoint a = lat.align(t, x_lo);
    const LatticePoint b = lat.align(t, x_hi);
    if (b.m <= a.m)
        throw AlignmentError(std::string(what) + ": need X1 < X2");
    require_contains(field, a, what);
    require_contains(field, b, what);
    return {a.n, a.m, b.m};
}

} // namespace

double spatial_qv_limit(const WaveField& field, double t, double x_lo, double x_hi)
{
    const Segment seg = align_segment(field, t, x_lo, x_hi, "spatial_qv_limit");
    const SigmaSpec& sigma = field.sigma();
    const double h = field.lattice().h();
    const double s1 = sq(sigma(1.0));
    auto characteristics = [&](int m) {
        double sum = sq(sigma(field(seg.level, m))) + s1; // both branches share the apex; half weight each
        for (int q = 1; q < seg.level; ++q)
            sum += sq(sigma(field(seg.level - q, m - q))) + sq(sigma(field(seg.level - q, m + q)));
        return sum * h;
    };
    double total = 0.5 * (characteristics(seg.m1) + characteristics(seg.m2));
    for (int m = seg.m1 + 2; m < seg.m2; m += 2)
        total += characteristics(m);
    return total * 2.0 * h;
}

double naive_qv_prediction(const WaveField& field, double t, double x_lo, double x_hi)
{
    const Segment seg = align_segment(field, t, x_lo, x_hi, "naive_qv_prediction");
    const SigmaSpec& sigma = field.sigma();
    const double h = field.lattice().h();
    double total = 0.5 * (sq(sigma(field(seg.level, seg.m1))) + sq(sigma(field(seg.level, seg.m2))));
    for (int m = seg.m1 + 2; m < seg.m2; m += 2)
        total += sq(sigma(field(seg.level, m)));
    return 2.0 * t * total * 2.0 * h;
}

std::vector<LadderValues> proof_ladder_temporal(const WaveField& field, const NoiseRealization& noise,
                                                std::span<const TemporalPartition> parts)
{
    require_coupled(field, noise);
    std::vector<LadderValues> out(parts.size());
    if (parts.empty())
        return out;
    const LatticePoint apex = parts.front().apex;
    for (const auto& p : parts)
        if (!(p.apex == apex))
            throw PreconditionError("proof_ladder_temporal: partitions must share one apex");
    require_contains(field, apex, "proof_ladder_temporal");

    const SigmaSpec& sigma = field.sigma();
    const double h2 = field.lattice().h() * field.lattice().h();
    std::vector<std::vector<double>> shell_sums(parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k)
        shell_sums[k].assign(static_cast<std::size_t>(parts[k].N), 0.0);
    std::vector<double> c_sum(parts.size(), 0.0);
    double d_sum = 0.0;

    for (const auto& cell : ConeRegion{apex}.cells()) {
        const double xi = noise.increment_unchecked(cell);
        const double area = cell.area_units() * h2;
        d_sum += area * sq(sigma(field.boundary_value(cell.bottom_level(), cell.m)));
        const int depth = cell_depth(cell, apex.m);
        for (std::size_t k = 0; k < parts.size(); ++k) {
            const int i = (depth + parts[k].step - 1) / parts[k].step;
            const double w = sigma(field.boundary_value(temporal_boundary_level(parts[k], i, cell.m), cell.m));
            shell_sums[k][static_cast<std::size_t>(i - 1)] += w * xi;
            c_sum[k] += area * w * w;
        }
    }
    for (std::size_t k = 0; k < parts.size(); ++k) {
        out[k].a = temporal_qv(field, parts[k]);
        for (double s : shell_sums[k])
            out[k].b += s * s;
        out[k].c = c_sum[k];
        out[k].d = d_sum;
    }
    return out;
}

LadderValues proof_ladder_temporal(const WaveField& field, const NoiseRealization& noise,
                                   const TemporalPartition& part)
{
    return proof_ladder_temporal(field, noise, std::span<const TemporalPartition>(&part, 1)).front();
}

LadderValues proof_ladder_spatial(const WaveField& field, const NoiseRealization& noise,
                                  const SpatialPartition& part)
{
    require_coupled(field, noise);
    const double h = field.lattice().h();
    LadderValues out;
    out.a = spatial_qv(field, part);
    out.d = spatial_qv_limit(field, part.t, part.x_lo, part.x_hi);
    const SigmaSpec& sigma = field.sigma();
    for (int i = 1; i <= part.N; ++i) {
        double increment = 0.0;
        for_each_spatial_shell_cell(part, i, [&](const NoiseCell& c, bool right) {
            const int level =
                right ? spatial_right_boundary_level(part, i, c.m) : spatial_left_boundary_level(part, i, c.m);
            const double w = sigma(field.boundary_value(level, c.m));
            const double xi = noise.increment_unchecked(c);
            increment += right ? w * xi : -w * xi;
            out.c += c.area_units() * h * h * w * w;
        });
        out.b += increment * increment;
    }
    return out;
}

const ReportRow& QVReport::row(int n, const std::string& statistic, double p) const
{
    for (const auto& r : rows)
        if (r.n == n && r.statistic == statistic && r.p == p)
            return r;
    throw PreconditionError("QVReport: no row " + statistic + " at N = " + std::to_string(n));
}

const SlopeFit& QVReport::fit(const std::string& name, double p) const
{
    for (const auto& f : fits)
        if (f.name == name && f.p == p)
            return f;
    throw PreconditionError("QVReport: no fit " + name);
}

namespace {

struct QVReplicate {
    std::vector<double> qv;
    std::vector<LadderValues> ladder;
    double limit = 0.0;
    double naive = 0.0;
};

ReportRow summary_row(int n, double p, const std::string& name, std::span<const double> xs)
{
    const auto m = stats::moments(xs);
    return {n, p, name, m.mean, m.std_error};
}

} // namespace

QVReport qv_convergence_study(const QVStudyConfig& config)
{
    QVReport report;
    report.config = config;
    if (config.replicates == 0)
        throw ConfigError("qv study: replicates must be positive");
    if (config.n_ladder.empty())
        throw ConfigError("qv study: empty N ladder");
    if (config.replicates < 100)
        report.warnings.push_back("insufficient replicates (< 100): L^p gap estimates are unreliable");

    const double h = config.h;
    std::vector<TemporalPartition> tparts;
    std::vector<SpatialPartition> sparts;
    std::vector<LatticePoint> needed;
    if (config.spatial) {
        for (int n : config.n_ladder)
            sparts.push_back(SpatialPartition::align(h, config.t, config.x_lo, config.x_hi, n));
        needed = {{sparts.front().level, sparts.front().column(1)},
                  {sparts.front().level, sparts.front().column(sparts.front().N + 1)}};
    } else {
        for (int n : config.n_ladder)
            tparts.push_back(TemporalPartition::align(h, config.t, config.x, n));
        needed = {tparts.front().apex};
    }
    const LatticeSpec lattice = LatticeSpec::covering(h, needed);

    const auto reps = run_replicates(config.replicates, config.base_seed, config.workers, [&](std::uint64_t seed) {
        const NoiseRealization noise = make_noise(seed, lattice);
        const WaveField field = solve_wave(config.sigma, noise);
        QVReplicate r;
        if (config.spatial) {
            for (const auto& p : sparts) {
                r.qv.push_back(spatial_qv(field, p));
                if (config.with_ladder)
                    r.ladder.push_back(proof_ladder_spatial(field, noise, p));
            }
            r.limit = spatial_qv_limit(field, config.t, config.x_lo, config.x_hi);
            r.naive = naive_qv_prediction(field, config.t, config.x_lo, config.x_hi);
        } else {
            for (const auto& p : tparts)
                r.qv.push_back(temporal_qv(field, p));
            if (config.with_ladder)
                r.ladder = proof_ladder_temporal(field, noise, tparts);
            r.limit = temporal_qv_limit(field, config.t, config.x);
            r.naive = std::nan("");
        }
        for (double v : r.qv)
            if (!std::isfinite(v))
                throw ReplicateFailure("qv study: non-finite quadratic variation", seed);
        if (!std::isfinite(r.limit))
            throw ReplicateFailure("qv study: non-finite limit functional", seed);
        return r;
    });

    std::vector<double> limits;
    std::vector<double> naive;
    for (const auto& r : reps) {
        limits.push_back(r.limit);
        naive.push_back(r.naive);
    }

    std::vector<double> ns;
    std::vector<std::vector<double>> gap_norms(config.p_values.size());
    std::vector<double> ab_rms, bc_ms, bc_rms, cd_rms;
    for (std::size_t k = 0; k < config.n_ladder.size(); ++k) {
        const int n = config.n_ladder[k];
        ns.push_back(n);
        std::vector<double> qv;
        std::vector<double> gap;
        for (const auto& r : reps) {
            qv.push_back(r.qv[k]);
            gap.push_back(r.qv[k] - r.limit);
        }
        report.rows.push_back(summary_row(n, 0.0, "qv_mean", qv));
        report.rows.push_back(summary_row(n, 0.0, "limit_mean", limits));
        if (config.spatial) {
            report.rows.push_back(summary_row(n, 0.0, "naive_mean", naive));
            const double delta = sparts[k].delta(h);
            report.rows.push_back({n, 0.0, "shell_area_sum", 2.0 * n * spatial_shell_area(config.t, delta), 0.0});
        } else {
            report.rows.push_back({n, 0.0, "shell_area_sum", config.t * config.t, 0.0});
        }
        for (std::size_t j = 0; j < config.p_values.size(); ++j) {
            const double p = config.p_values[j];
            std::vector<double> powered;
            for (double g : gap)
                powered.push_back(std::pow(std::abs(g), p));
            const auto m = stats::moments(powered);
            report.rows.push_back({n, p, "gap_abs_moment", m.mean, m.std_error});
            const double norm = std::pow(m.mean, 1.0 / p);
            report.rows.push_back({n, p, "gap_norm", norm, m.std_error * norm / (p * m.mean)});
            gap_norms[j].push_back(norm);
        }
        if (config.with_ladder) {
            std::vector<double> ab, bc, cd, bvals, cvals;
            for (const auto& r : reps) {
                const auto& l = r.ladder[k];
                ab.push_back(l.a - l.b);
                bc.push_back(l.b - l.c);
                cd.push_back(l.c - l.d);
                bvals.push_back(l.b);
                cvals.push_back(l.c);
            }
            report.rows.push_back(summary_row(n, 0.0, "ladder_b_mean", bvals));
            report.rows.push_back(summary_row(n, 0.0, "ladder_c_mean", cvals));
            report.rows.push_back({n, 2.0, "ladder_ab_rms", stats::lp_norm(ab, 2.0), 0.0});
            report.rows.push_back({n, 2.0, "ladder_bc_rms", stats::lp_norm(bc, 2.0), 0.0});
            report.rows.push_back({n, 2.0, "ladder_bc_ms", stats::abs_moment(bc, 2.0), 0.0});
            report.rows.push_back({n, 2.0, "ladder_cd_rms", stats::lp_norm(cd, 2.0), 0.0});
            ab_rms.push_back(report.rows[report.rows.size() - 4].value);
            bc_rms.push_back(report.rows[report.rows.size() - 3].value);
            bc_ms.push_back(report.rows[report.rows.size() - 2].value);
            cd_rms.push_back(report.rows.back().value);
        }
    }

    auto add_fit = [&](const std::string& name, double p, const std::vector<double>& ys) {
        if (ns.size() < 2)
            return;
        for (double y : ys)
            if (!(y > 0)) {
                report.warnings.push_back("fit " + name + " skipped: non-positive values");
                return;
            }
        const auto f = stats::loglog_fit(ns, ys);
        report.fits.push_back({name, p, f.slope, f.slope_std_error, f.points});
    };
    if (ns.size() < 4)
        report.warnings.push_back("rate fits use fewer than 4 ladder points");
    for (std::size_t j = 0; j < config.p_values.size(); ++j)
        add_fit("gap_norm", config.p_values[j], gap_norms[j]);
    if (config.with_ladder) {
        add_fit("ladder_ab_rms", 2.0, ab_rms);
        add_fit("ladder_bc_rms", 2.0, bc_rms);
        add_fit("ladder_bc_ms", 2.0, bc_ms);
        add_fit("ladder_cd_rms", 2.0, cd_rms);
    }
    return report;
}

void write_report_csv(std::ostream& os, std::span<const ReportRow> rows, std::span<const SlopeFit> fits)
{
    os << "N,p,statistic,value,std_error\n" << std::setprecision(17);
    for (const auto& r : rows)
        os << r.n << ',' << r.p << ',' << r.statistic << ',' << r.value << ',' << r.std_error << '\n';
    for (const auto& f : fits)
        os << "fit," << f.p << ",slope_" << f.name << ',' << f.slope << ',' << f.std_error << '\n';
}

} // namespace wavelab
