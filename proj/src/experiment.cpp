#include "wavelab/experiment.hpp"

#include "wavelab/ensemble.hpp"
#include "wavelab/error.hpp"
#include "wavelab/heat.hpp"
#include "wavelab/limits.hpp"
#include "wavelab/linearize.hpp"
#include "wavelab/noise.hpp"
#include "wavelab/qv.hpp"
#include "wavelab/stats.hpp"
#include "wavelab/wave.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#ifndef WAVELAB_VERSION
#define WAVELAB_VERSION "unknown"
#endif

namespace wavelab {

namespace {

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

Metric sample_metric(const std::string& name, std::span<const double> xs)
{
    const auto m = stats::moments(xs);
    return {name, m.mean, m.variance, m.std_error, m.count};
}

Metric derived(const std::string& name, double value, double std_error = 0.0, std::size_t count = 0)
{
    return {name, value, 0.0, std_error, count};
}

std::string p_suffix(double p) { return p == 0.0 ? "" : "_p" + fmt(p); }

void run_qv(const ExperimentConfig& c, EnsembleSummary& s)
{
    QVStudyConfig q;
    q.sigma = c.sigma;
    q.h = c.h;
    q.t = c.t;
    q.x = c.x;
    q.x_lo = c.x_lo;
    q.x_hi = c.x_hi;
    q.spatial = c.kind == ExperimentKind::QvSpace;
    q.n_ladder = c.partitions;
    q.p_values = c.p_values;
    q.with_ladder = c.ladder;
    q.replicates = c.replicates;
    q.base_seed = c.seed;
    q.workers = c.workers;
    const QVReport report = qv_convergence_study(q);
    s.table.header = {"N", "p", "statistic", "value", "std_error"};
    for (const auto& r : report.rows) {
        s.table.rows.push_back({fmt(r.n), fmt(r.p), r.statistic, fmt(r.value), fmt(r.std_error)});
        s.metrics.push_back({r.statistic + p_suffix(r.p) + "_N" + fmt(r.n), r.value,
                             r.std_error * r.std_error * static_cast<double>(c.replicates), r.std_error, c.replicates});
    }
    for (const auto& f : report.fits) {
        s.table.rows.push_back({"fit", fmt(f.p), "slope_" + f.name, fmt(f.slope), fmt(f.std_error)});
        s.metrics.push_back(derived("slope_" + f.name + p_suffix(f.p), f.slope, f.std_error, f.points));
    }
    s.warnings = report.warnings;
}

void run_clt(const ExperimentConfig& c, EnsembleSummary& s)
{
    CLTConfig k;
    k.sigma = c.sigma;
    k.h = c.h;
    k.t = c.t;
    k.x = c.x;
    k.eps = c.eps;
    k.standardization = c.exact_standardization ? Standardization::ExactShellArea : Standardization::ConditionalVariance;
    k.replicates = c.replicates;
    k.base_seed = c.seed;
    k.workers = c.workers;
    const CLTReport report = clt_harness(k);
    s.table.header = {"eps", "count", "ks", "critical", "pass", "mean", "variance"};
    double ks_max = 0.0;
    for (const auto& r : report.rows) {
        s.table.rows.push_back({fmt(r.eps), fmt(r.count), fmt(r.ks), fmt(r.critical), r.pass ? "1" : "0",
                                fmt(r.mean), fmt(r.variance)});
        ks_max = std::max(ks_max, r.ks);
        const std::string tag = "_eps" + fmt(r.eps);
        s.metrics.push_back(derived("ks" + tag, r.ks, 0.0, r.count));
        s.metrics.push_back(derived("ks_critical" + tag, r.critical, 0.0, r.count));
        s.metrics.push_back({"z_mean" + tag, r.mean, r.variance, std::sqrt(r.variance / static_cast<double>(r.count)),
                             r.count});
    }
    s.metrics.push_back(derived("ks_max", ks_max));
    s.warnings = report.warnings;
}

void run_lil(const ExperimentConfig& c, EnsembleSummary& s)
{
    LILConfig k;
    k.sigma = c.sigma;
    k.h = c.h;
    k.t = c.t;
    k.x = c.x;
    k.eps_grid = c.eps_grid;
    k.replicates = c.replicates;
    k.control_replicates = c.control_replicates;
    k.base_seed = c.seed;
    k.workers = c.workers;
    const LILReport r = lil_study(k);
    s.table.header = {"sample", "q25", "median", "q75"};
    s.table.rows.push_back({"field", fmt(r.field.q25), fmt(r.field.median), fmt(r.field.q75)});
    s.table.rows.push_back({"control", fmt(r.control.q25), fmt(r.control.median), fmt(r.control.q75)});
    s.metrics.push_back(derived("field_median", r.field.median, 0.0, c.replicates));
    s.metrics.push_back(derived("control_q25", r.control.q25, 0.0, c.control_replicates));
    s.metrics.push_back(derived("control_median", r.control.median, 0.0, c.control_replicates));
    s.metrics.push_back(derived("control_q75", r.control.q75, 0.0, c.control_replicates));
    s.metrics.push_back(derived("median_in_control_iqr", r.median_in_control_iqr ? 1.0 : 0.0));
    s.warnings = r.warnings;
}

void run_mart(const ExperimentConfig& c, EnsembleSummary& s)
{
    MartingaleConfig k;
    k.sigma = c.sigma;
    k.h = c.h;
    k.t = c.t;
    k.x = c.x;
    k.h_grid = c.h_grid;
    k.replicates = c.replicates;
    k.base_seed = c.seed;
    k.workers = c.workers;
    const MartingaleReport r = martingale_study(k);
    s.table.header = {"h", "mean_m", "se_m", "mean_m2", "m_l2", "r_l2", "mean_vhat", "bracket_ratio", "cell_area"};
    for (const auto& row : r.rows)
        s.table.rows.push_back({fmt(row.h), fmt(row.mean_m), fmt(row.se_m), fmt(row.mean_m2), fmt(row.m_l2),
                                fmt(row.r_l2), fmt(row.mean_vhat), fmt(row.bracket_ratio), fmt(row.cell_area)});
    const std::size_t pts = r.rows.size();
    s.metrics.push_back(derived("m_exponent", r.m_exponent, r.m_exponent_se, pts));
    s.metrics.push_back(derived("r_exponent", r.r_exponent, r.r_exponent_se, pts));
    s.metrics.push_back(derived("exponent_gap", r.r_exponent - r.m_exponent));
    s.warnings = r.warnings;
}

void run_holder(const ExperimentConfig& c, EnsembleSummary& s)
{
    HolderConfig k;
    k.sigma = c.sigma;
    k.h = c.h;
    k.t = c.t;
    k.x = c.x;
    k.lags = c.lags;
    k.replicates = c.replicates;
    k.base_seed = c.seed;
    k.workers = c.workers;
    const HolderReport r = holder_study(k);
    s.table.header = {"lag", "temporal_ms", "spatial_ms"};
    for (std::size_t i = 0; i < c.lags.size(); ++i)
        s.table.rows.push_back({fmt(c.lags[i]), fmt(r.temporal_ms[i]), fmt(r.spatial_ms[i])});
    s.metrics.push_back(derived("temporal_exponent", r.temporal_exponent, r.temporal_exponent_se, c.lags.size()));
    s.metrics.push_back(derived("spatial_exponent", r.spatial_exponent, r.spatial_exponent_se, c.lags.size()));
}

void run_moments(const ExperimentConfig& c, EnsembleSummary& s)
{
    MomentConfig k;
    k.sigma = c.sigma;
    k.h = c.h;
    k.t = c.t;
    k.x = c.x;
    k.replicates = c.replicates;
    k.base_seed = c.seed;
    k.workers = c.workers;
    const MomentReport r = moment_study(k);
    const double h = c.h;
    s.table.header = {"statistic", "t", "x", "value"};
    s.table.rows.push_back({"max_fourth_moment", fmt(r.argmax.n * h), fmt(r.argmax.m * h), fmt(r.max_fourth_moment)});
    s.table.rows.push_back({"second_moment_at_apex", fmt(c.t), fmt(c.x), fmt(r.second_moment_at_apex)});
    s.metrics.push_back(derived("max_fourth_moment", r.max_fourth_moment, 0.0, c.replicates));
    s.metrics.push_back(derived("second_moment_at_apex", r.second_moment_at_apex, 0.0, c.replicates));
}

void run_linearize(const ExperimentConfig& c, EnsembleSummary& s)
{
    LinearizationConfig k;
    k.equation = c.equation;
    k.sigma = c.sigma;
    k.h = c.equation == Equation::Wave ? c.h : c.dx;
    k.t = c.t;
    k.x = c.x;
    k.circumference = c.circumference;
    k.dt = c.dt;
    k.scales = c.scales;
    k.replicates = c.replicates;
    k.base_seed = c.seed;
    k.workers = c.workers;
    const LinearizationReport r = linearization_study(k);
    s.table.header = {"scale", "increment_norm", "defect_norm", "ratio"};
    double min_ratio = r.rows.empty() ? 0.0 : r.rows.front().ratio;
    for (const auto& row : r.rows) {
        s.table.rows.push_back({fmt(row.scale), fmt(row.increment_norm), fmt(row.defect_norm), fmt(row.ratio)});
        min_ratio = std::min(min_ratio, row.ratio);
    }
    s.metrics.push_back(derived("ratio_slope", r.slope, r.slope_std_error, r.rows.size()));
    s.metrics.push_back(derived("contrast", r.contrast()));
    s.metrics.push_back(derived("min_ratio", min_ratio));
    s.warnings = r.warnings;
    s.warnings.push_back(r.threshold_note);
}

void top_row_stats(const std::vector<double>& row, std::vector<double>& means, std::vector<double>& squares)
{
    double a = 0.0, b = 0.0;
    for (double v : row) {
        a += v;
        b += v * v;
    }
    means.push_back(a / static_cast<double>(row.size()));
    squares.push_back(b / static_cast<double>(row.size()));
}

void run_simulate(const ExperimentConfig& c, EnsembleSummary& s)
{
    using Row = std::vector<double>;
    std::vector<Row> tops;
    std::ostringstream bin, csv, cells;
    if (c.equation == Equation::Wave) {
        const LatticeSpec lattice = LatticeSpec::create(c.h, c.t, c.x_lo, c.x_hi);
        tops = run_replicates(c.replicates, c.seed, c.workers, [&](std::uint64_t seed) {
            const WaveField f = solve_wave(c.sigma, make_noise(seed, lattice));
            const int n = lattice.levels();
            Row r;
            for (int m = lattice.row_first(n); m <= lattice.row_last(n); m += 2)
                r.push_back(f(n, m));
            for (double v : r)
                if (!std::isfinite(v))
                    throw ReplicateFailure("simulate: non-finite wave value", seed);
            return r;
        });
        if (c.snapshots) {
            const auto noise = make_noise(c.seed, lattice);
            const WaveField f = solve_wave(c.sigma, noise);
            write_field_binary(bin, f);
            write_field_csv(csv, f);
            write_cell_grid(cells, render_cells(noise));
        }
    } else {
        const HeatGridSpec grid = HeatGridSpec::create(c.dx, c.circumference, c.t, c.dt);
        tops = run_replicates(c.replicates, c.seed, c.workers, [&](std::uint64_t seed) {
            const HeatField f = solve_heat(c.sigma, seed, grid);
            const auto last = f.row(grid.steps);
            Row r(last.begin(), last.end());
            for (double v : r)
                if (!std::isfinite(v))
                    throw ReplicateFailure("simulate: non-finite heat value", seed);
            return r;
        });
        if (c.snapshots) {
            const HeatField f = solve_heat(c.sigma, c.seed, grid);
            write_heat_binary(bin, f);
            write_heat_csv(csv, f);
        }
    }
    std::vector<double> means, squares;
    s.table.header = {"seed", "top_mean", "top_mean_square"};
    for (std::size_t i = 0; i < tops.size(); ++i) {
        top_row_stats(tops[i], means, squares);
        s.table.rows.push_back({fmt(c.seed + i), fmt(means.back()), fmt(squares.back())});
    }
    s.metrics.push_back(sample_metric("top_mean", means));
    s.metrics.push_back(sample_metric("top_mean_square", squares));
    if (c.snapshots) {
        s.attachments.emplace_back(".field.bin", bin.str());
        s.attachments.emplace_back(".field.csv", csv.str());
        if (c.equation == Equation::Wave)
            s.attachments.emplace_back(".cells.bin", cells.str());
    }
}

} // namespace

std::string format_number(double v)
{
    if (v == 0.0)
        return "0";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

bool EnsembleSummary::passed() const
{
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return true;
}

const Metric& EnsembleSummary::metric(const std::string& name) const
{
    for (const auto& m : metrics)
        if (m.name == name)
            return m;
    throw ConfigError("no metric named '" + name + "' in experiment " + to_string(config.kind));
}

EnsembleSummary run(const ExperimentConfig& config)
{
    const auto v = validate(config);
    if (!v.ok()) {
        std::ostringstream os;
        os << "invalid config:";
        for (const auto& i : v.issues)
            os << "\n  [" << i.rule << "] " << i.message << (i.suggestion.empty() ? "" : " (" + i.suggestion + ")");
        throw ConfigError(os.str());
    }
    EnsembleSummary s;
    s.config = config;
    s.version = WAVELAB_VERSION;
    switch (config.kind) {
    case ExperimentKind::Simulate:
        run_simulate(config, s);
        break;
    case ExperimentKind::QvTime:
    case ExperimentKind::QvSpace:
        run_qv(config, s);
        break;
    case ExperimentKind::Clt:
        run_clt(config, s);
        break;
    case ExperimentKind::Lil:
        run_lil(config, s);
        break;
    case ExperimentKind::Mart:
        run_mart(config, s);
        break;
    case ExperimentKind::Linearize:
        run_linearize(config, s);
        break;
    case ExperimentKind::Holder:
        run_holder(config, s);
        break;
    case ExperimentKind::Moments:
        run_moments(config, s);
        break;
    }
    for (const auto& th : config.thresholds) {
        const double value = s.metric(th.metric).value;
        s.checks.push_back({th, value, th.admits(value)});
    }
    return s;
}

void write_csv(std::ostream& os, const Table& table)
{
    for (std::size_t i = 0; i < table.header.size(); ++i)
        os << (i ? "," : "") << table.header[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << row[i];
        os << '\n';
    }
}

nlohmann::ordered_json summary_json(const EnsembleSummary& s)
{
    nlohmann::ordered_json j;
    j["version"] = s.version;
    j["config"] = s.config.to_json();
    j["columns"] = s.table.header;
    j["rows"] = s.table.rows;
    auto& metrics = j["metrics"] = nlohmann::ordered_json::array();
    for (const auto& m : s.metrics)
        metrics.push_back({{"name", m.name},
                           {"value", m.value},
                           {"variance", m.variance},
                           {"std_error", m.std_error},
                           {"count", m.count}});
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : s.checks) {
        nlohmann::ordered_json e{{"metric", c.threshold.metric}, {"value", c.value}, {"pass", c.pass}};
        if (c.threshold.min)
            e["min"] = *c.threshold.min;
        if (c.threshold.max)
            e["max"] = *c.threshold.max;
        checks.push_back(e);
    }
    j["passed"] = s.passed();
    j["warnings"] = s.warnings;
    return j;
}

std::vector<std::filesystem::path> write_artifacts(const EnsembleSummary& s, const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& suffix, const auto& writer, std::ios::openmode mode) {
        const auto path = out_dir / (s.config.name + suffix);
        std::ofstream out(path, mode);
        if (!out)
            throw Error("cannot open " + path.string() + " for writing");
        writer(out);
        out.flush();
        if (!out)
            throw Error("write failed for " + path.string());
        written.push_back(path);
    };
    emit(".csv", [&](std::ostream& os) { write_csv(os, s.table); }, std::ios::out | std::ios::trunc);
    emit(".json", [&](std::ostream& os) { os << summary_json(s).dump(2) << '\n'; }, std::ios::out | std::ios::trunc);
    for (const auto& [suffix, bytes] : s.attachments)
        emit(suffix, [&](std::ostream& os) { os.write(bytes.data(), static_cast<std::streamsize>(bytes.size())); },
             std::ios::out | std::ios::trunc | std::ios::binary);
    return written;
}

} // namespace wavelab
