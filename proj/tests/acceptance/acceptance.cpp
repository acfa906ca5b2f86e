// Acceptance suite: one PASS/FAIL line per criterion.
//
//   wavelab_acceptance            all criteria
//   wavelab_acceptance 4 5 12     a subset
//
// Exit status 0 when every selected criterion passes, 1 otherwise.

#include "wavelab/ensemble.hpp"
#include "wavelab/experiment.hpp"
#include "wavelab/limits.hpp"
#include "wavelab/linearize.hpp"
#include "wavelab/qv.hpp"
#include "wavelab/stats.hpp"
#include "wavelab/wave.hpp"

#include "../oracles/oracles.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace wavelab;

namespace {

// tolerances
constexpr double kExactness = 1e-12;         // 1: relative to max |u|
constexpr double kSeTol = 3.0;               // 2, 3: standard errors
constexpr double kQuadratureTol = 1e-12;     // 2: limit of constant sigma
constexpr double kRuntimeBudget = 60.0;      // 2: seconds
constexpr double kLimitRelTol = 0.05;        // 3, 4
constexpr double kNaiveSeparation = 5.0;     // 5: combined s.e.
constexpr double kLimitAgreement = 3.0;      // 5: combined s.e.
constexpr double kRatioOracle = 0.628183454905;
constexpr double kRatioTol = 0.05;           // 5
constexpr double kRateLo = -0.65, kRateHi = -0.35;  // 6
constexpr double kMsLo = -1.3, kMsHi = -0.7;        // 6
constexpr double kKsBound = 0.05;            // 7
constexpr int kControlStudies = 20, kControlPasses = 18;
constexpr double kMLo = 0.4, kMHi = 0.6;     // 8
constexpr double kRLo = 0.75, kRHi = 1.25;
constexpr double kGap = 0.25;
constexpr double kHeatContrast = 0.5;        // 10
constexpr double kWaveContrast = 0.5;
constexpr double kWaveFloor = 0.2;
constexpr double kHolderLo = 0.85, kHolderHi = 1.15; // 11

// frozen oracle values, sigma(u) = u, t = 1
constexpr double kM2 = 2.17818355660857;
constexpr double kTemporalLimit = 1.17818355660857;
constexpr double kSpatialRate = 2.73659774401718;
constexpr double kNaiveRate = 4.35636711321714;

struct Result {
    bool pass = false;
    std::string detail;
};

std::string num(double v, int digits = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

double combined_se(const stats::Moments& a, const stats::Moments& b)
{
    return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. sigma = 1: u - 1 is the sum of cell noise over the cone of every point.
Result scheme_exactness()
{
    const double h = 1.0 / 64;
    const auto lat = LatticeSpec::create(h, 1.0, -1.0, 1.0);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto noise = make_noise(seed, lat);
        const auto u = solve_wave(SigmaSpec::constant(1.0), noise);
        double umax = 0.0;
        for (double v : u.values())
            umax = std::max(umax, std::abs(v));
        for (int N = 0; N <= lat.levels(); ++N)
            for (int M = lat.row_first(N); M <= lat.row_last(N); M += 2) {
                // cone of (N, M): level-n cells at |m - M| <= N - n - 1
                double sum = 0.0;
                for (int n = 0; n < N; ++n)
                    for (int m = M - (N - n - 1); m <= M + (N - n - 1); m += 2)
                        sum += noise.increment_unchecked(n == 0 ? NoiseCell::triangle(m) : NoiseCell::diamond(n, m));
                worst = std::max(worst, std::abs(u(N, M) - 1.0 - sum) / umax);
            }
    }
    return {worst < kExactness, "max |u - 1 - cone sum| / max|u| = " + num(worst, 3) + " over 100 seeds, h = 2^-6"};
}

// 2. sigma = 1 temporal QV at N = 32.
Result temporal_qv_constant()
{
    const auto t0 = std::chrono::steady_clock::now();
    const double h = 1.0 / 256;
    const auto part = TemporalPartition::align(h, 1.0, 0.0, 32);
    const auto lat = LatticeSpec::covering(h, {part.apex});
    const auto vals = run_replicates(2000, 20000, 0, [&](std::uint64_t seed) {
        const auto u = solve_wave(SigmaSpec::constant(1.0), make_noise(seed, lat));
        return std::pair{temporal_qv(u, part), temporal_qv_limit(u, 1.0, 0.0)};
    });
    std::vector<double> a, lim;
    for (const auto& [x, y] : vals) {
        a.push_back(x);
        lim.push_back(y);
    }
    const auto ma = stats::moments(a);
    const double lim_err = std::abs(stats::mean(lim) - 1.0);
    const double elapsed = seconds_since(t0);
    const double z = std::abs(ma.mean - 1.0) / ma.std_error;
    return {z < kSeTol && lim_err < kQuadratureTol && elapsed < kRuntimeBudget,
            "E[A_32] = " + num(ma.mean, 5) + " +/- " + num(ma.std_error, 2) + " (" + num(z, 2) +
                " s.e.); |E[limit] - 1| = " + num(lim_err, 2) + "; " + num(elapsed, 3) + " s"};
}

// 3. sigma = 1 spatial QV against the exact shell-area sum and 2t(X2 - X1).
Result spatial_qv_constant()
{
    const double h = 1.0 / 256;
    const auto p32 = SpatialPartition::align(h, 1.0, 0.0, 1.0, 32);
    const auto p64 = SpatialPartition::align(h, 1.0, 0.0, 1.0, 64);
    const auto lat = LatticeSpec::covering(h, {{256, 0}, {256, 256}});
    const auto vals = run_replicates(2000, 30000, 0, [&](std::uint64_t seed) {
        const auto u = solve_wave(SigmaSpec::constant(1.0), make_noise(seed, lat));
        return std::pair{spatial_qv(u, p32), spatial_qv(u, p64)};
    });
    std::vector<double> a32, a64;
    for (const auto& [x, y] : vals) {
        a32.push_back(x);
        a64.push_back(y);
    }
    const auto m32 = stats::moments(a32);
    const double exact = 2.0 * 32 * spatial_shell_area(1.0, p32.delta(h));
    const double z = std::abs(m32.mean - exact) / m32.std_error;
    const double m64 = stats::mean(a64);
    const double rel = std::abs(m64 - 2.0) / 2.0;
    return {z < kSeTol && rel < kLimitRelTol,
            "E[S_32] = " + num(m32.mean, 5) + " vs shell sum " + num(exact, 5) + " (" + num(z, 2) +
                " s.e.); E[S_64] = " + num(m64, 5) + " vs 2.0 (" + num(100 * rel, 2) + "%)"};
}

// Shared ensemble for 4 and 5: sigma(u) = u, h = 2^-8, 10^4 replicates.
struct AndersonEnsemble {
    stats::Moments m2, temporal, spatial, naive, qv;
};

const AndersonEnsemble& anderson_ensemble()
{
    static const AndersonEnsemble e = [] {
        const double h = 1.0 / 256;
        const auto p64 = SpatialPartition::align(h, 1.0, 0.0, 1.0, 64);
        const auto lat = LatticeSpec::covering(h, {{256, 0}, {256, 256}});
        const auto vals = run_replicates(10000, 40000, 0, [&](std::uint64_t seed) {
            const auto u = solve_wave(SigmaSpec::linear(1.0), make_noise(seed, lat));
            double sq = 0.0;
            for (int i = 1; i <= 65; ++i) {
                const double v = u(256, p64.column(i));
                sq += v * v;
            }
            return std::array<double, 5>{sq / 65.0, temporal_qv_limit(u, 1.0, 0.0), spatial_qv_limit(u, 1.0, 0.0, 1.0),
                                         naive_qv_prediction(u, 1.0, 0.0, 1.0), spatial_qv(u, p64)};
        });
        std::array<std::vector<double>, 5> cols;
        for (const auto& v : vals)
            for (std::size_t k = 0; k < 5; ++k)
                cols[k].push_back(v[k]);
        return AndersonEnsemble{stats::moments(cols[0]), stats::moments(cols[1]), stats::moments(cols[2]),
                                stats::moments(cols[3]), stats::moments(cols[4])};
    }();
    return e;
}

// 4. moment anchors from the ODE oracle.
Result anderson_anchors()
{
    const auto ode = oracle::anderson_moments(1.0, 2000);
    const bool oracle_ok = std::abs(ode.m2 - kM2) < 1e-10 && std::abs(2 * ode.m2_integral - kSpatialRate) < 1e-10;
    const auto& e = anderson_ensemble();
    const double targets[] = {kM2, kTemporalLimit, kSpatialRate, kNaiveRate};
    const double means[] = {e.m2.mean, e.temporal.mean, e.spatial.mean, e.naive.mean};
    const char* names[] = {"E[u^2]", "E[limit]", "E[D]", "E[naive]"};
    bool ok = oracle_ok;
    std::string detail;
    for (int k = 0; k < 4; ++k) {
        const double rel = (means[k] - targets[k]) / targets[k];
        ok = ok && std::abs(rel) < kLimitRelTol;
        detail += std::string(k ? "; " : "") + names[k] + " = " + num(means[k], 5) + " (" + num(100 * rel, 2) + "%)";
    }
    return {ok, detail};
}

// 5. the naive prediction is refuted, D(t) is not.
Result refutation()
{
    const auto& e = anderson_ensemble();
    const double sep = std::abs(e.qv.mean - e.naive.mean) / combined_se(e.qv, e.naive);
    const double agree = std::abs(e.qv.mean - e.spatial.mean) / combined_se(e.qv, e.spatial);
    const double ratio = e.qv.mean / e.naive.mean;
    const double ratio_se = ratio * std::hypot(e.qv.std_error / e.qv.mean, e.naive.std_error / e.naive.mean);
    return {sep > kNaiveSeparation && agree < kLimitAgreement && std::abs(ratio - kRatioOracle) < kRatioTol,
            "|qv - naive| = " + num(sep, 3) + " s.e.; |qv - D| = " + num(agree, 2) + " s.e.; ratio " + num(ratio, 3) +
                " +/- " + num(ratio_se, 1) + " vs " + num(kRatioOracle, 3)};
}

// 6. convergence rates of the temporal sums and the proof ladder.
Result convergence_rates()
{
    QVStudyConfig cfg;
    cfg.sigma = SigmaSpec::linear(1.0);
    cfg.h = 1.0 / 256;
    cfg.n_ladder = {8, 16, 32, 64};
    cfg.p_values = {2.0};
    cfg.replicates = 2000;
    cfg.base_seed = 60000;
    const auto r = qv_convergence_study(cfg);
    const double gap = r.fit("gap_norm", 2.0).slope;
    const double ab = r.fit("ladder_ab_rms", 2.0).slope;
    const double cd = r.fit("ladder_cd_rms", 2.0).slope;
    const double bc = r.fit("ladder_bc_ms", 2.0).slope;
    const bool ok_gap = within(gap, kRateLo, kRateHi);
    const bool ok_ab = within(ab, kRateLo, kRateHi);
    const bool ok_cd = within(cd, kRateLo, kRateHi);
    const bool ok_bc = within(bc, kMsLo, kMsHi);
    auto mark = [](bool b) { return b ? "" : " [out]"; };
    return {ok_gap && ok_ab && ok_cd && ok_bc,
            "slopes: A-limit " + num(gap, 3) + mark(ok_gap) + ", A-B " + num(ab, 3) + mark(ok_ab) + ", C-D " +
                num(cd, 3) + mark(ok_cd) + ", (B-C)^2 " + num(bc, 3) + mark(ok_bc)};
}

// 7. CLT and the exact-Gaussian control.
Result clt()
{
    CLTConfig cfg;
    cfg.sigma = SigmaSpec::linear(1.0);
    cfg.h = 1.0 / 256;
    cfg.eps = {8.0 / 256};
    cfg.replicates = 2000;
    cfg.base_seed = 70000;
    const double ks = clt_harness(cfg).rows.front().ks;
    int passes = 0;
    cfg.sigma = SigmaSpec::constant(1.0);
    cfg.standardization = Standardization::ExactShellArea;
    for (int k = 0; k < kControlStudies; ++k) {
        cfg.base_seed = 1000000 + static_cast<std::uint64_t>(k) * 2000;
        passes += clt_harness(cfg).rows.front().pass ? 1 : 0;
    }
    return {ks < kKsBound && passes >= kControlPasses,
            "KS = " + num(ks, 3) + " (sigma = u); control passes " + std::to_string(passes) + "/" +
                std::to_string(kControlStudies)};
}

// 8. martingale and remainder exponents.
Result martingale()
{
    MartingaleConfig cfg;
    cfg.replicates = 2000;
    cfg.base_seed = 80000;
    const auto r = martingale_study(cfg);
    const double gap = r.r_exponent - r.m_exponent;
    return {within(r.m_exponent, kMLo, kMHi) && within(r.r_exponent, kRLo, kRHi) && gap >= kGap,
            "||M_h|| exponent " + num(r.m_exponent, 3) + " +/- " + num(r.m_exponent_se, 1) + "; ||R_h|| exponent " +
                num(r.r_exponent, 3) + " +/- " + num(r.r_exponent_se, 1) + "; gap " + num(gap, 3)};
}

// 9. LIL statistic against a Brownian control.
Result lil()
{
    LILConfig cfg;
    cfg.sigma = SigmaSpec::constant(1.0);
    cfg.h = 1.0 / 1024;
    cfg.replicates = 1000;
    cfg.control_replicates = 20000;
    cfg.base_seed = 90000;
    const auto r = lil_study(cfg);
    return {r.median_in_control_iqr, "field median " + num(r.field.median, 4) + "; control IQR [" +
                                         num(r.control.q25, 4) + ", " + num(r.control.q75, 4) + "]"};
}

// 10. heat defect decays, wave defect persists.
Result linearization_contrast()
{
    LinearizationConfig wave;
    wave.equation = Equation::Wave;
    wave.sigma = SigmaSpec::linear(1.0);
    wave.h = 1.0 / 256;
    wave.scales = {1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8};
    wave.replicates = 2000;
    wave.base_seed = 100000;
    const auto w = linearization_study(wave);

    LinearizationConfig heat = wave;
    heat.equation = Equation::Heat;
    heat.h = 1.0 / 256;
    heat.t = 1.0 / 256;
    heat.circumference = 1.0;
    heat.scales = {1.0 / 256, 1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4};
    const auto v = linearization_study(heat);

    const double w_small = w.rows.front().ratio, w_large = w.rows.back().ratio;
    const double v_small = v.rows.front().ratio, v_large = v.rows.back().ratio;
    const bool ok = v_small < kHeatContrast * v_large && w_small > kWaveContrast * w_large && w_small > kWaveFloor;
    return {ok, "heat ratio " + num(v_large, 3) + " -> " + num(v_small, 3) + "; wave ratio " + num(w_large, 3) +
                    " -> " + num(w_small, 3) + " (largest -> smallest scale; thresholds pilot-calibrated)"};
}

// 11. Holder exponents of second moments.
Result holder()
{
    HolderConfig cfg;
    cfg.sigma = SigmaSpec::linear(1.0);
    cfg.h = 1.0 / 1024;
    cfg.replicates = 500;
    cfg.base_seed = 110000;
    const auto r = holder_study(cfg);
    return {within(r.temporal_exponent, kHolderLo, kHolderHi) && within(r.spatial_exponent, kHolderLo, kHolderHi),
            "temporal " + num(r.temporal_exponent, 3) + " +/- " + num(r.temporal_exponent_se, 1) + ", spatial " +
                num(r.spatial_exponent, 3) + " +/- " + num(r.spatial_exponent_se, 1) + " over lags 2^-9 .. 2^-2"};
}

// 12. byte-identical CSV across reruns and worker counts.
Result determinism()
{
    namespace fs = std::filesystem;
    auto read = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    ExperimentConfig qv;
    qv.name = "det_qv";
    qv.sigma = SigmaSpec::linear(1.0);
    qv.h = 1.0 / 64;
    qv.partitions = {4, 8, 16, 32};
    qv.replicates = 200;
    ExperimentConfig heat;
    heat.name = "det_heat";
    heat.kind = ExperimentKind::Linearize;
    heat.equation = Equation::Heat;
    heat.dx = 1.0 / 64;
    heat.t = 1.0 / 256;
    heat.scales = {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8};
    heat.replicates = 100;
    ExperimentConfig lil;
    lil.name = "det_lil";
    lil.kind = ExperimentKind::Lil;
    lil.sigma = SigmaSpec::constant(1.0);
    lil.h = 1.0 / 256;
    lil.replicates = 100;
    lil.control_replicates = 1000;

    const fs::path root = fs::temp_directory_path() / "wavelab_acceptance_det";
    fs::remove_all(root);
    std::size_t compared = 0;
    bool identical = true;
    for (auto cfg : {qv, heat, lil}) {
        std::string reference;
        int run_index = 0;
        for (int workers : {1, 4, 1, 3}) {
            cfg.workers = workers;
            const fs::path dir = root / (cfg.name + "_" + std::to_string(run_index++));
            write_artifacts(run(cfg), dir);
            const std::string csv = read(dir / (cfg.name + ".csv"));
            if (reference.empty())
                reference = csv;
            else
                identical = identical && csv == reference;
            ++compared;
        }
    }
    fs::remove_all(root);
    return {identical, std::to_string(compared) + " runs of 3 studies (workers 1, 4, 1, 3): " +
                           (identical ? "CSV byte-identical" : "CSV differs")};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Result()> fn;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all{
        {1, "scheme exactness", scheme_exactness},
        {2, "temporal QV, sigma = 1", temporal_qv_constant},
        {3, "spatial QV, sigma = 1", spatial_qv_constant},
        {4, "hyperbolic Anderson anchors", anderson_anchors},
        {5, "naive prediction refuted", refutation},
        {6, "convergence rates", convergence_rates},
        {7, "CLT", clt},
        {8, "martingale decomposition", martingale},
        {9, "LIL", lil},
        {10, "linearization contrast", linearization_contrast},
        {11, "Holder exponent", holder},
        {12, "determinism", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!selected.empty() && !selected.count(c.id))
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
            r = c.fn();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        failed += r.pass ? 0 : 1;
        std::printf("%s  %2d  %-28s %s  [%.1f s]\n", r.pass ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
