#include "wavelab/ensemble.hpp"
#include "wavelab/error.hpp"
#include "wavelab/qv.hpp"
#include "wavelab/stats.hpp"

#include "../oracles/oracles.hpp"
#include "doctest.h"

#include <cmath>
#include <set>

using namespace wavelab;

TEST_SUITE("quadratic_variation")
{
    TEST_CASE("temporal partition alignment")
    {
        const double h = 1.0 / 64;
        CHECK(admissible_temporal_n(h, 1.0, 0.0) == std::vector<int>{2, 4, 8, 16, 32});
        const auto p = TemporalPartition::align(h, 1.0, 0.0, 32);
        CHECK(p.step == 2);
        CHECK(p.level(33) == 64);
        try {
            TemporalPartition::align(h, 1.0, 0.0, 48);
            FAIL("N = 48 accepted");
        } catch (const AlignmentError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("nearest admissible N = 32") != std::string::npos);
            CHECK(msg.find("{2,4,8,16,32}") != std::string::npos);
        }
    }

    TEST_CASE("spatial partition alignment")
    {
        const double h = 1.0 / 64;
        const auto p = SpatialPartition::align(h, 1.0, 0.0, 1.0, 32);
        CHECK(p.step == 2);
        CHECK(p.column(1) == 0);
        CHECK(p.column(33) == 64);
        CHECK_THROWS_AS(SpatialPartition::align(h, 1.0, 0.0, 1.0, 64), AlignmentError);
        CHECK_THROWS_AS(SpatialPartition::align(h, 1.0, 0.0, 1.0, 48), AlignmentError);
    }

    TEST_CASE("temporal shells tile the cone without overlap")
    {
        const auto p = TemporalPartition::align(1.0 / 32, 1.0, 0.0, 8);
        const auto shells = temporal_shells(p);
        std::set<NoiseCell> seen;
        long units = 0;
        for (std::size_t i = 0; i < shells.size(); ++i) {
            long shell_units = 0;
            for (const auto& c : shells[i]) {
                CHECK(seen.insert(c).second);
                shell_units += c.area_units();
            }
            const long lo = static_cast<long>(p.level(static_cast<int>(i) + 1));
            const long hi = static_cast<long>(p.level(static_cast<int>(i) + 2));
            CHECK(shell_units == hi * hi - lo * lo);
            units += shell_units;
        }
        CHECK(units == 32L * 32L);
    }

    TEST_CASE("spatial shell areas: formula, library and corner oracle agree")
    {
        for (int N : {8, 16, 32}) {
            const double h = 1.0 / N;
            for (int parts : {2, 4}) {
                const auto p = SpatialPartition::align(h, 1.0, 0.0, 1.0, parts);
                const auto shells = spatial_shells(p);
                for (const auto& s : shells) {
                    long l = 0, r = 0;
                    for (const auto& c : s.left)
                        l += c.area_units();
                    for (const auto& c : s.right)
                        r += c.area_units();
                    const long formula = static_cast<long>(N) * p.step - static_cast<long>(p.step) * p.step / 4;
                    CHECK(l == formula);
                    CHECK(r == formula);
                    CHECK(l == oracle::spatial_left_units(N, p.step));
                    CHECK(spatial_shell_area(1.0, p.delta(h)) == doctest::Approx(formula * h * h));
                }
            }
        }
    }

    TEST_CASE("boundary maps land on field points")
    {
        const auto p = TemporalPartition::align(1.0 / 64, 1.0, 0.0, 16);
        for (int i = 1; i <= 16; ++i)
            for (int m = -64; m <= 64; ++m) {
                const int lvl = temporal_boundary_level(p, i, m);
                CHECK(lvl >= 0);
                CHECK((lvl == 0 || ((lvl + m) & 1) == 0));
            }
    }

    TEST_CASE("constant sigma: limit functionals are exact areas")
    {
        const double c = 0.7;
        const auto lat = LatticeSpec::covering(1.0 / 64, {{64, -64}, {64, 64}});
        const auto u = solve_wave(SigmaSpec::constant(c), make_noise(2, lat));
        const auto forms = temporal_qv_limit_forms(u, 1.0, 0.0);
        CHECK(forms.cell_form == doctest::Approx(c * c).epsilon(1e-12));
        CHECK(forms.characteristic_form == doctest::Approx(c * c).epsilon(1e-12));
        CHECK(spatial_qv_limit(u, 1.0, 0.0, 1.0) == doctest::Approx(2.0 * c * c).epsilon(1e-12));
        CHECK(naive_qv_prediction(u, 1.0, 0.0, 1.0) == doctest::Approx(2.0 * c * c).epsilon(1e-12));
    }

    TEST_CASE("sigma = 1: ensemble means of the sums match exact areas")
    {
        const double h = 1.0 / 64;
        const auto tp = TemporalPartition::align(h, 1.0, 0.0, 16);
        const auto sp = SpatialPartition::align(h, 1.0, 0.0, 1.0, 16);
        const auto lat = LatticeSpec::covering(h, {{64, 0}, {64, 64}});
        const auto vals = run_replicates(800, 1, 0, [&](std::uint64_t seed) {
            const auto u = solve_wave(SigmaSpec::constant(1.0), make_noise(seed, lat));
            return std::pair{temporal_qv(u, tp), spatial_qv(u, sp)};
        });
        std::vector<double> a, s;
        for (const auto& [x, y] : vals) {
            a.push_back(x);
            s.push_back(y);
        }
        const auto ma = stats::moments(a);
        const auto ms = stats::moments(s);
        CHECK(std::abs(ma.mean - 1.0) < 4.0 * ma.std_error);
        const double exact = 2.0 * 16 * spatial_shell_area(1.0, sp.delta(h));
        CHECK(std::abs(ms.mean - exact) < 4.0 * ms.std_error);
    }

    TEST_CASE("proof ladder: constant sigma collapses A = B and C = D")
    {
        const double h = 1.0 / 64;
        const auto lat = LatticeSpec::covering(h, {{64, 0}});
        const auto noise = make_noise(6, lat);
        const auto u = solve_wave(SigmaSpec::constant(1.0), noise);
        const auto part = TemporalPartition::align(h, 1.0, 0.0, 8);
        const auto l = proof_ladder_temporal(u, noise, part);
        CHECK(l.a == doctest::Approx(l.b).epsilon(1e-12));
        CHECK(l.c == doctest::Approx(l.d).epsilon(1e-12));
        CHECK(l.a == doctest::Approx(temporal_qv(u, part)).epsilon(1e-12));
        CHECK(l.d == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("multi-partition ladder equals single-partition ladders")
    {
        const double h = 1.0 / 64;
        const auto lat = LatticeSpec::covering(h, {{64, 0}});
        const auto noise = make_noise(9, lat);
        const auto u = solve_wave(SigmaSpec::linear(1.0), noise);
        std::vector<TemporalPartition> parts;
        for (int n : {4, 8, 16})
            parts.push_back(TemporalPartition::align(h, 1.0, 0.0, n));
        const auto all = proof_ladder_temporal(u, noise, parts);
        for (std::size_t k = 0; k < parts.size(); ++k) {
            const auto one = proof_ladder_temporal(u, noise, parts[k]);
            CHECK(all[k].a == doctest::Approx(one.a).epsilon(1e-13));
            CHECK(all[k].b == doctest::Approx(one.b).epsilon(1e-13));
            CHECK(all[k].c == doctest::Approx(one.c).epsilon(1e-13));
            CHECK(all[k].d == doctest::Approx(one.d).epsilon(1e-13));
        }
    }

    TEST_CASE("study report rows and replicate warning")
    {
        QVStudyConfig cfg;
        cfg.h = 1.0 / 64;
        cfg.n_ladder = {4, 8, 16, 32};
        cfg.replicates = 40;
        const auto r = qv_convergence_study(cfg);
        CHECK(r.row(8, "qv_mean").value > 0);
        CHECK(r.fit("gap_norm", 2.0).points == 4);
        CHECK_FALSE(r.warnings.empty());
        CHECK_THROWS(r.row(7, "qv_mean"));
    }
}
