#include "wavelab/error.hpp"
#include "wavelab/linearize.hpp"

#include "doctest.h"

#include <cmath>

using namespace wavelab;

TEST_SUITE("linearization_probe")
{
    TEST_CASE("constant sigma: zero wave defect to machine precision")
    {
        const double h = 1.0 / 128;
        const std::vector<double> scales{2 * h, 4 * h, 8 * h, 16 * h};
        const auto lat = LatticeSpec::covering(h, {{128, 0}, {128, 16}});
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto [u, y] = solve_coupled_linearization(SigmaSpec::constant(0.6), make_noise(seed, lat));
            for (const auto& s : wave_defect(u, y, 1.0, 0.0, scales))
                CHECK(std::abs(s.defect) < 1e-12);
        }
    }

    TEST_CASE("constant sigma: zero heat defect to machine precision")
    {
        const auto g = HeatGridSpec::create(1.0 / 64, 1.0, 1.0 / 256);
        const std::vector<double> scales{1.0 / 64, 1.0 / 32, 1.0 / 16};
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto [v, z] = solve_coupled_heat_linearization(SigmaSpec::constant(2.0), seed, g);
            for (const auto& s : heat_defect(v, z, 1.0 / 256, 0.5, scales))
                CHECK(std::abs(s.defect) < 1e-12);
        }
    }

    TEST_CASE("uncoupled fields are rejected")
    {
        const double h = 1.0 / 64;
        const auto lat = LatticeSpec::covering(h, {{64, 0}, {64, 8}});
        const auto u = solve_wave(SigmaSpec::linear(1.0), make_noise(1, lat));
        const auto y_other = solve_wave(SigmaSpec::constant(1.0), make_noise(2, lat));
        const auto y_wrong = solve_wave(SigmaSpec::constant(2.0), make_noise(1, lat));
        const std::vector<double> scales{2 * h};
        CHECK_THROWS_AS(wave_defect(u, y_other, 1.0, 0.0, scales), PreconditionError);
        CHECK_THROWS_AS(wave_defect(u, y_wrong, 1.0, 0.0, scales), PreconditionError);
        const auto g = HeatGridSpec::create(1.0 / 64, 1.0, 1.0 / 256);
        const auto v = solve_heat(SigmaSpec::linear(1.0), 1, g);
        const auto z = solve_heat(SigmaSpec::constant(1.0), 2, g);
        CHECK_THROWS_AS(heat_defect(v, z, 1.0 / 256, 0.0, scales), PreconditionError);
    }

    TEST_CASE("defect is unchanged by a constant shift of the linearized field")
    {
        // Y + k has the same increments as Y, so the defect cannot move.
        const double h = 1.0 / 64;
        const auto lat = LatticeSpec::covering(h, {{64, 0}, {64, 16}});
        const auto [u, y] = solve_coupled_linearization(SigmaSpec::linear(1.0), make_noise(5, lat));
        std::vector<double> shifted(y.values().begin(), y.values().end());
        for (double& v : shifted)
            v += 3.25;
        const WaveField y2(y.lattice(), y.sigma(), y.seed(), shifted);
        const std::vector<double> scales{2 * h, 4 * h, 8 * h, 16 * h};
        const auto a = wave_defect(u, y, 1.0, 0.0, scales);
        const auto b = wave_defect(u, y2, 1.0, 0.0, scales);
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k].increment == doctest::Approx(b[k].increment).epsilon(1e-12));
            CHECK(a[k].defect == doctest::Approx(b[k].defect).epsilon(1e-12));
        }
    }

    TEST_CASE("report invariants")
    {
        LinearizationConfig cfg;
        cfg.h = 1.0 / 64;
        cfg.scales = {1.0 / 4, 1.0 / 32, 1.0 / 16, 1.0 / 8};
        cfg.replicates = 50;
        const auto r = linearization_study(cfg);
        REQUIRE(r.rows.size() == 4);
        for (std::size_t k = 0; k < r.rows.size(); ++k) {
            CHECK(r.rows[k].increment_norm > 0);
            CHECK(r.rows[k].defect_norm >= 0);
            CHECK(std::isfinite(r.rows[k].ratio));
            if (k > 0)
                CHECK(r.rows[k].scale > r.rows[k - 1].scale);
        }
        CHECK(r.threshold_note.find("pilot-calibrated") != std::string::npos);
        cfg.scales = {3.0 / 64};
        CHECK_THROWS_AS(linearization_study(cfg), AlignmentError);
    }
}
