#include "wavelab/error.hpp"
#include "wavelab/philox.hpp"
#include "wavelab/sigma.hpp"
#include "wavelab/stats.hpp"

#include "doctest.h"

#include <cmath>
#include <vector>

using namespace wavelab;

TEST_SUITE("experiment_cli")
{
    TEST_CASE("constant samples")
    {
        const std::vector<double> xs{1, 1, 1};
        const auto m = stats::moments(xs);
        CHECK(m.mean == 1.0);
        CHECK(m.variance == 0.0);
        CHECK(m.std_error == 0.0);
    }

    TEST_CASE("two-pass variance survives a large offset")
    {
        const std::vector<double> xs{1e9 + 4, 1e9 + 7, 1e9 + 13, 1e9 + 16};
        CHECK(stats::moments(xs).variance == doctest::Approx(30.0));
    }

    TEST_CASE("standard error is sqrt(variance / count)")
    {
        const std::vector<double> xs{0.5, 1.5, 2.0, 4.0, -1.0};
        const auto m = stats::moments(xs);
        CHECK(m.std_error == doctest::Approx(std::sqrt(m.variance / 5.0)));
    }

    TEST_CASE("exact power law slope")
    {
        const std::vector<double> x{1, 2, 4, 8};
        std::vector<double> y;
        for (double v : x)
            y.push_back(std::pow(v, -0.5));
        const auto fit = stats::loglog_fit(x, y);
        CHECK(std::abs(fit.slope + 0.5) < 1e-14);
        CHECK(fit.slope_std_error < 1e-13);
        CHECK_THROWS_AS(stats::loglog_fit(std::vector<double>{1}, std::vector<double>{1}), PreconditionError);
        CHECK_THROWS_AS(stats::loglog_fit(std::vector<double>{1, 2}, std::vector<double>{1, -1}), PreconditionError);
    }

    TEST_CASE("KS of standard normals passes at 5% in at least 94% of trials")
    {
        // 1000 trials: at 100 the 94% bar fails a correct generator about a quarter of the time
        int pass = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<double> xs;
            for (int i = 0; i < 10000; ++i)
                xs.push_back(stream_normal(1000 + trial, NoiseStream::Auxiliary, i, 0));
            pass += stats::ks_normal(xs) < stats::ks_critical_5pct(xs.size()) ? 1 : 0;
        }
        CHECK(pass >= 940);
    }

    TEST_CASE("KS rejects a shifted sample")
    {
        std::vector<double> xs;
        for (int i = 0; i < 2000; ++i)
            xs.push_back(0.2 + stream_normal(5, NoiseStream::Auxiliary, i, 1));
        CHECK(stats::ks_normal(xs) > stats::ks_critical_5pct(xs.size()));
    }

    TEST_CASE("quantiles")
    {
        const std::vector<double> xs{5, 1, 4, 2, 3};
        CHECK(stats::quantile(xs, 0.0) == 1.0);
        CHECK(stats::quantile(xs, 0.5) == 3.0);
        CHECK(stats::quantile(xs, 0.25) == 2.0);
        CHECK(stats::quantile(xs, 1.0) == 5.0);
    }

    TEST_CASE("sample sets merge in any order")
    {
        stats::SampleSet a, b, c, ab_c, c_ba;
        for (std::uint64_t i = 0; i < 30; ++i)
            (i % 3 == 0 ? a : i % 3 == 1 ? b : c).add(i, std::sin(static_cast<double>(i)));
        ab_c = a;
        ab_c.merge(b);
        ab_c.merge(c);
        c_ba = c;
        c_ba.merge(b);
        c_ba.merge(a);
        CHECK(ab_c.ordered() == c_ba.ordered());
        CHECK(ab_c.summary().mean == c_ba.summary().mean);
        CHECK(ab_c.summary().variance == c_ba.summary().variance);
    }

    TEST_CASE("sigma parsing and description round trip")
    {
        for (const char* s : {"const:2", "linear:1", "affine:0.5,-0.25", "sine:3"}) {
            const auto sig = SigmaSpec::parse(s);
            CHECK(SigmaSpec::parse(sig.describe()) == sig);
        }
        CHECK(SigmaSpec::parse("linear:2")(3.0) == 6.0);
        CHECK(SigmaSpec::parse("affine:1,2")(3.0) == 7.0);
        CHECK(SigmaSpec::parse("const:0.5").is_constant());
        CHECK(SigmaSpec::parse("sine:2").lipschitz_bound() == 2.0);
        CHECK_THROWS_AS(SigmaSpec::parse("cubic:1"), ConfigError);
        CHECK_THROWS_AS(SigmaSpec::parse("affine:1"), ConfigError);
        CHECK_THROWS_AS(SigmaSpec::parse("linear:x"), ConfigError);
    }
}
