#include "wavelab/stats.hpp"

#include "wavelab/error.hpp"

#include <algorithm>
#include <cmath>

namespace wavelab::stats {

Moments moments(std::span<const double> xs)
{
    if (xs.empty())
        throw PreconditionError("statistics of an empty sample");
    Moments m;
    m.count = xs.size();
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    m.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        double comp = 0.0;
        for (double x : xs) {
            ss += (x - m.mean) * (x - m.mean);
            comp += x - m.mean;
        }
        const auto n = static_cast<double>(xs.size());
        m.variance = (ss - comp * comp / n) / (n - 1.0);
        m.std_error = std::sqrt(m.variance / n);
    }
    return m;
}

double mean(std::span<const double> xs)
{
    return moments(xs).mean;
}

double abs_moment(std::span<const double> xs, double p)
{
    if (xs.empty())
        throw PreconditionError("statistics of an empty sample");
    double sum = 0.0;
    for (double x : xs)
        sum += std::pow(std::abs(x), p);
    return sum / static_cast<double>(xs.size());
}

double lp_norm(std::span<const double> xs, double p)
{
    return std::pow(abs_moment(xs, p), 1.0 / p);
}

Interval mean_ci(const Moments& m, double z)
{
    return {m.mean - z * m.std_error, m.mean + z * m.std_error};
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double ks_normal(std::span<const double> xs)
{
    if (xs.empty())
        throw PreconditionError("KS statistic of an empty sample");
    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    const auto n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = normal_cdf(s[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_critical_5pct(std::size_t n)
{
    return 1.358 / std::sqrt(static_cast<double>(n));
}

double quantile(std::span<const double> xs, double q)
{
    if (xs.empty())
        throw PreconditionError("quantile of an empty sample");
    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

LineFit ols(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw PreconditionError("ols: abscissa and ordinate lengths differ");
    if (x.size() < 2)
        throw PreconditionError("ols: slope needs at least two points");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw PreconditionError("ols: abscissae are all equal");
    LineFit fit;
    fit.points = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (x.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.slope_std_error = std::sqrt(rss / (n - 2.0) / sxx);
    }
    return fit;
}

LineFit loglog_fit(std::span<const double> x, std::span<const double> y)
{
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0))
            throw PreconditionError("loglog_fit: values must be positive");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    if (x.size() != y.size())
        throw PreconditionError("loglog_fit: abscissa and ordinate lengths differ");
    return ols(lx, ly);
}

void SampleSet::merge(const SampleSet& other)
{
    for (const auto& [k, v] : other.values_)
        values_[k] = v;
}

std::vector<double> SampleSet::ordered() const
{
    std::vector<double> out;
    out.reserve(values_.size());
    for (const auto& kv : values_)
        out.push_back(kv.second);
    return out;
}

Moments SampleSet::summary() const
{
    const auto v = ordered();
    return moments(v);
}

} // namespace wavelab::stats
