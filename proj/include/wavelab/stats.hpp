#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace wavelab::stats {

struct Moments {
    double mean = 0.0;
    double variance = 0.0; ///< unbiased, two-pass
    double std_error = 0.0;
    std::size_t count = 0;
};

/// Throws PreconditionError on an empty sample.
Moments moments(std::span<const double> xs);
double mean(std::span<const double> xs);
/// Mean of |x|^p.
double abs_moment(std::span<const double> xs, double p);
/// (E|x|^p)^{1/p}.
double lp_norm(std::span<const double> xs, double p);

struct Interval {
    double lo;
    double hi;
};
/// Normal-approximation confidence interval for the mean.
Interval mean_ci(const Moments& m, double z = 1.959963984540054);

double normal_cdf(double x);

/// Two-sided Kolmogorov-Smirnov distance to the standard normal CDF.
double ks_normal(std::span<const double> xs);
/// Asymptotic 5% critical value 1.358 / sqrt(n).
double ks_critical_5pct(std::size_t n);

/// Linear interpolation quantile (type 7) of an unsorted sample.
double quantile(std::span<const double> xs, double q);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_std_error = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares y = a + b x; PreconditionError for fewer than two points.
LineFit ols(std::span<const double> x, std::span<const double> y);
/// OLS of log y on log x; PreconditionError on non-positive values.
LineFit loglog_fit(std::span<const double> x, std::span<const double> y);

/// Replicate-indexed sample. Merging is a keyed union, so any merge order
/// yields identical statistics.
class SampleSet {
public:
    void add(std::uint64_t replicate, double value) { values_[replicate] = value; }
    void merge(const SampleSet& other);
    std::vector<double> ordered() const;
    std::size_t size() const { return values_.size(); }
    Moments summary() const;

private:
    std::map<std::uint64_t, double> values_;
};

} // namespace wavelab::stats
