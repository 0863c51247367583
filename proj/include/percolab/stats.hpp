#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace percolab {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

/// Indicator average with a Wilson score 95% interval.
struct BernoulliEstimate {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;

    /// sqrt(point (1 - point) / trials)
    double std_error() const;
};

BernoulliEstimate make_bernoulli_estimate(std::uint64_t successes, std::uint64_t trials);

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

/// Sample mean with a normal-approximation 95% interval.
struct MeanEstimate {
    double mean = 0.0;
    double sample_sd = 0.0;
    std::uint64_t trials = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;

    double std_error() const;
};

/// Mean estimate of scale * X from exact integer sums of X and X^2.
MeanEstimate make_mean_estimate(double sum, double sum_squares, std::uint64_t trials, double scale = 1.0);

struct DecayPoint {
    int n = 0;
    double value = 0.0;
};

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<int> used;
    /// n values dropped because the estimate was zero.
    std::vector<int> dropped;
};

/// Least-squares line through (n, log value). Non-positive values are
/// dropped and listed; throws ConfigError with fewer than 3 usable points.
/// r^2 is 1 when the log values are all equal.
DecayFit fit_decay(const std::vector<DecayPoint>& points);

}  // namespace percolab
