#include "percolab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "percolab/errors.hpp"

namespace percolab {

double BernoulliEstimate::std_error() const
{
    if (trials == 0) {
        return 0.0;
    }
    return std::sqrt(point * (1.0 - point) / static_cast<double>(trials));
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z)
{
    if (trials == 0) {
        throw ConfigError("Wilson interval needs at least one trial");
    }
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (phat + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    double lo = std::clamp(centre - half, 0.0, 1.0);
    double hi = std::clamp(centre + half, 0.0, 1.0);
    // rounding can push an endpoint past the point at the extremes
    return {std::min(lo, phat), std::max(hi, phat)};
}

BernoulliEstimate make_bernoulli_estimate(std::uint64_t successes, std::uint64_t trials)
{
    if (trials == 0) {
        throw ConfigError("trials must be positive");
    }
    BernoulliEstimate e;
    e.successes = successes;
    e.trials = trials;
    e.point = static_cast<double>(successes) / static_cast<double>(trials);
    std::tie(e.ci_low, e.ci_high) = wilson_interval(successes, trials);
    return e;
}

double MeanEstimate::std_error() const
{
    if (trials == 0) {
        return 0.0;
    }
    return sample_sd / std::sqrt(static_cast<double>(trials));
}

MeanEstimate make_mean_estimate(double sum, double sum_squares, std::uint64_t trials, double scale)
{
    if (trials == 0) {
        throw ConfigError("trials must be positive");
    }
    const double n = static_cast<double>(trials);
    const double mean = sum / n;
    double var = 0.0;
    if (trials > 1) {
        var = std::max(0.0, (sum_squares - sum * mean) / (n - 1.0));
    }
    MeanEstimate e;
    e.trials = trials;
    e.mean = scale * mean;
    e.sample_sd = scale * std::sqrt(var);
    const double half = kZ95 * e.std_error();
    e.ci_low = e.mean - half;
    e.ci_high = e.mean + half;
    return e;
}

DecayFit fit_decay(const std::vector<DecayPoint>& points)
{
    DecayFit fit;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& pt : points) {
        if (pt.value > 0.0 && std::isfinite(pt.value)) {
            xs.push_back(static_cast<double>(pt.n));
            ys.push_back(std::log(pt.value));
            fit.used.push_back(pt.n);
        } else {
            fit.dropped.push_back(pt.n);
        }
    }
    if (xs.size() < 3) {
        throw ConfigError("decay fit needs at least 3 points with a positive estimate, got " +
                          std::to_string(xs.size()));
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw ConfigError("decay fit needs at least two distinct n values");
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
            ss_res += r * r;
        }
        fit.r_squared = 1.0 - ss_res / syy;
    }
    return fit;
}

}  // namespace percolab
