#include "lqgdim/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lqgdim/rng.hpp"

namespace lqgdim {

ExponentFit fit_loglog(const std::vector<std::pair<double, double>>& samples) {
    std::set<double> distinct;
    for (const auto& [x, y] : samples) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("fit_loglog: samples must be positive");
        distinct.insert(x);
    }
    if (distinct.size() < 3)
        throw std::invalid_argument("fit_loglog: need at least 3 distinct x values");

    const std::size_t n = samples.size();
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : samples) {
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / n;
    const double my = sy / n;

    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : samples) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }

    ExponentFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.n_points = static_cast<int>(n);
    fit.x_lo = *distinct.begin();
    fit.x_hi = *distinct.rbegin();

    if (n > 2) {
        double rss = 0.0;
        for (const auto& [x, y] : samples) {
            const double resid = std::log(y) - (fit.intercept + fit.slope * std::log(x));
            rss += resid * resid;
        }
        fit.stderr_slope = std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx);
    }
    return fit;
}

Interval replicate_ci(const std::vector<double>& replicate_slopes, double level,
                      std::uint64_t seed) {
    if (replicate_slopes.size() < 10)
        throw std::invalid_argument("replicate_ci: need at least 10 replicates");
    if (!(level > 0.5 && level < 1.0))
        throw std::invalid_argument("replicate_ci: level must be in (0.5, 1)");

    constexpr int kResamples = 2000;
    const std::size_t m = replicate_slopes.size();
    GaussianRng rng(derive_seed(seed, 0x626f6f74));  // independent resampling stream

    std::vector<double> means(kResamples);
    for (int b = 0; b < kResamples; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            sum += replicate_slopes[static_cast<std::size_t>(rng.uniform() * m) % m];
        means[b] = sum / static_cast<double>(m);
    }
    std::sort(means.begin(), means.end());

    const double alpha = 1.0 - level;
    auto quantile = [&](double q) {
        const double pos = q * (kResamples - 1);
        const int lo = static_cast<int>(pos);
        const int hi = std::min(lo + 1, kResamples - 1);
        return means[lo] + (pos - lo) * (means[hi] - means[lo]);
    };
    return Interval{quantile(0.5 * alpha), quantile(1.0 - 0.5 * alpha)};
}

ValueWithError d_from_lgd_slope(double slope, double slope_stderr) {
    if (!(slope > 0.0)) throw std::invalid_argument("d_from_lgd_slope: slope must be > 0");
    ValueWithError out;
    out.value = 1.0 / slope;
    out.stderr_value = slope_stderr / (slope * slope);
    return out;
}

} // namespace lqgdim
