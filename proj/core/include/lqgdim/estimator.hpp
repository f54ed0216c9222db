#ifndef LQGDIM_ESTIMATOR_HPP
#define LQGDIM_ESTIMATOR_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace lqgdim {

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    int n_points = 0;
    int n_replicates = 1;
    double x_lo = 0.0;  // fitting range in the original (not log) scale
    double x_hi = 0.0;
};

/// OLS of log y on log x. Requires at least 3 distinct x values.
ExponentFit fit_loglog(const std::vector<std::pair<double, double>>& samples);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Percentile bootstrap interval over replicate-level slopes.
/// level in (0.5, 1); at least 10 replicates.
Interval replicate_ci(const std::vector<double>& replicate_slopes, double level,
                      std::uint64_t seed = 0);

struct ValueWithError {
    double value = 0.0;
    double stderr_value = 0.0;
};

/// d = 1/slope with delta-method error propagation.
ValueWithError d_from_lgd_slope(double slope, double slope_stderr = 0.0);

} // namespace lqgdim

#endif
