#include "lqgdim/lqg_measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqgdim/field_sampler.hpp"

namespace lqgdim {

namespace {
constexpr double kLogClamp = 700.0;  // exp() overflow guard

double trapezoid_weight(int idx, int n, double spacing) {
    return (idx == 0 || idx == n - 1) ? 0.5 * spacing : spacing;
}
} // namespace

MassGrid::MassGrid(const GridField& field, Gamma gamma)
    : spec_(field.spec), field_(field), gamma_(gamma.value()) {
    const int n = spec_.n;
    const double g = gamma_;

    std::vector<double> site_var(spec_.size());
    switch (field.kind) {
        case FieldKind::whitenoise:
            std::fill(site_var.begin(), site_var.end(), std::log(1.0 / field.scale_t));
            break;
        case FieldKind::dgff_zero_boundary:
            site_var = dgff_variance_grid(n);
            break;
        default:
            throw std::invalid_argument(
                "MassGrid: field kind must be whitenoise or dgff_zero_boundary");
    }

    mass_.resize(spec_.size());
    for (int i = 0; i < n; ++i) {
        const double wy = trapezoid_weight(i, n, spec_.spacing);
        for (int j = 0; j < n; ++j) {
            const double wx = trapezoid_weight(j, n, spec_.spacing);
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            double log_mass =
                std::log(wx * wy) + g * field.values[idx] - 0.5 * g * g * site_var[idx];
            if (log_mass > kLogClamp) {
                log_mass = kLogClamp;
                ++clamped_;
            }
            mass_[idx] = std::exp(log_mass);
        }
    }

    total_ = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += mass_[static_cast<std::size_t>(i) * n + j];
        total_ += row;
    }
}

double MassGrid::ball_mass(Point center, double r) const {
    if (r < 0.0) return 0.0;
    const int n = spec_.n;
    const double h = spec_.spacing;
    const double r2 = r * r;

    // chord bounds only prune; membership is always the exact closed
    // disk predicate, and rows accumulate as subtotals, matching a
    // naive double loop exactly
    const int i_lo = std::max(0, static_cast<int>(std::ceil((center.y - r - spec_.origin.y) / h)) - 1);
    const int i_hi = std::min(n - 1, static_cast<int>(std::floor((center.y + r - spec_.origin.y) / h)) + 1);

    double sum = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) {
        const double dy = spec_.origin.y + i * h - center.y;
        if (dy * dy > r2) continue;
        const double w = std::sqrt(r2 - dy * dy);
        const int j_lo = std::max(0, static_cast<int>(std::ceil((center.x - w - spec_.origin.x) / h)) - 1);
        const int j_hi = std::min(n - 1, static_cast<int>(std::floor((center.x + w - spec_.origin.x) / h)) + 1);
        double row = 0.0;
        for (int j = j_lo; j <= j_hi; ++j) {
            const double dx = spec_.origin.x + j * h - center.x;
            if (dx * dx + dy * dy <= r2) row += mass_[static_cast<std::size_t>(i) * n + j];
        }
        sum += row;
    }
    return sum;
}

CriticalRadii critical_radii(const MassGrid& measure, const GridField& field, double eps) {
    const GridSpec& spec = measure.spec();
    const int n = spec.n;
    const double h = spec.spacing;
    if (!(eps > 0.0)) throw std::invalid_argument("critical_radii: eps must be > 0");

    CriticalRadii out;
    out.spec = spec;
    out.eps = eps;
    out.r_bar.resize(spec.size());
    out.r_under.resize(spec.size());

    const double side = (n - 1) * h;
    const double r_max = side * std::sqrt(2.0);
    const double tol = h / 4.0;
    const double g = measure.gamma();
    const double mass_exp = 2.0 + 0.5 * g * g;

    std::size_t degenerate = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Point z = spec.site(i, j);

            // r_bar: sup{r : mu(B_{2r}(z)) <= eps}, mu monotone in r
            double r;
            if (measure.ball_mass(z, 2.0 * r_max) <= eps) {
                r = r_max;
            } else {
                double lo = 0.0, hi = r_max;
                while (hi - lo > tol) {
                    const double mid = 0.5 * (lo + hi);
                    if (measure.ball_mass(z, 2.0 * mid) <= eps)
                        lo = mid;  // ties resolve upward (sup convention)
                    else
                        hi = mid;
                }
                r = lo;
            }
            out.r_bar[static_cast<std::size_t>(i) * n + j] = r;
            if (r < h) ++degenerate;

            // r_under: same search against the circle-average proxy
            auto proxy_ok = [&](double rr) {
                const double avg = circle_average(field, z, rr, /*clamp=*/true);
                return g * avg + mass_exp * std::log(rr) <= std::log(eps);
            };
            double lo = tol, hi = r_max;
            if (proxy_ok(hi)) {
                out.r_under[static_cast<std::size_t>(i) * n + j] = hi;
            } else {
                while (hi - lo > tol) {
                    const double mid = 0.5 * (lo + hi);
                    if (proxy_ok(mid))
                        lo = mid;
                    else
                        hi = mid;
                }
                out.r_under[static_cast<std::size_t>(i) * n + j] = lo;
            }
        }
    }
    out.degenerate_fraction = static_cast<double>(degenerate) / spec.size();
    out.resolution_warning = out.degenerate_fraction > 0.01;
    return out;
}

bool rescale_identity_check(const MassGrid& measure, double c) {
    GridField shifted = measure.field();
    for (double& v : shifted.values) v += c;
    const MassGrid other(shifted, Gamma(measure.gamma()));
    const double factor = std::exp(measure.gamma() * c);
    for (std::size_t idx = 0; idx < measure.cell_masses().size(); ++idx) {
        const double expect = factor * measure.cell_masses()[idx];
        if (std::abs(other.cell_masses()[idx] - expect) > 1e-12 * std::abs(expect))
            return false;
    }
    return true;
}

} // namespace lqgdim
