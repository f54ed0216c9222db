#include "lqgdim/field_sampler.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include "lqgdim/rng.hpp"

namespace lqgdim {

namespace {

// FFTW plan creation is not thread-safe; execution via the new-array
// interface is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct GaussLegendre {
    std::vector<double> nodes;   // on [-1,1]
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        gl.weights[i] = gl.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return gl;
}

const GaussLegendre& gl64() {
    static const GaussLegendre gl = gauss_legendre(64);
    return gl;
}

int dyadic_level(double t_min) {
    if (!(t_min > 0.0 && t_min <= 1.0))
        throw std::invalid_argument("t_min must lie in (0,1]");
    const double k = std::log2(1.0 / t_min);
    const int ki = static_cast<int>(std::lround(k));
    if (std::abs(k - ki) > 1e-9)
        throw std::invalid_argument("t_min must be dyadic");
    return ki;
}

constexpr double kTruncRadius = 0.1; // kernel killed outside this radius

// Single-reflection approximation of the heat kernel killed outside
// the radius-1/10 disk around the source, evaluated at distance rho.
double killed_kernel(double s, double rho) {
    if (rho >= kTruncRadius) return 0.0;
    const double mirror = 2.0 * kTruncRadius - rho;
    const double v = (std::exp(-rho * rho / s) - std::exp(-mirror * mirror / s)) / (M_PI * s);
    return v > 0.0 ? v : 0.0;
}

} // namespace

double layer_covariance(double r, double t_hi, double t_lo) {
    if (!(t_lo > 0.0 && t_lo < t_hi))
        throw std::invalid_argument("layer_covariance: need 0 < t_lo < t_hi");
    // (1/2) int_{t_lo^2}^{t_hi^2} s^{-1} exp(-r^2/(2s)) ds, on u = log s
    const double u_lo = 2.0 * std::log(t_lo);
    const double u_hi = 2.0 * std::log(t_hi);
    const double mid = 0.5 * (u_hi + u_lo);
    const double half = 0.5 * (u_hi - u_lo);
    const auto& gl = gl64();
    double sum = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double u = mid + half * gl.nodes[i];
        sum += gl.weights[i] * std::exp(-0.5 * r * r * std::exp(-u));
    }
    return 0.5 * half * sum;
}

RadialTable::RadialTable(double dr, std::vector<double> values, double support)
    : dr_(dr), support_(support), values_(std::move(values)) {
    if (!(dr > 0.0) || values_.empty())
        throw std::invalid_argument("RadialTable: bad arguments");
}

double RadialTable::operator()(double r) const {
    if (r < 0.0) r = -r;
    if (r >= support_) return 0.0;
    const double f = r / dr_;
    const std::size_t i = static_cast<std::size_t>(f);
    if (i + 1 >= values_.size()) return 0.0;
    const double t = f - i;
    return (1.0 - t) * values_[i] + t * values_[i + 1];
}

RadialTable truncated_layer_covariance(double t_hi, double t_lo, double dr) {
    if (!(t_lo > 0.0 && t_lo < t_hi))
        throw std::invalid_argument("truncated_layer_covariance: need 0 < t_lo < t_hi");
    const double r_max = 2.0 * kTruncRadius;
    const std::size_t count = static_cast<std::size_t>(r_max / dr) + 2;

    const auto& gl = gl64();
    static const GaussLegendre gl_s = gauss_legendre(32);

    // s-quadrature on log scale
    const double u_lo = 2.0 * std::log(t_lo);
    const double u_hi = 2.0 * std::log(t_hi);
    const double s_mid = 0.5 * (u_hi + u_lo);
    const double s_half = 0.5 * (u_hi - u_lo);

    std::vector<double> values(count, 0.0);
    for (std::size_t ir = 0; ir < count; ++ir) {
        const double r = ir * dr;
        if (r >= r_max) break;  // disjoint supports: exactly zero
        double c = 0.0;
        for (std::size_t is = 0; is < gl_s.nodes.size(); ++is) {
            const double u = s_mid + s_half * gl_s.nodes[is];
            const double s = std::exp(u);
            // A(s,r) = int_{R^2} q(|w|) q(|w - r e1|) dw in polar form
            double a = 0.0;
            for (std::size_t ip = 0; ip < gl.nodes.size(); ++ip) {
                const double rho = 0.5 * kTruncRadius * (gl.nodes[ip] + 1.0);
                const double w_rho = 0.5 * kTruncRadius * gl.weights[ip];
                const double q1 = killed_kernel(s, rho);
                if (q1 == 0.0) continue;
                double ring = 0.0;
                for (std::size_t it = 0; it < gl.nodes.size(); ++it) {
                    const double theta = 0.5 * M_PI * (gl.nodes[it] + 1.0);
                    const double w_t = 0.5 * M_PI * gl.weights[it];
                    const double d2 = rho * rho + r * r - 2.0 * rho * r * std::cos(theta);
                    ring += w_t * killed_kernel(s, std::sqrt(std::max(d2, 0.0)));
                }
                a += w_rho * q1 * 2.0 * ring * rho;  // both half-circles
            }
            c += gl_s.weights[is] * s * a;  // ds = s du
        }
        values[ir] = M_PI * s_half * c;
    }
    return RadialTable(dr, std::move(values), r_max);
}

// ---------------------------------------------------------------------------
// LayeredSampler

struct LayeredSampler::Impl {
    GridSpec spec;
    bool truncated = false;
    int padding = 3;
    int M = 0;  // torus side
    std::vector<double> scales;
    // per layer: sqrt(lambda / M^2) for every torus mode, row-major
    std::vector<std::vector<double>> spectra;
    std::vector<double> clipped_mass;
    fftw_plan plan = nullptr;
    fftw_complex* scratch = nullptr;

    ~Impl() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        if (plan) fftw_destroy_plan(plan);
        if (scratch) fftw_free(scratch);
    }
};

LayeredSampler::LayeredSampler(GridSpec spec, double t_min, bool truncated, int padding)
    : impl_(std::make_unique<Impl>()) {
    const int levels = dyadic_level(t_min);
    if (levels > 0 && spec.spacing > t_min / 4.0 * (1.0 + 1e-9))
        throw std::invalid_argument(
            "LayeredSampler: grid spacing too coarse for t_min (need spacing <= t_min/4)");
    if (padding < 2) throw std::invalid_argument("LayeredSampler: padding must be >= 2");

    impl_->spec = spec;
    impl_->truncated = truncated;
    impl_->padding = padding;
    const int M = padding * spec.n;
    impl_->M = M;

    impl_->scales.resize(levels + 1);
    for (int k = 0; k <= levels; ++k) impl_->scales[k] = std::ldexp(1.0, -k);

    // covariance base -> spectrum per octave
    std::vector<std::complex<double>> base(static_cast<std::size_t>(M) * M);
    for (int k = 0; k < levels; ++k) {
        const double t_hi = impl_->scales[k];
        const double t_lo = impl_->scales[k + 1];
        const double dr = spec.spacing / 4.0;
        RadialTable table = truncated
            ? truncated_layer_covariance(t_hi, t_lo, dr)
            : [&] {
                  const double r_max = spec.spacing * M * 0.7072 + 2 * dr;
                  std::vector<double> vals(static_cast<std::size_t>(r_max / dr) + 2);
                  for (std::size_t i = 0; i < vals.size(); ++i)
                      vals[i] = layer_covariance(i * dr, t_hi, t_lo);
                  return RadialTable(dr, std::move(vals));
              }();

        for (int i = 0; i < M; ++i) {
            const double dy = std::min(i, M - i) * spec.spacing;
            for (int j = 0; j < M; ++j) {
                const double dx = std::min(j, M - j) * spec.spacing;
                base[static_cast<std::size_t>(i) * M + j] = table(std::hypot(dx, dy));
            }
        }

        std::vector<std::complex<double>> freq(base.size());
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fftw_plan p = fftw_plan_dft_2d(
                M, M, reinterpret_cast<fftw_complex*>(base.data()),
                reinterpret_cast<fftw_complex*>(freq.data()), FFTW_FORWARD,
                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
            fftw_execute(p);
            fftw_destroy_plan(p);
        }

        std::vector<double> spectrum(base.size());
        double clipped = 0.0;
        const double inv_m2 = 1.0 / (static_cast<double>(M) * M);
        for (std::size_t idx = 0; idx < freq.size(); ++idx) {
            const double lam = freq[idx].real();
            if (lam < 0.0) {
                clipped += -lam * inv_m2;
                spectrum[idx] = 0.0;
            } else {
                spectrum[idx] = std::sqrt(lam * inv_m2);
            }
        }
        impl_->spectra.push_back(std::move(spectrum));
        impl_->clipped_mass.push_back(clipped);
    }

    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        impl_->scratch = fftw_alloc_complex(static_cast<std::size_t>(M) * M);
        impl_->plan = fftw_plan_dft_2d(M, M, impl_->scratch, impl_->scratch,
                                       FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
}

LayeredSampler::~LayeredSampler() = default;

int LayeredSampler::num_layers() const { return static_cast<int>(impl_->spectra.size()); }
const std::vector<double>& LayeredSampler::scales() const { return impl_->scales; }

std::pair<LayeredField, LayeredField> LayeredSampler::sample_pair(std::uint64_t seed) const {
    const int M = impl_->M;
    const int n = impl_->spec.n;
    const std::size_t m2 = static_cast<std::size_t>(M) * M;

    auto make_result = [&] {
        LayeredField f;
        f.spec = impl_->spec;
        f.scales = impl_->scales;
        f.truncated = impl_->truncated;
        f.clipped_mass = impl_->clipped_mass;
        return f;
    };
    LayeredField a = make_result();
    LayeredField b = make_result();

    std::vector<std::complex<double>> buf(m2);
    for (int k = 0; k < num_layers(); ++k) {
        GaussianRng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        const std::vector<double>& spectrum = impl_->spectra[k];
        for (std::size_t idx = 0; idx < m2; ++idx) {
            const double s = spectrum[idx];
            const double re = rng.normal();
            const double im = rng.normal();
            buf[idx] = {s * re, s * im};
        }
        fftw_execute_dft(impl_->plan, reinterpret_cast<fftw_complex*>(buf.data()),
                         reinterpret_cast<fftw_complex*>(buf.data()));

        std::vector<double> la(static_cast<std::size_t>(n) * n);
        std::vector<double> lb(la.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const std::complex<double> v = buf[static_cast<std::size_t>(i) * M + j];
                la[static_cast<std::size_t>(i) * n + j] = v.real();
                lb[static_cast<std::size_t>(i) * n + j] = v.imag();
            }
        a.layers.push_back(std::move(la));
        b.layers.push_back(std::move(lb));
    }
    return {std::move(a), std::move(b)};
}

LayeredField LayeredSampler::sample(std::uint64_t seed) const {
    return sample_pair(seed).first;
}

LayeredField sample_layered(const GridSpec& spec, double t_min, std::uint64_t seed) {
    return LayeredSampler(spec, t_min, /*truncated=*/false).sample(seed);
}

LayeredField sample_truncated(const GridSpec& spec, double t_min, std::uint64_t seed) {
    return LayeredSampler(spec, t_min, /*truncated=*/true).sample(seed);
}

GridField assemble(const LayeredField& field, int coarsest_scale_index) {
    if (coarsest_scale_index < 0 || coarsest_scale_index > field.num_layers())
        throw std::out_of_range("assemble: scale index out of range");
    GridField out;
    out.spec = field.spec;
    out.kind = field.truncated ? FieldKind::whitenoise_truncated : FieldKind::whitenoise;
    out.scale_t = field.scales[coarsest_scale_index];
    out.values.assign(field.spec.size(), 0.0);
    for (int k = 0; k < coarsest_scale_index; ++k)
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] += field.layers[k][i];
    return out;
}

// ---------------------------------------------------------------------------
// Zero-boundary DGFF

GridField sample_dgff(const GridSpec& spec, std::uint64_t seed) {
    const int n = spec.n;
    if (n < 4) throw std::invalid_argument("sample_dgff: n must be >= 4");
    const int m = n - 2;            // interior points per side
    const double denom = m + 1;     // = n - 1

    std::vector<double> coeffs(static_cast<std::size_t>(m) * m);
    GaussianRng rng(seed);
    for (int j = 1; j <= m; ++j) {
        const double cj = 2.0 - 2.0 * std::cos(M_PI * j / denom);
        for (int k = 1; k <= m; ++k) {
            const double lam = cj + 2.0 - 2.0 * std::cos(M_PI * k / denom);
            const double sd = std::sqrt(2.0 * M_PI / lam);
            // RODFT00 carries a factor 4 and the eigenbasis a factor
            // 2/(m+1); fold both into the coefficient
            coeffs[static_cast<std::size_t>(j - 1) * m + (k - 1)] =
                rng.normal() * sd / (2.0 * denom);
        }
    }

    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_plan p = fftw_plan_r2r_2d(m, m, coeffs.data(), coeffs.data(),
                                       FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
        fftw_execute(p);
        fftw_destroy_plan(p);
    }

    GridField out;
    out.spec = spec;
    out.kind = FieldKind::dgff_zero_boundary;
    out.values.assign(spec.size(), 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out.at(i + 1, j + 1) = coeffs[static_cast<std::size_t>(i) * m + j];
    return out;
}

std::vector<double> dgff_variance_grid(int n) {
    if (n < 4) throw std::invalid_argument("dgff_variance_grid: n must be >= 4");
    const int m = n - 2;
    const int p = m + 1;  // transform period
    const double denom = p;

    // F[j][k] = 1/lambda_{jk} on a p x p array (row/col 0 zero)
    std::vector<std::complex<double>> f(static_cast<std::size_t>(p) * p, 0.0);
    double s0 = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double cj = 2.0 - 2.0 * std::cos(M_PI * j / denom);
        for (int k = 1; k <= m; ++k) {
            const double lam = cj + 2.0 - 2.0 * std::cos(M_PI * k / denom);
            f[static_cast<std::size_t>(j) * p + k] = 1.0 / lam;
            s0 += 1.0 / lam;
        }
    }
    std::vector<std::complex<double>> g(f.size());
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_plan plan = fftw_plan_dft_2d(
            p, p, reinterpret_cast<fftw_complex*>(f.data()),
            reinterpret_cast<fftw_complex*>(g.data()), FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    auto re = [&](int x, int y) {
        return g[static_cast<std::size_t>(x % p) * p + (y % p)].real();
    };

    // Var(x,y) = 2pi (2/(m+1))^2 sum_{jk} sin^2 sin^2 / lambda, expanded
    // into cosine sums evaluated off the single DFT above.
    std::vector<double> var(static_cast<std::size_t>(n) * n, 0.0);
    const double scale = 2.0 * M_PI / (denom * denom);
    for (int x = 1; x <= m; ++x) {
        const double sx = re(x, 0);
        for (int y = 1; y <= m; ++y) {
            const double sy = re(0, y);
            const double sxy = 0.5 * (re(x, y) + re(x, p - y));
            var[static_cast<std::size_t>(x) * n + y] = scale * (s0 - sx - sy + sxy);
        }
    }
    return var;
}

double circle_average(const GridField& field, Point center, double delta, bool clamp) {
    if (!(delta > 0.0)) throw std::invalid_argument("circle_average: delta must be > 0");
    const GridSpec& spec = field.spec;
    const double lo_x = spec.origin.x;
    const double lo_y = spec.origin.y;
    const double hi_x = spec.origin.x + (spec.n - 1) * spec.spacing;
    const double hi_y = spec.origin.y + (spec.n - 1) * spec.spacing;
    if (!clamp) {
        if (center.x - delta < lo_x - 1e-12 || center.x + delta > hi_x + 1e-12 ||
            center.y - delta < lo_y - 1e-12 || center.y + delta > hi_y + 1e-12)
            throw std::out_of_range("circle_average: circle exits the grid");
    }
    constexpr int kPoints = 32;
    double sum = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const double theta = 2.0 * M_PI * i / kPoints;
        sum += field.interpolate(
            {center.x + delta * std::cos(theta), center.y + delta * std::sin(theta)});
    }
    return sum / kPoints;
}

} // namespace lqgdim
