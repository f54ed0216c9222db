#include "lqgdim/mated_crt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lqgdim/rng.hpp"

namespace lqgdim {

double crt_correlation(Gamma gamma) {
    const double g = gamma.value();
    return -std::cos(std::numbers::pi * g * g / 4.0);
}

BmTrace sample_bm(Gamma gamma, std::int64_t n, int substeps, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sample_bm: n must be >= 2");
    if (substeps < 1) throw std::invalid_argument("sample_bm: substeps must be >= 1");

    BmTrace trace;
    trace.n = n;
    trace.rho = crt_correlation(gamma);
    trace.substeps = substeps;
    trace.seed = seed;
    trace.l_min.resize(static_cast<std::size_t>(n));
    trace.r_min.resize(static_cast<std::size_t>(n));

    GaussianRng rng(derive_seed(seed, 0x626d7472));
    const double step_sd = std::sqrt(1.0 / substeps);

    // minimum over each unit cell of the piecewise-linear path sampled
    // at the substep endpoints; the cell's left endpoint counts too
    double l = 0.0, r = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        double lm = l, rm = r;
        for (int s = 0; s < substeps; ++s) {
            double a, b;
            rng.correlated_pair(trace.rho, a, b);
            l += step_sd * a;
            r += step_sd * b;
            lm = std::min(lm, l);
            rm = std::min(rm, r);
        }
        trace.l_min[static_cast<std::size_t>(i)] = lm;
        trace.r_min[static_cast<std::size_t>(i)] = rm;
    }
    return trace;
}

namespace {

// Pairs (i, j), i < j, with max(m_i, m_j) <= min of m strictly between.
// Monotone stack, non-decreasing toward the top. Ties are real here,
// not an accident: neighboring cells share their boundary sample, so a
// path whose minimum sits on the boundary gives both cells the same
// minimum. Cell j therefore sees, scanning down: every strictly larger
// entry (popped), the whole plateau of equal entries (kept; they stay
// visible through j), and one strictly smaller survivor.
void visibility_pairs(const std::vector<double>& m, std::vector<std::uint64_t>& out) {
    const std::size_t n = m.size();
    std::vector<std::uint32_t> stack;
    stack.reserve(1024);
    auto emit = [&out](std::uint32_t t, std::uint32_t j) {
        out.push_back((static_cast<std::uint64_t>(t) << 32) | j);
    };
    for (std::uint32_t j = 0; j < n; ++j) {
        while (!stack.empty() && m[stack.back()] > m[j]) {
            emit(stack.back(), j);
            stack.pop_back();
        }
        std::size_t k = stack.size();
        while (k > 0 && m[stack[k - 1]] == m[j]) emit(stack[--k], j);
        if (k > 0) emit(stack[k - 1], j);
        stack.push_back(j);
    }
}

} // namespace

CrtMap build_map(const BmTrace& trace, bool keep_edges) {
    const std::int64_t n = trace.n;
    if (n < 2 || trace.l_min.size() != static_cast<std::size_t>(n) ||
        trace.r_min.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("build_map: malformed trace");
    if (n > std::numeric_limits<std::int32_t>::max())
        throw std::invalid_argument("build_map: n exceeds 32-bit vertex ids");

    CrtMap map;
    map.n = n;
    map.window_lo = n / 3;
    map.window_hi = 2 * n / 3;

    std::vector<std::uint64_t> l_pairs, r_pairs;
    l_pairs.reserve(static_cast<std::size_t>(2 * n));
    r_pairs.reserve(static_cast<std::size_t>(2 * n));
    visibility_pairs(trace.l_min, l_pairs);
    visibility_pairs(trace.r_min, r_pairs);
    std::sort(l_pairs.begin(), l_pairs.end());
    std::sort(r_pairs.begin(), r_pairs.end());

    // merge the two sorted coordinate lists; a key present in both is a
    // double edge of the map, kept once with coord B
    const std::size_t nl = l_pairs.size(), nr = r_pairs.size();
    map.edge_u.reserve(nl + nr);
    map.edge_v.reserve(nl + nr);
    map.edge_coord.reserve(nl + nr);
    std::size_t a = 0, b = 0;
    auto emit = [&](std::uint64_t key, EdgeCoord c) {
        map.edge_u.push_back(static_cast<std::int32_t>(key >> 32));
        map.edge_v.push_back(static_cast<std::int32_t>(key & 0xffffffffu));
        map.edge_coord.push_back(c);
    };
    while (a < nl || b < nr) {
        if (b == nr || (a < nl && l_pairs[a] < r_pairs[b])) {
            emit(l_pairs[a++], EdgeCoord::L);
        } else if (a == nl || r_pairs[b] < l_pairs[a]) {
            emit(r_pairs[b++], EdgeCoord::R);
        } else {
            emit(l_pairs[a], EdgeCoord::B);
            ++a;
            ++b;
        }
    }
    l_pairs.clear();
    l_pairs.shrink_to_fit();
    r_pairs.clear();
    r_pairs.shrink_to_fit();
    map.edge_count = static_cast<std::int64_t>(map.edge_u.size());

    map.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t e = 0; e < map.edge_u.size(); ++e) {
        ++map.offsets[static_cast<std::size_t>(map.edge_u[e]) + 1];
        ++map.offsets[static_cast<std::size_t>(map.edge_v[e]) + 1];
    }
    for (std::size_t v = 0; v < static_cast<std::size_t>(n); ++v)
        map.offsets[v + 1] += map.offsets[v];

    map.neighbors.resize(static_cast<std::size_t>(2 * map.edge_count));
    std::vector<std::int64_t> cursor(map.offsets.begin(), map.offsets.end() - 1);
    for (std::size_t e = 0; e < map.edge_u.size(); ++e) {
        const std::int32_t u = map.edge_u[e], v = map.edge_v[e];
        map.neighbors[static_cast<std::size_t>(cursor[static_cast<std::size_t>(u)]++)] = v;
        map.neighbors[static_cast<std::size_t>(cursor[static_cast<std::size_t>(v)]++)] = u;
    }
    for (std::size_t v = 0; v < static_cast<std::size_t>(n); ++v)
        std::sort(map.neighbors.begin() + map.offsets[v], map.neighbors.begin() + map.offsets[v + 1]);

    if (!keep_edges) {
        map.edge_u.clear();
        map.edge_u.shrink_to_fit();
        map.edge_v.clear();
        map.edge_v.shrink_to_fit();
        map.edge_coord.clear();
        map.edge_coord.shrink_to_fit();
    }
    return map;
}

void write_edges(const CrtMap& map, std::ostream& os) {
    if (map.edge_u.empty() && map.edge_count != 0)
        throw std::logic_error("write_edges: map was built without edge lists");
    os << "u,v,coord\n";
    static const char* kCoord[] = {"L", "R", "B"};
    for (std::size_t e = 0; e < map.edge_u.size(); ++e)
        os << map.edge_u[e] << ',' << map.edge_v[e] << ','
           << kCoord[static_cast<int>(map.edge_coord[e])] << '\n';
}

BallProfile ball_profile(const CrtMap& map, std::int64_t center, int r_max) {
    if (!map.in_window(center))
        throw std::invalid_argument("ball_profile: center outside window");
    if (r_max < 0) throw std::invalid_argument("ball_profile: r_max must be >= 0");

    BallProfile profile;
    profile.center = center;
    profile.radii.push_back(0);
    profile.volumes.push_back(1);

    std::vector<std::int32_t> dist(static_cast<std::size_t>(map.n), -1);
    std::vector<std::int32_t> frontier{static_cast<std::int32_t>(center)};
    dist[static_cast<std::size_t>(center)] = 0;
    std::int64_t volume = 1;

    for (int r = 1; r <= r_max && !frontier.empty(); ++r) {
        std::vector<std::int32_t> next;
        bool leaked = false;
        for (const std::int32_t v : frontier) {
            for (std::int64_t e = map.offsets[static_cast<std::size_t>(v)];
                 e < map.offsets[static_cast<std::size_t>(v) + 1]; ++e) {
                const std::int32_t w = map.neighbors[static_cast<std::size_t>(e)];
                if (dist[static_cast<std::size_t>(w)] >= 0) continue;
                dist[static_cast<std::size_t>(w)] = r;
                if (!map.in_window(w)) leaked = true;
                next.push_back(w);
            }
        }
        if (leaked) {
            profile.window_exhausted = true;
            break;
        }
        volume += static_cast<std::int64_t>(next.size());
        profile.radii.push_back(r);
        profile.volumes.push_back(volume);
        frontier.swap(next);
    }
    return profile;
}

ExponentFit growth_exponent(const std::vector<BallProfile>& profiles, int r_lo, int r_hi) {
    if (profiles.size() < 10)
        throw std::invalid_argument("growth_exponent: need at least 10 profiles");
    if (r_lo < 5) throw std::invalid_argument("growth_exponent: r_lo must be >= 5");
    if (r_hi <= r_lo) throw std::invalid_argument("growth_exponent: r_hi must exceed r_lo");

    std::vector<std::pair<double, double>> samples;
    for (const BallProfile& p : profiles) {
        for (std::size_t k = 0; k < p.radii.size(); ++k) {
            if (p.radii[k] < r_lo || p.radii[k] > r_hi) continue;
            samples.emplace_back(static_cast<double>(p.radii[k]),
                                 static_cast<double>(p.volumes[k]));
        }
    }
    ExponentFit fit = fit_loglog(samples);
    fit.n_replicates = static_cast<int>(profiles.size());
    return fit;
}

} // namespace lqgdim
