#include <benchmark/benchmark.h>

#include <cmath>

#include "lqgdim/field_sampler.hpp"
#include "lqgdim/lqg_measure.hpp"
#include "lqgdim/mated_crt.hpp"
#include "lqgdim/metrics.hpp"
#include "lqgdim/rng.hpp"

using namespace lqgdim;

static void BM_LayeredSample(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GridSpec spec = GridSpec::unit_square(n);
    const LayeredSampler sampler(spec, 0.0625, false);
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(seed++));
    state.SetItemsProcessed(state.iterations() * spec.size());
}
BENCHMARK(BM_LayeredSample)->Arg(65)->Arg(129)->Arg(257);

static void BM_DgffSample(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GridSpec spec = GridSpec::unit_square(n);
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(sample_dgff(spec, seed++));
    state.SetItemsProcessed(state.iterations() * spec.size());
}
BENCHMARK(BM_DgffSample)->Arg(257)->Arg(513)->Arg(1025);

static void BM_BallMass(benchmark::State& state) {
    const GridSpec spec = GridSpec::unit_square(129);
    const GridField field = assemble(sample_layered(spec, 0.0625, 3), 4);
    const MassGrid measure(field, Gamma(1.0));
    GaussianRng rng(9);
    for (auto _ : state) {
        const Point z{rng.uniform(), rng.uniform()};
        benchmark::DoNotOptimize(measure.ball_mass(z, 0.2));
    }
}
BENCHMARK(BM_BallMass);

static void BM_DiscreteLfpp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GridSpec spec = GridSpec::unit_square(n);
    const GridField field = sample_dgff(spec, 17);
    MetricQuery query;
    query.source = {{0.0, 0.0}};
    query.target = {{1.0, 1.0}};
    for (auto _ : state)
        benchmark::DoNotOptimize(lfpp_discrete_distance(field, 0.4, query));
    state.SetItemsProcessed(state.iterations() * spec.size());
}
BENCHMARK(BM_DiscreteLfpp)->Arg(129)->Arg(257)->Arg(513);

static void BM_CrtBuild(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    const BmTrace trace = sample_bm(Gamma(std::sqrt(8.0 / 3.0)), n, 8, 21);
    for (auto _ : state) benchmark::DoNotOptimize(build_map(trace, false));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_CrtBuild)->Arg(100000)->Arg(1000000);

BENCHMARK_MAIN();
