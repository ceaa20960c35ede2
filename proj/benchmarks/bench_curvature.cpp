#include <benchmark/benchmark.h>

#include <betacurv/curvature.hpp>
#include <betacurv/measure.hpp>
#include <betacurv/synth.hpp>

#include <Eigen/Dense>

using namespace betacurv;

namespace {

PointCloudMeasure random_cloud(int count, std::uint64_t seed)
{
    RandomCloudSpec spec;
    spec.count = count;
    spec.weight_lo = 0.5;
    spec.weight_hi = 1.5;
    return synthesize_random_cloud(spec, seed);
}

} // namespace

// The exact sum walks every ordered pair and every admissible inner tuple, so
// cost grows like count^3 for m = 1.
static void CurvatureExact(benchmark::State& state)
{
    const PointCloudMeasure mu = random_cloud(static_cast<int>(state.range(0)), 21);
    const Eigen::Vector2d x(0.0, 0.0);
    CurvatureParams params;
    params.m = 1;
    params.p = 2.0;
    params.alpha = 0.0;
    for (auto _ : state) {
        auto value = curvature_exact(mu, x, params);
        benchmark::DoNotOptimize(value);
    }
}
BENCHMARK(CurvatureExact)->Range(8, 128);

static void CurvatureMonteCarlo(benchmark::State& state)
{
    const PointCloudMeasure mu = random_cloud(256, 22);
    const Eigen::Vector2d x(0.0, 0.0);
    CurvatureParams params;
    params.m = 1;
    params.p = 2.0;
    params.alpha = 0.0;
    for (auto _ : state) {
        auto value = curvature_mc(mu, x, params, static_cast<std::uint64_t>(state.range(0)), 99);
        benchmark::DoNotOptimize(value);
    }
}
BENCHMARK(CurvatureMonteCarlo)->Range(1 << 10, 1 << 17);

static void MengerEnergy(benchmark::State& state)
{
    const PointCloudMeasure mu = random_cloud(static_cast<int>(state.range(0)), 23);
    for (auto _ : state) {
        double value = m_p_functional(mu, 2.0, 1, 1.0e12);
        benchmark::DoNotOptimize(value);
    }
}
BENCHMARK(MengerEnergy)->Range(8, 48);

BENCHMARK_MAIN();
