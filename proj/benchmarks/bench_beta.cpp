#include <benchmark/benchmark.h>

#include <betacurv/beta.hpp>
#include <betacurv/measure.hpp>
#include <betacurv/synth.hpp>

#include <Eigen/Dense>

using namespace betacurv;

namespace {

PointCloudMeasure noisy_circle(int count, std::uint64_t seed)
{
    CircleSpec spec;
    spec.count = count;
    PointCloudMeasure mu = synthesize_circle(spec);
    return add_isotropic_noise(mu, 0.05, seed);
}

} // namespace

static void BetaBall_L2(benchmark::State& state)
{
    const PointCloudMeasure mu = noisy_circle(static_cast<int>(state.range(0)), 11);
    const Eigen::Vector2d x(1.0, 0.0);
    BetaParams params;
    params.m = 1;
    params.p = 2.0;
    for (auto _ : state) {
        auto value = beta_ball(mu, x, 0.5, params);
        benchmark::DoNotOptimize(value);
    }
}
BENCHMARK(BetaBall_L2)->Range(64, 1 << 14);

static void BetaBall_Centred(benchmark::State& state)
{
    const PointCloudMeasure mu = noisy_circle(static_cast<int>(state.range(0)), 12);
    const Eigen::Vector2d x(1.0, 0.0);
    BetaParams params;
    params.m = 1;
    params.p = 2.0;
    params.centred = true;
    for (auto _ : state) {
        auto value = beta_ball(mu, x, 0.5, params);
        benchmark::DoNotOptimize(value);
    }
}
BENCHMARK(BetaBall_Centred)->Range(64, 1 << 14);

// IRLS path, exercised whenever p is not 2.
static void BetaBall_L1(benchmark::State& state)
{
    const PointCloudMeasure mu = noisy_circle(static_cast<int>(state.range(0)), 13);
    const Eigen::Vector2d x(1.0, 0.0);
    BetaParams params;
    params.m = 1;
    params.p = 1.0;
    for (auto _ : state) {
        auto value = beta_ball(mu, x, 0.5, params);
        benchmark::DoNotOptimize(value);
    }
}
BENCHMARK(BetaBall_L1)->Range(64, 1 << 12);

static void ScaleProfile_Build(benchmark::State& state)
{
    const PointCloudMeasure mu = noisy_circle(static_cast<int>(state.range(0)), 14);
    const Eigen::Vector2d x(1.0, 0.0);
    BetaParams params;
    params.m = 1;
    params.p = 2.0;
    for (auto _ : state) {
        ScaleProfile profile = scale_profile(mu, x, 4.0, params);
        benchmark::DoNotOptimize(profile);
    }
}
BENCHMARK(ScaleProfile_Build)->Range(64, 1 << 12);

BENCHMARK_MAIN();
