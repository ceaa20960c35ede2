#include <benchmark/benchmark.h>

#include <betacurv/kdtree.hpp>
#include <betacurv/measure.hpp>
#include <betacurv/synth.hpp>

#include <Eigen/Dense>
#include <vector>

using namespace betacurv;

namespace {

PointCloudMeasure box_cloud(int count)
{
    RandomCloudSpec spec;
    spec.ambient_dim = 3;
    spec.count = count;
    spec.box_halfwidth = 1.0;
    return synthesize_random_cloud(spec, 31);
}

} // namespace

static void KdTree_Build(benchmark::State& state)
{
    const PointCloudMeasure mu = box_cloud(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        KdTree tree;
        tree.build(mu.positions());
        benchmark::DoNotOptimize(tree);
    }
}
BENCHMARK(KdTree_Build)->Range(256, 1 << 17);

static void BallQuery_KdTree(benchmark::State& state)
{
    const PointCloudMeasure mu = box_cloud(static_cast<int>(state.range(0)));
    KdTree tree;
    tree.build(mu.positions());
    const Eigen::Vector3d center(0.1, -0.2, 0.3);
    std::vector<int> hits;
    for (auto _ : state) {
        tree.ball_query(center, 0.25, hits);
        benchmark::DoNotOptimize(hits.size());
    }
}
BENCHMARK(BallQuery_KdTree)->Range(256, 1 << 17);

static void BallQuery_LinearScan(benchmark::State& state)
{
    const PointCloudMeasure mu = box_cloud(static_cast<int>(state.range(0)));
    const Eigen::Vector3d center(0.1, -0.2, 0.3);
    const Eigen::MatrixXd& pts = mu.positions();
    const int dim = static_cast<int>(pts.rows());
    std::vector<int> hits;
    for (auto _ : state) {
        hits.clear();
        for (int i = 0; i < pts.cols(); ++i) {
            if (squared_distance(pts.col(i).data(), center.data(), dim) <= 0.0625)
                hits.push_back(i);
        }
        benchmark::DoNotOptimize(hits.size());
    }
}
BENCHMARK(BallQuery_LinearScan)->Range(256, 1 << 17);

static void BallIndices_Measure(benchmark::State& state)
{
    const PointCloudMeasure mu = box_cloud(static_cast<int>(state.range(0)));
    const Ball ball(Eigen::Vector3d(0.1, -0.2, 0.3), 0.25);
    for (auto _ : state) {
        auto hits = mu.ball_indices(ball);
        benchmark::DoNotOptimize(hits.size());
    }
}
BENCHMARK(BallIndices_Measure)->Range(256, 1 << 17);

BENCHMARK_MAIN();
