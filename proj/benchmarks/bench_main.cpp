#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "maskrefine/edge.hpp"
#include "maskrefine/metrics.hpp"
#include "maskrefine/pipeline.hpp"
#include "maskrefine/sampling.hpp"
#include "maskrefine/synthetic.hpp"

using namespace maskrefine;

namespace {

BSplineCurve make_circle_curve(int control_count) {
    std::vector<Point2> pts;
    for (int i = 0; i < 256; ++i) {
        const double a = 2.0 * std::numbers::pi * i / 256.0;
        pts.push_back({100.0 + 80.0 * std::cos(a), 100.0 + 80.0 * std::sin(a)});
    }
    return fit_closed_curve(pts, 3, control_count).curve;
}

std::vector<Point2> random_points(std::size_t n, double span, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, span);
    std::vector<Point2> pts(n);
    for (Point2 &p : pts) p = {u(rng), u(rng)};
    return pts;
}

} // namespace

static void BM_CurveEvaluate(benchmark::State &state) {
    const BSplineCurve curve = make_circle_curve(32);
    double t = curve.domain_start();
    const double step = (curve.domain_end() - curve.domain_start()) / 1024.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(curve, t));
        t += step;
        if (t > curve.domain_end()) t = curve.domain_start();
    }
}
BENCHMARK(BM_CurveEvaluate);

static void BM_CurveDerivatives(benchmark::State &state) {
    const BSplineCurve curve = make_circle_curve(32);
    double t = curve.domain_start();
    const double step = (curve.domain_end() - curve.domain_start()) / 1024.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(derivatives(curve, t));
        t += step;
        if (t > curve.domain_end()) t = curve.domain_start();
    }
}
BENCHMARK(BM_CurveDerivatives);

static void BM_ClosedFit(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back({200.0 + 150.0 * std::cos(a), 200.0 + 150.0 * std::sin(a)});
    }
    const int control = std::clamp<int>(static_cast<int>(n) / 5, 8, 128);
    for (auto _ : state) benchmark::DoNotOptimize(fit_closed_curve(pts, 3, control));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_ClosedFit)->Arg(128)->Arg(512)->Arg(2048);

static void BM_Canny(benchmark::State &state) {
    const int size = static_cast<int>(state.range(0));
    const auto fx = make_fixture(ShapeKind::disk, size, 0.0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(canny(fx.image, CannyParams{}));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(size) * size);
}
BENCHMARK(BM_Canny)->Arg(128)->Arg(256)->Arg(512);

static void BM_KdRadiusQuery(benchmark::State &state) {
    const KdTree2 tree(random_points(static_cast<std::size_t>(state.range(0)), 640.0, 7));
    const std::vector<Point2> queries = random_points(256, 640.0, 8);
    std::size_t q = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tree.radius_query(queries[q], 6.0));
        q = (q + 1) % queries.size();
    }
}
BENCHMARK(BM_KdRadiusQuery)->Arg(1000)->Arg(10000);

static void BM_Frechet(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Contour a, b;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        a.points.push_back({std::cos(t) * 50.0, std::sin(t) * 50.0});
        b.points.push_back({std::cos(t) * 51.0, std::sin(t) * 49.0});
    }
    for (auto _ : state) benchmark::DoNotOptimize(frechet_distance(a, b));
}
BENCHMARK(BM_Frechet)->Arg(256)->Arg(1024);

static void BM_RefineMask(benchmark::State &state) {
    const int size = static_cast<int>(state.range(0));
    const auto fx = make_fixture(ShapeKind::disk, size, 2.0, 3);
    const RefineConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(refine_mask(fx.image, fx.jittered_mask, cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(size) * size);
}
BENCHMARK(BM_RefineMask)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
