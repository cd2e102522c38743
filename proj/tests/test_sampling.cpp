#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "maskrefine/sampling.hpp"
#include "support/oracles.hpp"

using maskrefine::HighCurvatureSet;
using maskrefine::KdTree2;
using maskrefine::Point2;
using maskrefine::SampleSet;

namespace {

maskrefine::BSplineCurve circle_fit(double radius, int degree = 3, int control = 16) {
    std::vector<Point2> pts;
    for (int i = 0; i < 64; ++i) {
        const double a = 2.0 * std::numbers::pi * i / 64.0;
        pts.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    const auto knots = maskrefine::clamped_uniform_knots(control, degree);
    return maskrefine::fit_curve(pts, degree, control, knots).curve;
}

std::vector<std::size_t> linear_scan(const std::vector<Point2> &pts, const Point2 &c, double r) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dx = pts[i].x - c.x, dy = pts[i].y - c.y;
        if (dx * dx + dy * dy <= r * r) out.push_back(i);
    }
    return out;
}

// Independent transcription of the three-case resampling rule, with the
// generating sample index and case label kept for property checks.
struct SimulatedSample {
    Point2 point;
    std::size_t generator;
    int case_id;
};

std::vector<SimulatedSample> simulate_canny_sampling(const std::vector<Point2> &p_unif,
                                                     const std::set<std::size_t> &hc,
                                                     const std::vector<Point2> &cad, double r) {
    std::vector<SimulatedSample> out;
    std::vector<bool> handled(p_unif.size(), false);
    auto emit = [&](const Point2 &p, std::size_t gen, int c) {
        if (!out.empty()) {
            const Point2 &prev = out.back().point;
            const double dx = prev.x - p.x, dy = prev.y - p.y;
            if (std::sqrt(dx * dx + dy * dy) < 1e-9) return;
        }
        out.push_back({p, gen, c});
    };
    for (std::size_t i = 0; i < p_unif.size(); ++i) {
        const auto canny_nbrs = linear_scan(cad, p_unif[i], r);
        if (canny_nbrs.empty()) {
            emit(p_unif[i], i, 1);
        } else if (hc.count(i) != 0) {
            Point2 c;
            for (std::size_t j : canny_nbrs) c += cad[j];
            emit(c * (1.0 / static_cast<double>(canny_nbrs.size())), i, 2);
        } else if (!handled[i]) {
            const auto coarse_nbrs = linear_scan(p_unif, p_unif[i], r);
            Point2 c;
            for (std::size_t j : canny_nbrs) c += cad[j];
            for (std::size_t j : coarse_nbrs) {
                c += p_unif[j];
                handled[j] = true;
            }
            emit(c * (1.0 / static_cast<double>(canny_nbrs.size() + coarse_nbrs.size())), i, 3);
        }
    }
    return out;
}

} // namespace

TEST_SUITE_BEGIN("sampling");

TEST_CASE("zero-radius query returns only an exact match") {
    const std::vector<Point2> pts = {{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.5}};
    const KdTree2 tree(pts);
    const auto hit = tree.radius_query({1.0, 1.0}, 0.0);
    REQUIRE(hit.size() == 1);
    CHECK(hit[0] == 1);
}

TEST_CASE("a radius beyond the diameter returns every point") {
    auto g = oracles::rng(5);
    std::vector<Point2> pts;
    for (int i = 0; i < 50; ++i)
        pts.push_back({oracles::uniform(g, 0.0, 10.0), oracles::uniform(g, 0.0, 10.0)});
    const KdTree2 tree(pts);
    CHECK(tree.radius_query({5.0, 5.0}, 100.0).size() == pts.size());
}

TEST_CASE("radius queries match a linear scan") {
    auto g = oracles::rng(404);
    std::vector<Point2> pts;
    for (int i = 0; i < 1000; ++i)
        pts.push_back({oracles::uniform(g, 0.0, 640.0), oracles::uniform(g, 0.0, 640.0)});
    const KdTree2 tree(pts);
    for (int q = 0; q < 100; ++q) {
        const Point2 c{oracles::uniform(g, 0.0, 640.0), oracles::uniform(g, 0.0, 640.0)};
        const double r = oracles::uniform(g, 0.5, 60.0);
        CHECK(tree.radius_query(c, r) == linear_scan(pts, c, r));
    }
}

TEST_CASE("high-curvature sampling keeps every sample of a tight circle") {
    const auto hc = maskrefine::curvature_sampling(circle_fit(10.0), 100, 0.05);
    CHECK(hc.points.size() == 100);
    for (const auto &p : hc.points) CHECK(p.curvature == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("a gentle circle yields no high-curvature samples") {
    CHECK(maskrefine::curvature_sampling(circle_fit(100.0), 100, 0.05).points.empty());
}

TEST_CASE("a straight line yields no high-curvature samples") {
    maskrefine::BSplineCurve line;
    line.degree = 1;
    line.control_points = {{0.0, 0.0}, {50.0, 0.0}};
    line.knots = maskrefine::KnotVector{{0.0, 0.0, 1.0, 1.0}};
    CHECK(maskrefine::curvature_sampling(line, 64, 0.01).points.empty());
}

TEST_CASE("without Canny points the uniform samples pass through") {
    std::vector<Point2> p_unif;
    for (int i = 0; i < 20; ++i) p_unif.push_back({i * 5.0, 3.0});
    const SampleSet out = maskrefine::canny_sampling(p_unif, {}, {}, 2.0);
    REQUIRE(out.points.size() == p_unif.size());
    for (std::size_t i = 0; i < p_unif.size(); ++i) {
        CHECK(out.points[i].x == p_unif[i].x);
        CHECK(out.points[i].y == p_unif[i].y);
    }
}

TEST_CASE("high-curvature samples move to the Canny centroid") {
    const std::vector<Point2> p_unif = {{0.0, 0.0}, {10.0, 10.0}, {30.0, 30.0}};
    HighCurvatureSet hc;
    hc.points.push_back({1, 0.5, p_unif[1], 1.0});
    const std::vector<Point2> cad = {{11.0, 10.0}, {9.0, 10.0}, {10.0, 12.0}};
    const SampleSet out = maskrefine::canny_sampling(p_unif, hc, cad, 3.0);
    REQUIRE(out.points.size() == 3);
    CHECK(out.points[0].x == 0.0);
    CHECK(out.points[1].x == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(out.points[1].y == doctest::Approx(32.0 / 3.0).epsilon(1e-12));
    CHECK(out.points[2].x == 30.0);
    // the centroid stays inside the bounding box of its neighbors
    CHECK(out.points[1].x >= 9.0);
    CHECK(out.points[1].x <= 11.0);
    CHECK(out.points[1].y >= 10.0);
    CHECK(out.points[1].y <= 12.0);
}

TEST_CASE("flat stretches collapse to roughly one sample per radius") {
    std::vector<Point2> p_unif, cad;
    for (int i = 0; i < 100; ++i) {
        p_unif.push_back({static_cast<double>(i), 0.0});
        cad.push_back({static_cast<double>(i), 0.3});
    }
    const double r = 4.5; // labeling advances five coarse samples per output
    const SampleSet out = maskrefine::canny_sampling(p_unif, {}, cad, r);

    const auto sim = simulate_canny_sampling(p_unif, {}, cad, r);
    REQUIRE(out.points.size() == sim.size());
    for (std::size_t i = 0; i < sim.size(); ++i) {
        CHECK(out.points[i].x == doctest::Approx(sim[i].point.x).epsilon(1e-12));
        CHECK(out.points[i].y == doctest::Approx(sim[i].point.y).epsilon(1e-12));
        CHECK(sim[i].case_id == 3);
    }
    CHECK(out.points.size() == p_unif.size() / 5);
}

TEST_CASE("resampling matches the simulation on random inputs") {
    auto g = oracles::rng(888);
    for (int rep = 0; rep < 15; ++rep) {
        const int n = oracles::uniform_int(g, 5, 80);
        std::vector<Point2> p_unif, cad;
        for (int i = 0; i < n; ++i)
            p_unif.push_back({oracles::uniform(g, 0.0, 50.0), oracles::uniform(g, 0.0, 50.0)});
        const int m = oracles::uniform_int(g, 0, 120);
        for (int i = 0; i < m; ++i)
            cad.push_back({oracles::uniform(g, 0.0, 50.0), oracles::uniform(g, 0.0, 50.0)});

        std::set<std::size_t> hc_ids;
        HighCurvatureSet hc;
        for (int i = 0; i < n; ++i)
            if (oracles::uniform_int(g, 0, 4) == 0) {
                hc_ids.insert(static_cast<std::size_t>(i));
                hc.points.push_back({static_cast<std::size_t>(i), 0.0, p_unif[static_cast<std::size_t>(i)], 1.0});
            }
        const double r = oracles::uniform(g, 1.0, 8.0);

        const SampleSet out = maskrefine::canny_sampling(p_unif, hc, cad, r);
        const auto sim = simulate_canny_sampling(p_unif, hc_ids, cad, r);

        REQUIRE(out.points.size() == sim.size());
        CHECK(out.points.size() <= p_unif.size());
        for (std::size_t i = 0; i < sim.size(); ++i) {
            CHECK(maskrefine::distance(out.points[i], sim[i].point) < 1e-12);
            // every output stays within the query radius of its generator
            CHECK(maskrefine::distance(sim[i].point, p_unif[sim[i].generator]) <= 2.0 * r + 1e-12);
        }

        const SampleSet again = maskrefine::canny_sampling(p_unif, hc, cad, r);
        REQUIRE(again.points.size() == out.points.size());
        for (std::size_t i = 0; i < out.points.size(); ++i)
            CHECK(maskrefine::distance(again.points[i], out.points[i]) == 0.0);
    }
}

TEST_SUITE_END();
