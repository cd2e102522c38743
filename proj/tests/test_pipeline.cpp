#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "maskrefine/metrics.hpp"
#include "maskrefine/pipeline.hpp"
#include "maskrefine/synthetic.hpp"
#include "support/contours.hpp"
#include "support/oracles.hpp"

using maskrefine::BinaryMask;
using maskrefine::Contour;
using maskrefine::CurvatureMode;
using maskrefine::GrayImage;
using maskrefine::Point2;
using maskrefine::RefineConfig;
using maskrefine::RefineResult;
using maskrefine::ShapeKind;
using testsupport::aligned_frechet;
using testsupport::largest_contour;

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("a jittered disk comes out smoother and closer to the truth") {
    const auto fx = maskrefine::make_fixture(ShapeKind::disk, 192, 2.0, 7);
    const RefineResult res = maskrefine::refine_mask(fx.image, fx.jittered_mask, RefineConfig{});
    REQUIRE_FALSE(res.passthrough());

    const Contour clean = largest_contour(fx.clean_mask);
    const Contour jittered = largest_contour(fx.jittered_mask);
    const Contour refined = largest_contour(res.refined_mask);

    const double var_jit =
        maskrefine::discrete_curvature(jittered, CurvatureMode::menger).curvature_variance;
    const double var_ref =
        maskrefine::discrete_curvature(refined, CurvatureMode::menger).curvature_variance;
    CHECK(var_ref < var_jit);

    CHECK(aligned_frechet(clean, refined) < aligned_frechet(clean, jittered));
}

TEST_CASE("tiny masks pass through unchanged") {
    GrayImage img(32, 32);
    BinaryMask mask(32, 32);
    mask.at(10, 10) = 1;
    mask.at(11, 10) = 1;
    mask.at(10, 11) = 1;
    const RefineResult res = maskrefine::refine_mask(img, mask, RefineConfig{});
    CHECK(res.passthrough());
    CHECK(res.refined_mask.data == mask.data);
}

TEST_CASE("an empty mask passes through with a flag") {
    const RefineResult res =
        maskrefine::refine_mask(GrayImage(16, 16), BinaryMask(16, 16), RefineConfig{});
    CHECK(res.passthrough());
    CHECK(res.has_flag("empty-mask"));
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(maskrefine::refine_mask(GrayImage(16, 16), BinaryMask(16, 8), RefineConfig{}),
                    std::invalid_argument);
}

TEST_CASE("refine_all on an empty list returns an empty list") {
    CHECK(maskrefine::refine_all(GrayImage(32, 32), {}, RefineConfig{}).empty());
}

TEST_CASE("batch refinement equals refining each mask alone") {
    const int size = 128;
    GrayImage img(size, size);
    std::vector<BinaryMask> masks;
    for (int which = 0; which < 2; ++which) {
        BinaryMask m(size, size);
        const double cx = which == 0 ? 38.0 : 92.0;
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x)
                if ((x - cx) * (x - cx) + (y - 60.0) * (y - 60.0) <= 22.0 * 22.0) {
                    m.at(x, y) = 1;
                    img.at(x, y) = 1.0f;
                }
        masks.push_back(std::move(m));
    }

    const auto batch = maskrefine::refine_all(img, masks, RefineConfig{});
    REQUIRE(batch.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const RefineResult solo = maskrefine::refine_mask(img, masks[i], RefineConfig{});
        CHECK(batch[i].mask_id == i);
        CHECK(batch[i].refined_mask.data == solo.refined_mask.data);
        CHECK(batch[i].flags == solo.flags);
    }
}

TEST_CASE("worker count does not change results") {
    const auto fx = maskrefine::make_fixture(ShapeKind::square, 128, 2.0, 3);
    std::vector<BinaryMask> masks(5, fx.jittered_mask);
    const auto serial = maskrefine::refine_all(fx.image, masks, RefineConfig{}, 1);
    const auto parallel = maskrefine::refine_all(fx.image, masks, RefineConfig{}, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].refined_mask.data == parallel[i].refined_mask.data);
        CHECK(serial[i].flags == parallel[i].flags);
        CHECK(serial[i].sample_set.points.size() == parallel[i].sample_set.points.size());
    }
}

TEST_CASE("a failing mask yields a flagged passthrough, not an abort") {
    const auto fx = maskrefine::make_fixture(ShapeKind::disk, 96, 1.0, 2);
    BinaryMask bad(48, 48); // wrong dimensions
    bad.at(20, 20) = 1;
    const auto batch = maskrefine::refine_all(fx.image, {fx.jittered_mask, bad}, RefineConfig{});
    REQUIRE(batch.size() == 2);
    CHECK_FALSE(batch[0].passthrough());
    CHECK(batch[1].passthrough());
    bool has_error = false;
    for (const auto &f : batch[1].flags) has_error |= f.rfind("error:", 0) == 0;
    CHECK(has_error);
}

TEST_CASE("stage shares are percentages of the summed stage times") {
    RefineResult fake;
    fake.stage_ms = {4.0, 1.0, 3.0, 2.0};
    const auto report = maskrefine::stage_timing_report({fake});
    CHECK(report.overall_ms == doctest::Approx(10.0));
    CHECK(report.share_pct[0] == doctest::Approx(40.0));
    CHECK(report.share_pct[1] == doctest::Approx(10.0));
    CHECK(report.share_pct[2] == doctest::Approx(30.0));
    CHECK(report.share_pct[3] == doctest::Approx(20.0));

    RefineResult other;
    other.stage_ms = {6.0, 9.0, 7.0, 8.0};
    const auto merged = maskrefine::stage_timing_report({fake, other});
    CHECK(merged.total_ms[0] == doctest::Approx(10.0));
    CHECK(merged.overall_ms == doctest::Approx(40.0));
    CHECK(merged.share_pct[0] == doctest::Approx(25.0));

    CHECK_THROWS_AS(maskrefine::stage_timing_report({}), std::invalid_argument);
}

TEST_CASE("the fine curve closes exactly") {
    const auto fx = maskrefine::make_fixture(ShapeKind::pentagram, 192, 2.0, 5);
    const RefineResult res = maskrefine::refine_mask(fx.image, fx.jittered_mask, RefineConfig{});
    REQUIRE_FALSE(res.passthrough());
    const Point2 a = maskrefine::evaluate(res.fine_curve, res.fine_curve.domain_start());
    const Point2 b = maskrefine::evaluate(res.fine_curve, res.fine_curve.domain_end());
    CHECK(maskrefine::distance(a, b) < 1e-9);
}

TEST_CASE("the fine curve stays anchored to the coarse band") {
    const RefineConfig cfg;
    const auto fx = maskrefine::make_fixture(ShapeKind::pentagram, 256, 2.0, 8);
    const RefineResult res = maskrefine::refine_mask(fx.image, fx.jittered_mask, cfg);
    REQUIRE_FALSE(res.passthrough());

    const Contour coarse_poly = maskrefine::rasterize_curve(res.coarse_curve, cfg.raster_samples);
    const Contour fine_poly = maskrefine::rasterize_curve(res.fine_curve, cfg.raster_samples);
    auto dist_to_coarse = [&](const Point2 &p) {
        double best2 = std::numeric_limits<double>::infinity();
        const auto &pts = coarse_poly.points;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Point2 &a = pts[i];
            const Point2 &b = pts[(i + 1) % pts.size()];
            best2 = std::min(best2, maskrefine::point_segment_dist2(p, a, b));
        }
        return std::sqrt(best2);
    };
    std::size_t inside = 0;
    for (const Point2 &p : fine_poly.points) inside += dist_to_coarse(p) <= cfg.dilation_radius;
    CHECK(static_cast<double>(inside) >=
          0.8 * static_cast<double>(fine_poly.points.size()));
}

TEST_CASE("refining twice moves the contour less than the band width") {
    const RefineConfig cfg;
    const auto fx = maskrefine::make_fixture(ShapeKind::disk, 160, 2.0, 11);
    const RefineResult once = maskrefine::refine_mask(fx.image, fx.jittered_mask, cfg);
    REQUIRE_FALSE(once.passthrough());
    const RefineResult twice = maskrefine::refine_mask(fx.image, once.refined_mask, cfg);
    REQUIRE_FALSE(twice.passthrough());
    const Contour first = largest_contour(once.refined_mask);
    const Contour second = largest_contour(twice.refined_mask);
    CHECK(aligned_frechet(first, second) < 2.0 * cfg.dilation_radius);
}

TEST_CASE("identical inputs produce bit-identical refined masks") {
    const auto fx = maskrefine::make_fixture(ShapeKind::square, 160, 2.0, 13);
    const RefineResult a = maskrefine::refine_mask(fx.image, fx.jittered_mask, RefineConfig{});
    const RefineResult b = maskrefine::refine_mask(fx.image, fx.jittered_mask, RefineConfig{});
    CHECK(a.refined_mask.data == b.refined_mask.data);
    CHECK(a.flags == b.flags);
}

TEST_CASE("stage 3+4 cost grows about linearly with the mask count") {
    const int size = 96;
    GrayImage img(size, size);
    BinaryMask disk(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            if ((x - 48.0) * (x - 48.0) + (y - 48.0) * (y - 48.0) <= 30.0 * 30.0) {
                disk.at(x, y) = 1;
                img.at(x, y) = 1.0f;
            }
    auto stage34 = [](const std::vector<maskrefine::RefineResult> &rs) {
        double total = 0.0;
        for (const auto &r : rs) total += r.stage_ms[2] + r.stage_ms[3];
        return total;
    };
    const auto few = maskrefine::refine_all(img, std::vector<BinaryMask>(10, disk), RefineConfig{});
    const auto many = maskrefine::refine_all(img, std::vector<BinaryMask>(50, disk), RefineConfig{});
    const double few_ms = stage34(few);
    const double many_ms = stage34(many);
    CHECK(many_ms > 0.0);
    // 5x the masks should cost roughly 5x; allow a factor 3 of slack
    CHECK(many_ms <= 15.0 * std::max(few_ms, 0.5));
}

TEST_CASE("zero jitter reproduces the clean mask") {
    const auto fx = maskrefine::make_fixture(ShapeKind::pentagram, 128, 0.0, 99);
    CHECK(fx.jittered_mask.data == fx.clean_mask.data);
}

TEST_CASE("fixtures are deterministic per seed") {
    const auto a = maskrefine::make_fixture(ShapeKind::disk, 128, 2.0, 21);
    const auto b = maskrefine::make_fixture(ShapeKind::disk, 128, 2.0, 21);
    CHECK(a.jittered_mask.data == b.jittered_mask.data);
    const auto c = maskrefine::make_fixture(ShapeKind::disk, 128, 2.0, 22);
    CHECK(c.jittered_mask.data != a.jittered_mask.data);
}

TEST_CASE("jittered contours stay within three times the jitter") {
    const auto fx = maskrefine::make_fixture(ShapeKind::pentagram, 256, 2.0, 4);
    const Contour clean = largest_contour(fx.clean_mask);
    const Contour jittered = largest_contour(fx.jittered_mask);
    const double fd = aligned_frechet(clean, jittered);
    CHECK(fd > 0.0);
    CHECK(fd <= 6.0);
}

TEST_SUITE_END();
