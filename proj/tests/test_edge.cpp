#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "maskrefine/edge.hpp"
#include "support/oracles.hpp"

using maskrefine::CannyParams;
using maskrefine::GrayImage;
using maskrefine::Point2;

namespace {

GrayImage step_image(int w, int h, int step_col) {
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.at(x, y) = x >= step_col ? 1.0f : 0.0f;
    return img;
}

GrayImage disk_image(int size, double cx, double cy, double r) {
    GrayImage img(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img.at(x, y) = 1.0f;
    return img;
}

GrayImage rotate90(const GrayImage &img) {
    GrayImage out(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) out.at(img.height - 1 - y, x) = img.at(x, y);
    return out;
}

} // namespace

TEST_SUITE_BEGIN("edge");

TEST_CASE("unnormalized Gaussian center value is 1/(2 pi sigma^2)") {
    CHECK(maskrefine::gaussian_point(0.0, 0.0, 1.0) ==
          doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("gaussian kernel is normalized and truncated at 3 sigma") {
    const auto k1 = maskrefine::gaussian_kernel(1.3);
    double sum = 0.0;
    for (double v : k1.values) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(k1.radius == 4); // ceil(3.9)

    CHECK(maskrefine::gaussian_kernel(2.0).radius == 6);
    CHECK_THROWS_AS(maskrefine::gaussian_kernel(0.0), std::invalid_argument);
}

TEST_CASE("vertical step produces a contiguous one-pixel line at the step") {
    const int w = 40, h = 40, step = 20;
    const GrayImage img = step_image(w, h, step);
    const auto edges = maskrefine::canny(img, {1.0, 0.10, 0.20});

    int prev_col = -1;
    for (int y = 1; y < h - 1; ++y) {
        int count = 0, col = -1;
        for (int x = 0; x < w; ++x)
            if (edges.at(x, y)) {
                ++count;
                col = x;
            }
        CHECK(count == 1);
        CHECK(std::abs(col - (step - 0.5)) <= 1.0);
        if (prev_col >= 0) CHECK(std::abs(col - prev_col) <= 1);
        prev_col = col;
    }
}

TEST_CASE("constant image has no edges") {
    GrayImage img(24, 24);
    for (float &v : img.data) v = 0.37f;
    CHECK(maskrefine::canny(img, CannyParams{}).count() == 0);
}

TEST_CASE("disk edge count is close to its circumference") {
    const GrayImage img = disk_image(64, 31.5, 31.5, 20.0);
    const auto edges = maskrefine::canny(img, {1.0, 0.10, 0.20});
    const double expect = 2.0 * std::numbers::pi * 20.0;
    CHECK(static_cast<double>(edges.count()) > 0.85 * expect);
    CHECK(static_cast<double>(edges.count()) < 1.15 * expect);
}

TEST_CASE("edge count is stable under 90 degree rotation") {
    const GrayImage img = disk_image(64, 30.0, 33.0, 18.0);
    const auto a = maskrefine::canny(img, {1.0, 0.10, 0.20});
    const auto b = maskrefine::canny(rotate90(img), {1.0, 0.10, 0.20});
    const double ratio = static_cast<double>(a.count()) / static_cast<double>(b.count());
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
}

TEST_CASE("raising the high threshold never adds edge pixels") {
    const GrayImage img = disk_image(48, 23.0, 24.0, 15.0);
    const auto loose = maskrefine::canny(img, {1.5, 0.10, 0.20});
    const auto tight = maskrefine::canny(img, {1.5, 0.10, 0.40});
    for (std::size_t i = 0; i < loose.data.size(); ++i)
        if (tight.data[i]) CHECK(loose.data[i]);
}

TEST_CASE("edges are thin along the gradient direction") {
    for (const GrayImage &img : {step_image(40, 40, 20), disk_image(64, 31.5, 31.5, 20.0)}) {
        const auto edges = maskrefine::canny(img, {1.0, 0.10, 0.20});
        // recompute quantized gradient directions from the raw image; a kept
        // pixel must not have edge neighbors on both sides along it
        for (int y = 1; y < img.height - 1; ++y)
            for (int x = 1; x < img.width - 1; ++x) {
                if (!edges.at(x, y)) continue;
                const double dx = img.at(x + 1, y) - img.at(x - 1, y);
                const double dy = img.at(x, y + 1) - img.at(x, y - 1);
                if (dx == 0.0 && dy == 0.0) continue;
                double angle = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
                if (angle < 0.0) angle += 180.0;
                int sx, sy;
                if (angle < 22.5 || angle >= 157.5) {
                    sx = 1, sy = 0;
                } else if (angle < 67.5) {
                    sx = 1, sy = 1;
                } else if (angle < 112.5) {
                    sx = 0, sy = 1;
                } else {
                    sx = 1, sy = -1;
                }
                const bool both = edges.test(x + sx, y + sy) && edges.test(x - sx, y - sy);
                CHECK_FALSE(both);
            }
    }
}

TEST_CASE("mask_edges intersects edges with the region") {
    const GrayImage img = step_image(32, 32, 16);
    const auto edges = maskrefine::canny(img, {1.0, 0.10, 0.20});

    maskrefine::RegionMask all(32, 32);
    for (auto &v : all.data) v = 1;
    CHECK(maskrefine::mask_edges(edges, all).size() == edges.count());

    CHECK(maskrefine::mask_edges(edges, maskrefine::RegionMask(32, 32)).empty());

    maskrefine::RegionMask band(32, 32);
    for (int y = 10; y <= 20; ++y)
        for (int x = 0; x < 32; ++x) band.at(x, y) = 1;
    std::set<std::pair<int, int>> expect;
    for (int y = 10; y <= 20; ++y)
        for (int x = 0; x < 32; ++x)
            if (edges.at(x, y)) expect.insert({x, y});
    std::set<std::pair<int, int>> got;
    for (const Point2 &p : maskrefine::mask_edges(edges, band))
        got.insert({static_cast<int>(p.x), static_cast<int>(p.y)});
    CHECK(got == expect);

    CHECK_THROWS_AS(maskrefine::mask_edges(edges, maskrefine::RegionMask(16, 32)),
                    std::invalid_argument);
}

TEST_SUITE_END();
