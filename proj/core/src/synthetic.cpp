#include "maskrefine/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace maskrefine {

Contour shape_polygon(ShapeKind kind, int size) {
    if (size < 16) throw std::invalid_argument("shape_polygon: raster too small");
    const double c = size / 2.0;
    Contour poly;
    switch (kind) {
    case ShapeKind::pentagram: {
        const double outer = 0.40 * size;
        const double inner = outer * 0.381966011250105; // classic {5/2} star ratio
        for (int i = 0; i < 10; ++i) {
            const double a = -std::numbers::pi / 2.0 + std::numbers::pi * i / 5.0;
            const double r = i % 2 == 0 ? outer : inner;
            poly.points.push_back({c + r * std::cos(a), c + r * std::sin(a)});
        }
        break;
    }
    case ShapeKind::disk: {
        const double r = 0.35 * size;
        for (int i = 0; i < 720; ++i) {
            const double a = 2.0 * std::numbers::pi * i / 720.0;
            poly.points.push_back({c + r * std::cos(a), c + r * std::sin(a)});
        }
        break;
    }
    case ShapeKind::square: {
        const double h = std::round(0.3 * size);
        poly.points = {{c - h, c - h}, {c + h, c - h}, {c + h, c + h}, {c - h, c + h}};
        break;
    }
    }
    return poly;
}

Contour jitter_contour(const Contour &contour, double jitter_px, std::mt19937 &rng) {
    Contour out = contour;
    const std::size_t n = contour.points.size();
    if (n < 3 || jitter_px <= 0.0) return out;
    std::uniform_real_distribution<double> shift(-jitter_px, jitter_px);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 &prev = contour.points[(i + n - 1) % n];
        const Point2 &next = contour.points[(i + 1) % n];
        const Point2 tangent = next - prev;
        const double len = norm(tangent);
        const double u = shift(rng);
        if (len < 1e-12) continue;
        const Point2 normal{-tangent.y / len, tangent.x / len};
        out.points[i] += normal * u;
    }
    return out;
}

SyntheticFixture make_fixture(ShapeKind kind, int size, double jitter_px, unsigned seed) {
    if (size < 64) throw std::invalid_argument("make_fixture: size must be >= 64");
    if (jitter_px < 0.0) throw std::invalid_argument("make_fixture: jitter must be non-negative");

    SyntheticFixture fx;
    const Contour poly = shape_polygon(kind, size);
    fx.clean_mask = fill_polygon(poly, size, size);

    fx.image = GrayImage(size, size);
    for (std::size_t i = 0; i < fx.clean_mask.data.size(); ++i)
        fx.image.data[i] = fx.clean_mask.data[i] ? 1.0f : 0.0f;

    if (jitter_px == 0.0) {
        fx.jittered_mask = fx.clean_mask;
        return fx;
    }

    const std::vector<Contour> traced = trace_contours(fx.clean_mask);
    if (traced.empty()) throw std::runtime_error("make_fixture: shape rasterized to nothing");
    const Contour &boundary = traced.front();

    std::mt19937 rng(seed);
    const Contour displaced = jitter_contour(boundary, jitter_px, rng);
    fx.jittered_mask = fill_polygon(displaced, size, size);
    return fx;
}

} // namespace maskrefine
