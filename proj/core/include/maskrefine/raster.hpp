#ifndef MASKREFINE_RASTER_HPP
#define MASKREFINE_RASTER_HPP

#include <cstdint>
#include <vector>

#include "maskrefine/geometry.hpp"

namespace maskrefine {

/// Row-major binary raster; nonzero means foreground.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::uint8_t &at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    bool test(int x, int y) const { return in_bounds(x, y) && at(x, y) != 0; }
    std::size_t count() const;
};

/// Band region produced by dilating a polyline; same raster layout.
using RegionMask = BinaryMask;

/// Row-major luminance raster with values in [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    GrayImage() = default;
    GrayImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0.0f) {}

    float &at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Ordered boundary polyline. Freshly traced contours visit 8-connected
/// foreground pixels counter-clockwise (ascending polar angle in image
/// coordinates, y down).
struct Contour {
    std::vector<Point2> points;
    bool closed = true;

    double perimeter() const;
};

/// Squared point-to-segment distance.
double point_segment_dist2(const Point2 &p, const Point2 &a, const Point2 &b);

/// Outer boundary of every 8-connected foreground component, one closed
/// contour per component in row-major discovery order. Holes are ignored.
std::vector<Contour> trace_contours(const BinaryMask &mask);

/// Polyline of `samples` uniformly spaced curve evaluations rounded to
/// pixel centers (half away from zero), consecutive duplicates collapsed.
Contour rasterize_curve(const BSplineCurve &curve, int samples);

/// Pixels within Euclidean distance `radius` of the polyline (measured
/// against segments, including the closing segment of a closed contour).
RegionMask dilate_polyline(const Contour &poly, double radius, int width, int height);

/// Even-odd scanline fill; pixels whose center lies within half a pixel of
/// the polygon boundary are included as well.
BinaryMask fill_polygon(const Contour &poly, int width, int height);

} // namespace maskrefine

#endif
