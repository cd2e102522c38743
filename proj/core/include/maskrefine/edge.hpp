#ifndef MASKREFINE_EDGE_HPP
#define MASKREFINE_EDGE_HPP

#include <vector>

#include "maskrefine/raster.hpp"

namespace maskrefine {

/// Binary edge-pixel grid, same dimensions as the source image.
using EdgeMap = BinaryMask;

struct CannyParams {
    double sigma = 2.0;      // Gaussian smoothing std-dev, pixels
    double low_ratio = 0.10; // low hysteresis threshold / max gradient
    double high_ratio = 0.20;

    bool valid() const {
        return sigma > 0.0 && low_ratio > 0.0 && low_ratio < high_ratio && high_ratio <= 1.0;
    }
};

/// G(x,y) = exp(-(x^2+y^2)/(2 sigma^2)) / (2 pi sigma^2), before any
/// truncation or normalization.
double gaussian_point(double x, double y, double sigma);

struct Kernel2D {
    int radius = 0;                // samples span [-radius, radius]
    std::vector<double> values;    // (2*radius+1)^2, row-major, sums to 1

    double at(int dx, int dy) const {
        const int side = 2 * radius + 1;
        return values[static_cast<std::size_t>(dy + radius) * side + (dx + radius)];
    }
};

/// Gaussian kernel sampled at integer offsets, truncated at ceil(3*sigma)
/// and normalized to sum 1.
Kernel2D gaussian_kernel(double sigma);

/// Canny edges: Gaussian smoothing, Sobel gradients, non-maximum
/// suppression along the quantized gradient direction, then hysteresis at
/// low_ratio/high_ratio of the maximum gradient magnitude.
EdgeMap canny(const GrayImage &image, const CannyParams &params);

/// Coordinates of edge pixels that fall inside the region, in row-major
/// order. Dimensions must match.
std::vector<Point2> mask_edges(const EdgeMap &edges, const RegionMask &region);

} // namespace maskrefine

#endif
