#include "maskrefine/edge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace maskrefine {

double gaussian_point(double x, double y, double sigma) {
    const double s2 = sigma * sigma;
    return std::exp(-(x * x + y * y) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

Kernel2D gaussian_kernel(double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("gaussian_kernel: sigma must be positive");
    Kernel2D k;
    k.radius = static_cast<int>(std::ceil(3.0 * sigma));
    const int side = 2 * k.radius + 1;
    k.values.resize(static_cast<std::size_t>(side) * side);
    double sum = 0.0;
    for (int dy = -k.radius; dy <= k.radius; ++dy)
        for (int dx = -k.radius; dx <= k.radius; ++dx) {
            const double v = gaussian_point(dx, dy, sigma);
            k.values[static_cast<std::size_t>(dy + k.radius) * side + (dx + k.radius)] = v;
            sum += v;
        }
    for (double &v : k.values) v /= sum;
    return k;
}

namespace {

// mirror with edge repeat: -1 -> 0, n -> n-1
int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

// Separable pass of the truncated, normalized 1-D Gaussian along each axis;
// equal to convolving with the 2-D kernel since the truncated Gaussian
// factorizes.
std::vector<double> gaussian_blur(const GrayImage &img, double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        taps[static_cast<std::size_t>(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += taps[static_cast<std::size_t>(i + radius)];
    }
    for (double &t : taps) t /= sum;

    const int w = img.width, h = img.height;
    std::vector<double> tmp(static_cast<std::size_t>(w) * h);
    std::vector<double> out(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += taps[static_cast<std::size_t>(i + radius)] * img.at(reflect(x + i, w), y);
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += taps[static_cast<std::size_t>(i + radius)] *
                       tmp[static_cast<std::size_t>(reflect(y + i, h)) * w + x];
            out[static_cast<std::size_t>(y) * w + x] = acc;
        }
    return out;
}

} // namespace

EdgeMap canny(const GrayImage &image, const CannyParams &params) {
    if (image.width <= 0 || image.height <= 0) throw std::invalid_argument("canny: empty image");
    if (!params.valid()) throw std::invalid_argument("canny: bad parameters");

    const int w = image.width, h = image.height;
    const std::vector<double> smooth = gaussian_blur(image, params.sigma);
    auto sm = [&](int x, int y) {
        return smooth[static_cast<std::size_t>(reflect(y, h)) * w + reflect(x, w)];
    };

    // 3x3 Sobel
    std::vector<double> gx(static_cast<std::size_t>(w) * h), gy(gx.size()), mag(gx.size());
    double max_mag = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dx = (sm(x + 1, y - 1) + 2.0 * sm(x + 1, y) + sm(x + 1, y + 1)) -
                              (sm(x - 1, y - 1) + 2.0 * sm(x - 1, y) + sm(x - 1, y + 1));
            const double dy = (sm(x - 1, y + 1) + 2.0 * sm(x, y + 1) + sm(x + 1, y + 1)) -
                              (sm(x - 1, y - 1) + 2.0 * sm(x, y - 1) + sm(x + 1, y - 1));
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            gx[i] = dx;
            gy[i] = dy;
            mag[i] = std::sqrt(dx * dx + dy * dy);
            max_mag = std::max(max_mag, mag[i]);
        }

    EdgeMap edges(w, h);
    if (max_mag <= 0.0) return edges;

    const double low = params.low_ratio * max_mag;
    const double high = params.high_ratio * max_mag;

    // Non-maximum suppression along the gradient direction, with the
    // off-axis neighbor magnitudes linearly interpolated. Ties on a
    // two-pixel ridge keep exactly one pixel: the comparison is strict
    // against the forward neighbor.
    std::vector<std::uint8_t> strength(static_cast<std::size_t>(w) * h, 0); // 0 none, 1 weak, 2 strong
    auto mag_at = [&](int px, int py) {
        if (px < 0 || px >= w || py < 0 || py >= h) return 0.0;
        return mag[static_cast<std::size_t>(py) * w + px];
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double m = mag[i];
            if (m < low) continue;

            const double ax = std::abs(gx[i]), ay = std::abs(gy[i]);
            const bool same_sign = gx[i] * gy[i] >= 0.0;
            double n_fwd, n_bwd;
            if (ax >= ay) {
                const double wgt = ax > 0.0 ? ay / ax : 0.0;
                const int dy1 = same_sign ? 1 : -1;
                n_fwd = (1.0 - wgt) * mag_at(x + 1, y) + wgt * mag_at(x + 1, y + dy1);
                n_bwd = (1.0 - wgt) * mag_at(x - 1, y) + wgt * mag_at(x - 1, y - dy1);
            } else {
                const double wgt = ax / ay;
                const int dx1 = same_sign ? 1 : -1;
                n_fwd = (1.0 - wgt) * mag_at(x, y + 1) + wgt * mag_at(x + dx1, y + 1);
                n_bwd = (1.0 - wgt) * mag_at(x, y - 1) + wgt * mag_at(x - dx1, y - 1);
            }
            if (m >= n_bwd && m > n_fwd) strength[i] = m >= high ? 2 : 1;
        }

    // hysteresis: weak pixels survive only when 8-connected to a strong one
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < strength.size(); ++i)
        if (strength[i] == 2) {
            edges.data[i] = 1;
            stack.push_back(i);
        }
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        const int x = static_cast<int>(i % static_cast<std::size_t>(w));
        const int y = static_cast<int>(i / static_cast<std::size_t>(w));
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                if (strength[j] == 1 && !edges.data[j]) {
                    edges.data[j] = 1;
                    stack.push_back(j);
                }
            }
    }
    return edges;
}

std::vector<Point2> mask_edges(const EdgeMap &edges, const RegionMask &region) {
    if (edges.width != region.width || edges.height != region.height)
        throw std::invalid_argument("mask_edges: dimension mismatch");
    std::vector<Point2> out;
    for (int y = 0; y < edges.height; ++y)
        for (int x = 0; x < edges.width; ++x)
            if (edges.at(x, y) && region.at(x, y))
                out.push_back({static_cast<double>(x), static_cast<double>(y)});
    return out;
}

} // namespace maskrefine
