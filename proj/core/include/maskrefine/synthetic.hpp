#ifndef MASKREFINE_SYNTHETIC_HPP
#define MASKREFINE_SYNTHETIC_HPP

#include <random>

#include "maskrefine/raster.hpp"

namespace maskrefine {

enum class ShapeKind { pentagram, disk, square };

/// Ideal closed outline of the shape, centered in a size x size raster.
Contour shape_polygon(ShapeKind kind, int size);

/// Displace every contour point along its local normal by an independent
/// uniform draw from [-jitter_px, jitter_px].
Contour jitter_contour(const Contour &contour, double jitter_px, std::mt19937 &rng);

struct SyntheticFixture {
    GrayImage image;         // filled shape, foreground 1.0 on 0.0
    BinaryMask clean_mask;   // ground truth
    BinaryMask jittered_mask; // boundary-perturbed variant
};

/// Deterministic test fixture: filled shape image, its clean mask, and a
/// mask whose boundary pixels were jittered along the normal and refilled.
/// jitter_px == 0 returns the clean mask twice.
SyntheticFixture make_fixture(ShapeKind kind, int size, double jitter_px, unsigned seed);

} // namespace maskrefine

#endif
