#ifndef MASKREFINE_METRICS_HPP
#define MASKREFINE_METRICS_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "maskrefine/raster.hpp"

namespace maskrefine {

enum class CurvatureMode {
    /// Eq.-style published three-point formula, evaluated verbatim
    /// (including its unusual denominator); kept for reproducibility.
    paper_formula,
    /// Circumscribed-circle (Menger) curvature 4*Area/(|a||b||c|); the
    /// default everywhere a smoothness statistic is needed.
    menger,
};

struct CurvatureStats {
    double mean_curvature = 0.0;
    double curvature_variance = 0.0;
    std::vector<double> per_point;
    int invalid_points = 0; // values recorded as 0 after a zero/NaN denominator
};

/// Three-point discrete curvature at every contour point with closed
/// wrap-around neighbors. Requires at least 3 points.
CurvatureStats discrete_curvature(const Contour &contour, CurvatureMode mode);

struct FrechetResult {
    double distance = 0.0;
    std::optional<std::vector<std::pair<std::size_t, std::size_t>>> coupling;
};

/// Discrete Frechet distance by dynamic programming:
///   d[i][j] = max(|p_i - q_j|, min(d[i-1][j], d[i][j-1], d[i-1][j-1])).
FrechetResult frechet_distance(const Contour &p, const Contour &q, bool want_coupling = false);

/// Minimum discrete Frechet distance over all cyclic rotations of q.
/// Quadratic in |q| times the DP cost; intended for modest contours.
FrechetResult cyclic_frechet_distance(const Contour &p, const Contour &q);

} // namespace maskrefine

#endif
