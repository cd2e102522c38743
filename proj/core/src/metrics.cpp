#include "maskrefine/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maskrefine {

namespace {

double menger_curvature(const Point2 &a, const Point2 &b, const Point2 &c) {
    const double area2 = std::abs(cross(b - a, c - a)); // twice the triangle area
    if (area2 == 0.0) return 0.0;
    const double la = distance(a, b), lb = distance(b, c), lc = distance(c, a);
    const double denom = la * lb * lc;
    if (denom == 0.0) return 0.0;
    return 2.0 * area2 / denom;
}

double printed_formula_curvature(const Point2 &prev, const Point2 &cur, const Point2 &next,
                                 int &invalid) {
    const double num =
        prev.x * (cur.y - next.y) - cur.x * (prev.y - next.y) + next.x * (prev.y - cur.y);
    const double den = (prev.x - cur.x) * (prev.x - cur.x) + std::pow(prev.y - cur.y, 1.5);
    const double k = num / den;
    if (!std::isfinite(k)) {
        ++invalid;
        return 0.0;
    }
    return k;
}

} // namespace

CurvatureStats discrete_curvature(const Contour &contour, CurvatureMode mode) {
    const auto &pts = contour.points;
    if (pts.size() < 3)
        throw std::invalid_argument("discrete_curvature: need at least 3 contour points");

    CurvatureStats stats;
    stats.per_point.reserve(pts.size());
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 &prev = pts[(i + n - 1) % n];
        const Point2 &cur = pts[i];
        const Point2 &next = pts[(i + 1) % n];
        const double k = mode == CurvatureMode::menger
                             ? menger_curvature(prev, cur, next)
                             : printed_formula_curvature(prev, cur, next, stats.invalid_points);
        stats.per_point.push_back(k);
    }

    double sum = 0.0;
    for (double k : stats.per_point) sum += k;
    stats.mean_curvature = sum / static_cast<double>(n);
    double var = 0.0;
    for (double k : stats.per_point) {
        const double d = k - stats.mean_curvature;
        var += d * d;
    }
    stats.curvature_variance = var / static_cast<double>(n);
    return stats;
}

FrechetResult frechet_distance(const Contour &p, const Contour &q, bool want_coupling) {
    const auto &a = p.points;
    const auto &b = q.points;
    if (a.empty() || b.empty()) throw std::invalid_argument("frechet_distance: empty contour");

    const std::size_t n = a.size(), m = b.size();
    std::vector<double> table(n * m);
    auto d = [&](std::size_t i, std::size_t j) { return distance(a[i], b[j]); };
    auto at = [&](std::size_t i, std::size_t j) -> double & { return table[i * m + j]; };

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double reach;
            if (i == 0 && j == 0)
                reach = 0.0;
            else if (i == 0)
                reach = at(0, j - 1);
            else if (j == 0)
                reach = at(i - 1, 0);
            else
                reach = std::min({at(i - 1, j), at(i, j - 1), at(i - 1, j - 1)});
            at(i, j) = std::max(d(i, j), reach);
        }

    FrechetResult result;
    result.distance = at(n - 1, m - 1);
    if (want_coupling) {
        std::vector<std::pair<std::size_t, std::size_t>> path;
        std::size_t i = n - 1, j = m - 1;
        path.emplace_back(i, j);
        while (i > 0 || j > 0) {
            if (i == 0) {
                --j;
            } else if (j == 0) {
                --i;
            } else {
                const double diag = at(i - 1, j - 1), up = at(i - 1, j), left = at(i, j - 1);
                if (diag <= up && diag <= left) {
                    --i;
                    --j;
                } else if (up <= left) {
                    --i;
                } else {
                    --j;
                }
            }
            path.emplace_back(i, j);
        }
        std::reverse(path.begin(), path.end());
        result.coupling = std::move(path);
    }
    return result;
}

FrechetResult cyclic_frechet_distance(const Contour &p, const Contour &q) {
    if (p.points.empty() || q.points.empty())
        throw std::invalid_argument("cyclic_frechet_distance: empty contour");
    FrechetResult best;
    best.distance = std::numeric_limits<double>::infinity();
    Contour rotated = q;
    for (std::size_t shift = 0; shift < q.points.size(); ++shift) {
        if (shift > 0) std::rotate(rotated.points.begin(), rotated.points.begin() + 1, rotated.points.end());
        const FrechetResult r = frechet_distance(p, rotated);
        if (r.distance < best.distance) best = r;
    }
    return best;
}

} // namespace maskrefine
