#include "maskrefine/sampling.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace maskrefine {

KdTree2::KdTree2(std::vector<Point2> points) : points_(std::move(points)) {
    if (points_.empty()) return;
    std::vector<std::size_t> ids(points_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    nodes_.reserve(points_.size());
    root_ = build(ids, 0, ids.size(), 0);
}

int KdTree2::build(std::vector<std::size_t> &ids, std::size_t lo, std::size_t hi, int depth) {
    if (lo >= hi) return -1;
    const int axis = depth % 2;
    const std::size_t mid = (lo + hi) / 2;
    std::nth_element(ids.begin() + static_cast<std::ptrdiff_t>(lo),
                     ids.begin() + static_cast<std::ptrdiff_t>(mid),
                     ids.begin() + static_cast<std::ptrdiff_t>(hi), [&](std::size_t a, std::size_t b) {
                         return axis == 0 ? points_[a].x < points_[b].x : points_[a].y < points_[b].y;
                     });
    const int node = static_cast<int>(nodes_.size());
    nodes_.push_back({ids[mid], axis, -1, -1});
    nodes_[static_cast<std::size_t>(node)].left = build(ids, lo, mid, depth + 1);
    nodes_[static_cast<std::size_t>(node)].right = build(ids, mid + 1, hi, depth + 1);
    return node;
}

void KdTree2::collect(int node, const Point2 &center, double r2, std::vector<std::size_t> &out) const {
    if (node < 0) return;
    const Node &n = nodes_[static_cast<std::size_t>(node)];
    const Point2 &p = points_[n.point];
    const double dx = p.x - center.x, dy = p.y - center.y;
    if (dx * dx + dy * dy <= r2) out.push_back(n.point);
    const double delta = n.axis == 0 ? center.x - p.x : center.y - p.y;
    collect(delta <= 0.0 ? n.left : n.right, center, r2, out);
    if (delta * delta <= r2) collect(delta <= 0.0 ? n.right : n.left, center, r2, out);
}

std::vector<std::size_t> KdTree2::radius_query(const Point2 &center, double r) const {
    std::vector<std::size_t> out;
    if (r < 0.0) return out;
    collect(root_, center, r * r, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CurveSample> uniform_curve_samples(const BSplineCurve &curve, int n) {
    if (n < 1) throw std::invalid_argument("uniform_curve_samples: n must be positive");
    const double t0 = curve.domain_start();
    const double t1 = curve.domain_end();
    std::vector<CurveSample> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        out.push_back(derivatives(curve, t0 + (t1 - t0) * static_cast<double>(j) / n));
    return out;
}

HighCurvatureSet curvature_sampling(const BSplineCurve &curve, int n, double theta) {
    if (n < 8) throw std::invalid_argument("curvature_sampling: need n >= 8");
    if (theta <= 0.0) throw std::invalid_argument("curvature_sampling: theta must be positive");
    HighCurvatureSet out;
    const std::vector<CurveSample> samples = uniform_curve_samples(curve, n);
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples[i].curvature > theta)
            out.points.push_back({i, samples[i].t, samples[i].point, samples[i].curvature});
    return out;
}

SampleSet canny_sampling(const std::vector<Point2> &p_unif, const HighCurvatureSet &p_hc,
                         const std::vector<Point2> &cad_canny, double r) {
    if (p_unif.empty()) throw std::invalid_argument("canny_sampling: empty uniform sample set");
    if (r <= 0.0) throw std::invalid_argument("canny_sampling: radius must be positive");

    std::unordered_set<std::size_t> high_curvature;
    for (const HighCurvaturePoint &p : p_hc.points) high_curvature.insert(p.sample_index);

    const KdTree2 canny_tree(cad_canny);
    const KdTree2 coarse_tree(p_unif);
    std::vector<bool> handled(p_unif.size(), false);

    SampleSet out;
    auto emit = [&](const Point2 &p) {
        if (!out.points.empty() && distance(out.points.back(), p) < 1e-9) return;
        out.points.push_back(p);
    };

    for (std::size_t i = 0; i < p_unif.size(); ++i) {
        const std::vector<std::size_t> canny_nbrs =
            canny_tree.empty() ? std::vector<std::size_t>{} : canny_tree.radius_query(p_unif[i], r);

        if (canny_nbrs.empty()) {
            emit(p_unif[i]); // Case 1: missing Canny evidence
        } else if (high_curvature.count(i) != 0) {
            Point2 centroid; // Case 2: Canny neighbors only
            for (std::size_t j : canny_nbrs) centroid += cad_canny[j];
            emit(centroid * (1.0 / static_cast<double>(canny_nbrs.size())));
        } else if (!handled[i]) {
            // Case 3: average Canny and coarse neighbors, then mark the
            // coarse neighbors handled so nearby flat samples collapse
            const std::vector<std::size_t> coarse_nbrs = coarse_tree.radius_query(p_unif[i], r);
            Point2 centroid;
            for (std::size_t j : canny_nbrs) centroid += cad_canny[j];
            for (std::size_t j : coarse_nbrs) {
                centroid += p_unif[j];
                handled[j] = true;
            }
            emit(centroid * (1.0 / static_cast<double>(canny_nbrs.size() + coarse_nbrs.size())));
        }
    }
    return out;
}

} // namespace maskrefine
