#ifndef MASKREFINE_SAMPLING_HPP
#define MASKREFINE_SAMPLING_HPP

#include <cstddef>
#include <vector>

#include "maskrefine/geometry.hpp"

namespace maskrefine {

/// Immutable 2-D KD-tree over a fixed point set. Radius queries return
/// exactly the stored points within Euclidean distance r, as indices in
/// ascending order (the same order a linear scan would produce).
class KdTree2 {
  public:
    KdTree2() = default;
    explicit KdTree2(std::vector<Point2> points);

    const std::vector<Point2> &points() const { return points_; }
    bool empty() const { return points_.empty(); }

    std::vector<std::size_t> radius_query(const Point2 &center, double r) const;

  private:
    struct Node {
        std::size_t point = 0;
        int axis = 0;
        int left = -1;
        int right = -1;
    };

    int build(std::vector<std::size_t> &ids, std::size_t lo, std::size_t hi, int depth);
    void collect(int node, const Point2 &center, double r2, std::vector<std::size_t> &out) const;

    std::vector<Point2> points_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

/// One uniform sample of a coarse curve kept for being in a high-curvature
/// region; `sample_index` identifies the generating uniform sample.
struct HighCurvaturePoint {
    std::size_t sample_index = 0;
    double t = 0.0;
    Point2 point;
    double curvature = 0.0;
};

struct HighCurvatureSet {
    std::vector<HighCurvaturePoint> points;
};

/// Ordered key samples produced by Canny-based resampling.
struct SampleSet {
    std::vector<Point2> points;
};

/// n parameters uniformly spaced over the curve domain, half-open so the
/// final sample of a closed curve does not duplicate its seam.
std::vector<CurveSample> uniform_curve_samples(const BSplineCurve &curve, int n);

/// Uniformly samples n parameters and keeps exactly those whose curvature
/// exceeds theta, in parameter order.
HighCurvatureSet curvature_sampling(const BSplineCurve &curve, int n, double theta);

/// Three-case resampling of the uniform coarse samples against the Canny
/// candidates:
///   1. no Canny point within r           -> keep the sample;
///   2. sample is high-curvature          -> centroid of its Canny neighbors;
///   3. otherwise, if not yet handled     -> centroid of Canny and coarse
///      neighbors, marking the coarse neighbors handled so flat stretches
///      collapse to one output point.
/// High-curvature membership is by uniform-sample index, not coordinates.
/// Consecutive outputs closer than 1e-9 are deduplicated.
SampleSet canny_sampling(const std::vector<Point2> &p_unif, const HighCurvatureSet &p_hc,
                         const std::vector<Point2> &cad_canny, double r);

} // namespace maskrefine

#endif
