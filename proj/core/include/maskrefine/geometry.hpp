#ifndef MASKREFINE_GEOMETRY_HPP
#define MASKREFINE_GEOMETRY_HPP

#include <cstddef>
#include <vector>

namespace maskrefine {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double x_, double y_) : x(x_), y(y_) {}

    Point2 operator+(const Point2 &o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2 &o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    Point2 &operator+=(const Point2 &o) {
        x += o.x;
        y += o.y;
        return *this;
    }
};

inline double dot(const Point2 &a, const Point2 &b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2 &a, const Point2 &b) { return a.x * b.y - a.y * b.x; }
double norm(const Point2 &p);
double distance(const Point2 &a, const Point2 &b);

/// Non-decreasing parameter sequence u_0..u_m.
struct KnotVector {
    std::vector<double> knots;

    std::size_t size() const { return knots.size(); }
    double operator[](std::size_t i) const { return knots[i]; }
    double front() const { return knots.front(); }
    double back() const { return knots.back(); }
    bool non_decreasing() const;
};

/// Clamped uniform knot vector: degree+1 repeats at each end, equally
/// spaced interior knots, parameter range [t0, t1].
KnotVector clamped_uniform_knots(int control_count, int degree, double t0 = 0.0, double t1 = 1.0);

struct BSplineCurve {
    int degree = 0;
    std::vector<Point2> control_points;
    KnotVector knots;

    // Evaluation domain [u_k, u_{m-k}].
    double domain_start() const { return knots[static_cast<std::size_t>(degree)]; }
    double domain_end() const { return knots[knots.size() - 1 - static_cast<std::size_t>(degree)]; }

    bool valid() const;
};

struct CurveSample {
    double t = 0.0;
    Point2 point;
    Point2 first_derivative;
    Point2 second_derivative;
    double curvature = 0.0;
    bool second_derivative_defined = true;
};

/// B-spline basis N_{i,k}(t) by the Cox-de Boor recursion. 0/0 terms are 0.
/// Degree-0 spans are half-open except the last non-empty one, which is
/// closed on the right so the basis partitions unity up to t = u_m.
double basis(std::size_t i, int k, double t, const KnotVector &knots);

/// Curve point at parameter t. Throws std::domain_error outside [u_k, u_{m-k}].
Point2 evaluate(const BSplineCurve &curve, double t);

/// Point, first/second derivative and curvature at t. For degree < 2 the
/// second derivative is reported as zero with second_derivative_defined = false.
CurveSample derivatives(const BSplineCurve &curve, double t);

struct FitResult {
    BSplineCurve curve;
    bool regularized = false;
};

/// Least-squares fit of an open curve to ordered data: uniform parameters
/// t_i = u_0 + i*(u_m-u_0)/a, control points from the normal equations
/// (N^T N) P = N^T D. A near-singular system falls back to a Tikhonov
/// regularized solve and flags the result.
FitResult fit_curve(const std::vector<Point2> &data, int degree, int control_count,
                    const KnotVector &knots);

/// Closed-contour fit: wraps the first `degree` data points to the end,
/// fits on a clamped uniform knot vector over [0,1] and welds the endpoint
/// control points to their average so that C(0) == C(1).
FitResult fit_closed_curve(const std::vector<Point2> &data, int degree, int control_count);

} // namespace maskrefine

#endif
