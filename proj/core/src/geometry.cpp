#include "maskrefine/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace maskrefine {

double norm(const Point2 &p) { return std::sqrt(p.x * p.x + p.y * p.y); }

double distance(const Point2 &a, const Point2 &b) { return norm(a - b); }

bool KnotVector::non_decreasing() const {
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (knots[i] < knots[i - 1]) return false;
    }
    return true;
}

KnotVector clamped_uniform_knots(int control_count, int degree, double t0, double t1) {
    if (degree < 1) throw std::invalid_argument("clamped_uniform_knots: degree must be >= 1");
    if (control_count < degree + 1)
        throw std::invalid_argument("clamped_uniform_knots: need at least degree+1 control points");
    if (!(t0 < t1)) throw std::invalid_argument("clamped_uniform_knots: empty parameter range");

    const int spans = control_count - degree; // interior spans
    KnotVector kv;
    kv.knots.reserve(static_cast<std::size_t>(control_count + degree + 1));
    for (int i = 0; i <= degree; ++i) kv.knots.push_back(t0);
    for (int j = 1; j < spans; ++j)
        kv.knots.push_back(t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(spans));
    for (int i = 0; i <= degree; ++i) kv.knots.push_back(t1);
    return kv;
}

bool BSplineCurve::valid() const {
    if (degree < 1) return false;
    if (control_points.size() < static_cast<std::size_t>(degree) + 1) return false;
    if (knots.size() != control_points.size() + static_cast<std::size_t>(degree) + 1) return false;
    if (!knots.non_decreasing()) return false;
    return domain_start() < domain_end();
}

double basis(std::size_t i, int k, double t, const KnotVector &knots) {
    const std::size_t m = knots.size() - 1;
    if (k < 0 || i + static_cast<std::size_t>(k) + 1 > m)
        throw std::domain_error("basis: index out of range");
    if (t < knots.front() || t > knots.back()) throw std::domain_error("basis: t out of knot range");

    struct Rec {
        const std::vector<double> &u;
        double t;
        double umax;

        double eval(std::size_t i, int k) const {
            if (k == 0) {
                if (u[i] <= t && t < u[i + 1]) return 1.0;
                // close the last non-empty span on the right
                if (t == umax && u[i] < u[i + 1] && u[i + 1] == umax) return 1.0;
                return 0.0;
            }
            double result = 0.0;
            const double d1 = u[i + static_cast<std::size_t>(k)] - u[i];
            if (d1 != 0.0) result += (t - u[i]) / d1 * eval(i, k - 1);
            const double d2 = u[i + static_cast<std::size_t>(k) + 1] - u[i + 1];
            if (d2 != 0.0)
                result += (u[i + static_cast<std::size_t>(k) + 1] - t) / d2 * eval(i + 1, k - 1);
            return result;
        }
    };
    return Rec{knots.knots, t, knots.back()}.eval(i, k);
}

namespace {

// Index s with u_s <= t < u_{s+1} among the non-empty spans of the valid
// domain; t == domain end maps to the last non-empty span.
std::size_t find_span(const KnotVector &knots, int degree, double t) {
    const std::size_t k = static_cast<std::size_t>(degree);
    const std::size_t m = knots.size() - 1;
    const std::size_t high = m - k; // domain end knot index
    if (t >= knots[high]) {
        std::size_t s = high - 1;
        while (s > k && knots[s] == knots[s + 1]) --s;
        return s;
    }
    std::size_t lo = k, hi = high;
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (t < knots[mid])
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

// All k+1 basis values active on span s (standard triangular scheme).
void basis_row(const KnotVector &knots, int degree, std::size_t span, double t,
               std::span<double> out) {
    const std::size_t k = static_cast<std::size_t>(degree);
    out[0] = 1.0;
    std::vector<double> left(k + 1), right(k + 1);
    for (std::size_t j = 1; j <= k; ++j) {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        double saved = 0.0;
        for (std::size_t r = 0; r < j; ++r) {
            const double denom = right[r + 1] + left[j - r];
            const double temp = denom != 0.0 ? out[r] / denom : 0.0;
            out[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        out[j] = saved;
    }
}

Point2 eval_spline(std::span<const Point2> points, int degree, const KnotVector &knots, double t) {
    const std::size_t span = find_span(knots, degree, t);
    std::vector<double> row(static_cast<std::size_t>(degree) + 1);
    basis_row(knots, degree, span, t, row);
    Point2 result;
    const std::size_t first = span - static_cast<std::size_t>(degree);
    for (std::size_t j = 0; j < row.size(); ++j) result += points[first + j] * row[j];
    return result;
}

void check_domain(const BSplineCurve &curve, double t, const char *who) {
    if (t < curve.domain_start() || t > curve.domain_end())
        throw std::domain_error(std::string(who) + ": t outside evaluation domain");
}

KnotVector trim_knots(const KnotVector &knots, std::size_t cut) {
    KnotVector out;
    out.knots.assign(knots.knots.begin() + static_cast<std::ptrdiff_t>(cut),
                     knots.knots.end() - static_cast<std::ptrdiff_t>(cut));
    return out;
}

// Control points of the derivative spline (degree k-1 over knots u_1..u_{m-1}).
// Terms with a zero-length knot span are treated as zero.
std::vector<Point2> derivative_controls(const std::vector<Point2> &points, int degree,
                                        const KnotVector &knots) {
    const std::size_t k = static_cast<std::size_t>(degree);
    std::vector<Point2> q(points.size() - 1);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double span = knots[i + k + 1] - knots[i + 1];
        q[i] = span != 0.0 ? (points[i + 1] - points[i]) * (static_cast<double>(degree) / span)
                           : Point2{0.0, 0.0};
    }
    return q;
}

} // namespace

Point2 evaluate(const BSplineCurve &curve, double t) {
    if (!curve.valid()) throw std::invalid_argument("evaluate: malformed curve");
    check_domain(curve, t, "evaluate");
    return eval_spline(curve.control_points, curve.degree, curve.knots, t);
}

CurveSample derivatives(const BSplineCurve &curve, double t) {
    if (!curve.valid()) throw std::invalid_argument("derivatives: malformed curve");
    check_domain(curve, t, "derivatives");

    CurveSample s;
    s.t = t;
    s.point = eval_spline(curve.control_points, curve.degree, curve.knots, t);

    const KnotVector knots1 = trim_knots(curve.knots, 1);
    const std::vector<Point2> q = derivative_controls(curve.control_points, curve.degree, curve.knots);
    s.first_derivative = eval_spline(q, curve.degree - 1, knots1, t);

    if (curve.degree >= 2) {
        const KnotVector knots2 = trim_knots(curve.knots, 2);
        const std::vector<Point2> d = derivative_controls(q, curve.degree - 1, knots1);
        s.second_derivative = eval_spline(d, curve.degree - 2, knots2, t);
    } else {
        s.second_derivative = {0.0, 0.0};
        s.second_derivative_defined = false;
    }

    const double speed = norm(s.first_derivative);
    s.curvature = speed < 1e-12
                      ? 0.0
                      : std::abs(cross(s.first_derivative, s.second_derivative)) / (speed * speed * speed);
    return s;
}

namespace {

// Dense symmetric solve helpers for the normal equations. Sizes are small
// (control counts are clamped to <= 128 by the pipeline).
struct SymMatrix {
    std::size_t n = 0;
    std::vector<double> a; // row-major n*n

    explicit SymMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
    double &at(std::size_t r, std::size_t c) { return a[r * n + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

bool cholesky_solve(SymMatrix m, std::vector<Point2> rhs, std::vector<Point2> &out) {
    const std::size_t n = m.n;
    for (std::size_t j = 0; j < n; ++j) {
        double diag = m.at(j, j);
        for (std::size_t p = 0; p < j; ++p) diag -= m.at(j, p) * m.at(j, p);
        if (!(diag > 0.0) || !std::isfinite(diag)) return false;
        const double root = std::sqrt(diag);
        m.at(j, j) = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = m.at(i, j);
            for (std::size_t p = 0; p < j; ++p) v -= m.at(i, p) * m.at(j, p);
            m.at(i, j) = v / root;
        }
    }
    // forward substitution L y = rhs
    for (std::size_t i = 0; i < n; ++i) {
        Point2 v = rhs[i];
        for (std::size_t p = 0; p < i; ++p) v = v - rhs[p] * m.at(i, p);
        rhs[i] = v * (1.0 / m.at(i, i));
    }
    // back substitution L^T x = y
    out.assign(n, Point2{});
    for (std::size_t ii = n; ii-- > 0;) {
        Point2 v = rhs[ii];
        for (std::size_t p = ii + 1; p < n; ++p) v = v - out[p] * m.at(p, ii);
        out[ii] = v * (1.0 / m.at(ii, ii));
    }
    return true;
}

double frobenius(const std::vector<Point2> &v) {
    double s = 0.0;
    for (const Point2 &p : v) s += p.x * p.x + p.y * p.y;
    return std::sqrt(s);
}

} // namespace

FitResult fit_curve(const std::vector<Point2> &data, int degree, int control_count,
                    const KnotVector &knots) {
    if (degree < 1) throw std::invalid_argument("fit_curve: degree must be >= 1");
    if (control_count < degree + 1)
        throw std::invalid_argument("fit_curve: control_count must be >= degree+1");
    if (data.size() < static_cast<std::size_t>(control_count))
        throw std::invalid_argument("fit_curve: fewer data points than control points");
    if (knots.size() != static_cast<std::size_t>(control_count + degree + 1))
        throw std::invalid_argument("fit_curve: knot count inconsistent with control_count and degree");
    if (!knots.non_decreasing()) throw std::invalid_argument("fit_curve: knots must be non-decreasing");

    const std::size_t rows = data.size();
    const std::size_t cols = static_cast<std::size_t>(control_count);
    const std::size_t k = static_cast<std::size_t>(degree);
    const double u0 = knots.front();
    const double um = knots.back();
    const double a = static_cast<double>(rows - 1);

    // Uniform parameters t_i = u_0 + i*(u_m-u_0)/a, so t_0 = u_0 and t_a = u_m.
    // Each basis row has only degree+1 nonzeros; accumulate N^T N and N^T D
    // directly from them.
    SymMatrix ntn(cols);
    std::vector<Point2> ntd(cols);
    std::vector<double> row(k + 1);
    KnotVector domain_knots = knots;
    for (std::size_t i = 0; i < rows; ++i) {
        const double t = u0 + (um - u0) * (static_cast<double>(i) / a);
        const std::size_t span = find_span(domain_knots, degree, t);
        basis_row(domain_knots, degree, span, t, row);
        const std::size_t first = span - k;
        for (std::size_t r = 0; r <= k; ++r) {
            ntd[first + r] += data[i] * row[r];
            for (std::size_t c = 0; c <= k; ++c) ntn.at(first + r, first + c) += row[r] * row[c];
        }
    }

    const double rhs_norm = frobenius(ntd);
    auto residual_ok = [&](const std::vector<Point2> &p) {
        std::vector<Point2> res(cols);
        for (std::size_t r = 0; r < cols; ++r) {
            Point2 acc;
            for (std::size_t c = 0; c < cols; ++c) acc += p[c] * ntn.at(r, c);
            res[r] = acc - ntd[r];
        }
        const double scale = rhs_norm > 0.0 ? rhs_norm : 1.0;
        return frobenius(res) <= 1e-8 * scale;
    };

    FitResult result;
    std::vector<Point2> solution;
    bool solved = cholesky_solve(ntn, ntd, solution) && residual_ok(solution);
    if (!solved) {
        // Tikhonov fallback keeps degenerate inputs total.
        double trace = 0.0;
        for (std::size_t j = 0; j < cols; ++j) trace += ntn.at(j, j);
        const double lambda = 1e-10 * trace / static_cast<double>(cols);
        SymMatrix reg = ntn;
        for (std::size_t j = 0; j < cols; ++j) reg.at(j, j) += lambda;
        if (!cholesky_solve(reg, ntd, solution))
            throw std::runtime_error("fit_curve: normal equations unsolvable");
        result.regularized = true;
    }

    result.curve.degree = degree;
    result.curve.control_points = std::move(solution);
    result.curve.knots = knots;
    return result;
}

FitResult fit_closed_curve(const std::vector<Point2> &data, int degree, int control_count) {
    if (degree < 1) throw std::invalid_argument("fit_closed_curve: degree must be >= 1");
    if (data.size() < static_cast<std::size_t>(control_count + degree))
        throw std::invalid_argument("fit_closed_curve: not enough data points");

    std::vector<Point2> wrapped = data;
    wrapped.insert(wrapped.end(), data.begin(), data.begin() + degree);

    const KnotVector knots = clamped_uniform_knots(control_count, degree);
    FitResult result = fit_curve(wrapped, degree, control_count, knots);

    // Weld the clamped endpoints; the curve then starts and ends at the
    // shared control point exactly.
    Point2 &front = result.curve.control_points.front();
    Point2 &back = result.curve.control_points.back();
    const Point2 weld = (front + back) * 0.5;
    front = weld;
    back = weld;
    return result;
}

} // namespace maskrefine
