#include "maskrefine/raster.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace maskrefine {

std::size_t BinaryMask::count() const {
    std::size_t n = 0;
    for (std::uint8_t v : data) n += v != 0;
    return n;
}

double Contour::perimeter() const {
    if (points.size() < 2) return 0.0;
    double len = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) len += distance(points[i - 1], points[i]);
    if (closed) len += distance(points.back(), points.front());
    return len;
}

double point_segment_dist2(const Point2 &p, const Point2 &a, const Point2 &b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double s = 0.0;
    if (len2 > 0.0) s = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
    const double dx = p.x - (a.x + s * vx);
    const double dy = p.y - (a.y + s * vy);
    return dx * dx + dy * dy;
}

namespace {

// Clockwise Moore neighborhood with y pointing down, starting at west.
constexpr int kNbr[8][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}};

int neighbor_index(int dx, int dy) {
    for (int i = 0; i < 8; ++i)
        if (kNbr[i][0] == dx && kNbr[i][1] == dy) return i;
    return 0;
}

struct Pixel {
    int x, y;
    bool operator==(const Pixel &o) const { return x == o.x && y == o.y; }
};

// 8-connected component labels, zero for background. Components are
// numbered in row-major discovery order starting at 1.
std::vector<int> label_components(const BinaryMask &mask, std::vector<Pixel> &starts) {
    std::vector<int> labels(mask.data.size(), 0);
    int next = 0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y) == 0 || labels[static_cast<std::size_t>(y) * mask.width + x] != 0)
                continue;
            ++next;
            starts.push_back({x, y});
            std::queue<Pixel> frontier;
            frontier.push({x, y});
            labels[static_cast<std::size_t>(y) * mask.width + x] = next;
            while (!frontier.empty()) {
                const Pixel p = frontier.front();
                frontier.pop();
                for (const auto &d : kNbr) {
                    const int nx = p.x + d[0], ny = p.y + d[1];
                    if (!mask.in_bounds(nx, ny) || mask.at(nx, ny) == 0) continue;
                    int &slot = labels[static_cast<std::size_t>(ny) * mask.width + nx];
                    if (slot == 0) {
                        slot = next;
                        frontier.push({nx, ny});
                    }
                }
            }
        }
    }
    return labels;
}

// Moore-neighbor boundary walk around one component. Scans the eight
// neighbors clockwise starting just after the backtrack pixel; stops per
// Jacob's criterion (start reached again with the same continuation).
Contour trace_component(const BinaryMask &mask, const std::vector<int> &labels, int id, Pixel start) {
    auto is_fg = [&](int x, int y) {
        return mask.in_bounds(x, y) && labels[static_cast<std::size_t>(y) * mask.width + x] == id;
    };

    auto next_move = [&](Pixel cur, Pixel backtrack, Pixel *found, Pixel *new_backtrack) {
        const int from = neighbor_index(backtrack.x - cur.x, backtrack.y - cur.y);
        Pixel before = backtrack;
        for (int step = 1; step <= 8; ++step) {
            const int idx = (from + step) % 8;
            const Pixel cand{cur.x + kNbr[idx][0], cur.y + kNbr[idx][1]};
            if (is_fg(cand.x, cand.y)) {
                *found = cand;
                *new_backtrack = before;
                return true;
            }
            before = cand;
        }
        return false;
    };

    Contour contour;
    Pixel cur = start;
    Pixel backtrack{start.x - 1, start.y};

    Pixel first_next{}, first_bt{};
    if (!next_move(cur, backtrack, &first_next, &first_bt)) {
        contour.points.push_back({static_cast<double>(start.x), static_cast<double>(start.y)});
        return contour;
    }

    std::size_t component_size = 0;
    for (int v : labels) component_size += v == id;
    const std::size_t cap = 4 * component_size + 8;

    while (contour.points.size() < cap) {
        contour.points.push_back({static_cast<double>(cur.x), static_cast<double>(cur.y)});
        Pixel nxt = cur, nbt = backtrack;
        if (!next_move(cur, backtrack, &nxt, &nbt)) break;
        if (cur == start && contour.points.size() > 1 && nxt == first_next) break;
        cur = nxt;
        backtrack = nbt;
    }
    // drop the duplicated start emitted by the final re-entry
    if (contour.points.size() > 1) {
        const Point2 &last = contour.points.back();
        if (last.x == start.x && last.y == start.y) contour.points.pop_back();
    }
    return contour;
}

void stamp_band(BinaryMask &out, const Point2 &a, const Point2 &b, double radius) {
    const double r2 = radius * radius;
    const int x0 = std::max(0, static_cast<int>(std::ceil(std::min(a.x, b.x) - radius - 1e-9)));
    const int x1 = std::min(out.width - 1, static_cast<int>(std::floor(std::max(a.x, b.x) + radius + 1e-9)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(std::min(a.y, b.y) - radius - 1e-9)));
    const int y1 = std::min(out.height - 1, static_cast<int>(std::floor(std::max(a.y, b.y) + radius + 1e-9)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (out.at(x, y)) continue;
            if (point_segment_dist2({static_cast<double>(x), static_cast<double>(y)}, a, b) <= r2)
                out.at(x, y) = 1;
        }
    }
}

template <typename Fn>
void for_each_segment(const Contour &poly, Fn &&fn) {
    const auto &pts = poly.points;
    if (pts.empty()) return;
    if (pts.size() == 1) {
        fn(pts[0], pts[0]);
        return;
    }
    for (std::size_t i = 1; i < pts.size(); ++i) fn(pts[i - 1], pts[i]);
    if (poly.closed) fn(pts.back(), pts.front());
}

} // namespace

std::vector<Contour> trace_contours(const BinaryMask &mask) {
    std::vector<Contour> contours;
    if (mask.width <= 0 || mask.height <= 0) return contours;
    std::vector<Pixel> starts;
    const std::vector<int> labels = label_components(mask, starts);
    for (std::size_t id = 0; id < starts.size(); ++id)
        contours.push_back(trace_component(mask, labels, static_cast<int>(id) + 1, starts[id]));
    return contours;
}

Contour rasterize_curve(const BSplineCurve &curve, int samples) {
    if (samples < 8) throw std::invalid_argument("rasterize_curve: need at least 8 samples");
    const double t0 = curve.domain_start();
    const double t1 = curve.domain_end();
    Contour out;
    out.points.reserve(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        const double t = t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(samples - 1);
        const Point2 p = evaluate(curve, t);
        const Point2 rounded{std::round(p.x), std::round(p.y)};
        if (out.points.empty() || rounded.x != out.points.back().x || rounded.y != out.points.back().y)
            out.points.push_back(rounded);
    }
    if (out.points.size() > 1 && out.points.front().x == out.points.back().x &&
        out.points.front().y == out.points.back().y)
        out.points.pop_back();
    return out;
}

RegionMask dilate_polyline(const Contour &poly, double radius, int width, int height) {
    RegionMask out(width, height);
    if (radius <= 0.0 || poly.points.empty()) return out;
    for_each_segment(poly, [&](const Point2 &a, const Point2 &b) { stamp_band(out, a, b, radius); });
    return out;
}

BinaryMask fill_polygon(const Contour &poly, int width, int height) {
    if (!poly.closed || poly.points.size() < 3)
        throw std::invalid_argument("fill_polygon: need a closed polygon with at least 3 points");

    BinaryMask out(width, height);
    const auto &pts = poly.points;

    double min_y = pts[0].y, max_y = pts[0].y;
    for (const Point2 &p : pts) {
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const int y0 = std::max(0, static_cast<int>(std::floor(min_y)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(max_y)));

    std::vector<double> xs;
    for (int y = y0; y <= y1; ++y) {
        xs.clear();
        const double Y = y;
        for_each_segment(poly, [&](const Point2 &a, const Point2 &b) {
            if ((a.y <= Y && Y < b.y) || (b.y <= Y && Y < a.y))
                xs.push_back(a.x + (Y - a.y) * (b.x - a.x) / (b.y - a.y));
        });
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
            const int xa = std::max(0, static_cast<int>(std::ceil(xs[i] - 1e-9)));
            const int xb = std::min(width - 1, static_cast<int>(std::floor(xs[i + 1] + 1e-9)));
            for (int x = xa; x <= xb; ++x) out.at(x, y) = 1;
        }
    }

    // boundary pixels: centers within half a pixel of an edge
    for_each_segment(poly, [&](const Point2 &a, const Point2 &b) { stamp_band(out, a, b, 0.5); });
    return out;
}

} // namespace maskrefine
