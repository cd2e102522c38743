#include "maskrefine/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace maskrefine {

bool RefineConfig::valid() const {
    return coarse_degree >= fine_degree && fine_degree >= 1 && control_point_ratio > 0.0 &&
           min_control_points >= coarse_degree + 1 && max_control_points >= min_control_points &&
           dilation_radius >= 1.0 && canny.valid() && sample_count_n >= 0 && curvature_theta > 0.0 &&
           kd_radius_r >= 0.0 && min_contour_points >= 3 && raster_samples >= 8;
}

int RefineConfig::resolve_sample_count(double contour_perimeter) const {
    if (sample_count_n > 0) return sample_count_n;
    return std::max(64, static_cast<int>(std::lround(0.5 * contour_perimeter)));
}

int RefineConfig::control_count_for(std::size_t data_count) const {
    const int wanted = static_cast<int>(std::lround(static_cast<double>(data_count) / control_point_ratio));
    return std::clamp(wanted, min_control_points, max_control_points);
}

bool RefineResult::has_flag(const std::string &name) const {
    return std::find(flags.begin(), flags.end(), name) != flags.end();
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

RefineResult passthrough_result(const BinaryMask &mask, std::vector<std::string> flags) {
    RefineResult r;
    r.refined_mask = mask;
    r.flags = std::move(flags);
    r.flags.emplace_back("passthrough");
    return r;
}

// The closed fit welds its endpoint control points, which dents the curve
// slightly at the seam. Start the contour at its flattest stretch so the
// seam never lands on a corner.
std::vector<Point2> rotate_to_flattest(const std::vector<Point2> &pts) {
    const std::size_t n = pts.size();
    const std::size_t w = 5; // window over which straightness is judged
    if (n < 4 * w) return pts;
    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 &a = pts[(i + n - w) % n];
        const Point2 &b = pts[i];
        const Point2 &c = pts[(i + w) % n];
        const double chord = distance(a, c);
        if (chord < 1e-9) continue;
        const double score = std::abs(cross(b - a, c - a)) / chord; // deviation from the chord
        if (score < best_score) {
            best_score = score;
            best = i;
        }
    }
    std::vector<Point2> out;
    out.reserve(n);
    out.insert(out.end(), pts.begin() + static_cast<std::ptrdiff_t>(best), pts.end());
    out.insert(out.end(), pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(best));
    return out;
}

// Closed polygon of unrounded curve samples; sub-pixel positions matter for
// the final fill.
Contour sample_polygon(const BSplineCurve &curve, int samples) {
    Contour out;
    const double t0 = curve.domain_start();
    const double t1 = curve.domain_end();
    out.points.reserve(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j)
        out.points.push_back(evaluate(curve, t0 + (t1 - t0) * static_cast<double>(j) / samples));
    return out;
}

RefineResult refine_one(const GrayImage &image, const BinaryMask &mask, const RefineConfig &config,
                        const EdgeMap *shared_edges) {
    if (!config.valid()) throw std::invalid_argument("refine_mask: invalid configuration");
    if (image.width != mask.width || image.height != mask.height)
        throw std::invalid_argument("refine_mask: image and mask dimensions differ");

    // Stage 1: ordered contour extraction and the coarse closed fit
    const auto t1 = Clock::now();
    const std::vector<Contour> contours = trace_contours(mask);
    if (contours.empty()) return passthrough_result(mask, {"empty-mask"});

    const Contour &contour = *std::max_element(
        contours.begin(), contours.end(),
        [](const Contour &a, const Contour &b) { return a.points.size() < b.points.size(); });
    const std::size_t n_points = contour.points.size();
    if (n_points < static_cast<std::size_t>(config.min_contour_points))
        return passthrough_result(mask, {"short-contour"});

    const int coarse_control = config.control_count_for(n_points);
    if (n_points < static_cast<std::size_t>(coarse_control + config.coarse_degree))
        return passthrough_result(mask, {"short-contour"});

    RefineResult result;
    const FitResult coarse =
        fit_closed_curve(rotate_to_flattest(contour.points), config.coarse_degree, coarse_control);
    if (coarse.regularized) result.flags.emplace_back("regularized-coarse-fit");
    result.coarse_curve = coarse.curve;

    if (config.coarse_only) {
        result.fine_curve = result.coarse_curve;
        result.refined_mask =
            fill_polygon(sample_polygon(result.coarse_curve, config.raster_samples), mask.width,
                         mask.height);
        result.stage_ms[0] = ms_since(t1);
        result.flags.emplace_back("coarse-only");
        return result;
    }
    result.stage_ms[0] = ms_since(t1);

    // Stage 2: dilated band and Canny candidates inside it
    const auto t2 = Clock::now();
    const Contour coarse_poly = rasterize_curve(result.coarse_curve, config.raster_samples);
    const RegionMask band =
        dilate_polyline(coarse_poly, config.dilation_radius, mask.width, mask.height);
    EdgeMap local_edges;
    const EdgeMap *edges = shared_edges;
    if (edges == nullptr) {
        local_edges = canny(image, config.canny);
        edges = &local_edges;
    }
    const std::vector<Point2> cad_canny = mask_edges(*edges, band);
    result.stage_ms[1] = ms_since(t2);

    // Stage 3: curvature-aware resampling anchored to the Canny evidence
    const auto t3 = Clock::now();
    const int n_samples = config.resolve_sample_count(contour.perimeter());
    const std::vector<CurveSample> samples = uniform_curve_samples(result.coarse_curve, n_samples);
    std::vector<Point2> p_unif;
    p_unif.reserve(samples.size());
    HighCurvatureSet high_curvature;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        p_unif.push_back(samples[i].point);
        if (samples[i].curvature > config.curvature_theta)
            high_curvature.points.push_back({i, samples[i].t, samples[i].point, samples[i].curvature});
    }
    result.sample_set = canny_sampling(p_unif, high_curvature, cad_canny, config.resolve_kd_radius());
    result.stage_ms[2] = ms_since(t3);

    // Stage 4: fine closed fit and rasterization back to a mask
    const auto t4 = Clock::now();
    const std::size_t n_keys = result.sample_set.points.size();
    const int fine_control = config.control_count_for(n_keys);
    if (n_keys < static_cast<std::size_t>(config.fine_degree) + 2 ||
        n_keys < static_cast<std::size_t>(fine_control + config.fine_degree)) {
        result.fine_curve = result.coarse_curve;
        result.flags.emplace_back("fine-fit-fallback");
    } else {
        const FitResult fine =
            fit_closed_curve(result.sample_set.points, config.fine_degree, fine_control);
        if (fine.regularized) result.flags.emplace_back("regularized-fine-fit");
        result.fine_curve = fine.curve;
    }

    result.refined_mask =
        fill_polygon(sample_polygon(result.fine_curve, config.raster_samples), mask.width, mask.height);
    result.stage_ms[3] = ms_since(t4);
    return result;
}

} // namespace

RefineResult refine_mask(const GrayImage &image, const BinaryMask &mask, const RefineConfig &config) {
    return refine_one(image, mask, config, nullptr);
}

RefineResult refine_mask(const GrayImage &image, const BinaryMask &mask, const RefineConfig &config,
                         const EdgeMap &edges) {
    if (edges.width != image.width || edges.height != image.height)
        throw std::invalid_argument("refine_mask: edge map dimensions differ from the image");
    return refine_one(image, mask, config, &edges);
}

std::vector<RefineResult> refine_all(const GrayImage &image, const std::vector<BinaryMask> &masks,
                                     const RefineConfig &config, int jobs) {
    if (!config.valid()) throw std::invalid_argument("refine_all: invalid configuration");
    std::vector<RefineResult> results(masks.size());
    if (masks.empty()) return results;

    EdgeMap edges;
    if (!config.coarse_only) edges = canny(image, config.canny);

    auto run_one = [&](std::size_t i) {
        try {
            results[i] = config.coarse_only ? refine_one(image, masks[i], config, nullptr)
                                            : refine_one(image, masks[i], config, &edges);
        } catch (const std::exception &e) {
            results[i] = passthrough_result(masks[i], {std::string("error: ") + e.what()});
        }
        results[i].mask_id = i;
    };

    const int workers = std::clamp<int>(jobs, 1, static_cast<int>(masks.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < masks.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < masks.size(); i = next.fetch_add(1))
                    run_one(i);
            });
        for (std::thread &t : pool) t.join();
    }
    return results;
}

StageTimingReport stage_timing_report(const std::vector<RefineResult> &results) {
    if (results.empty()) throw std::invalid_argument("stage_timing_report: no results");
    StageTimingReport report;
    for (const RefineResult &r : results)
        for (std::size_t s = 0; s < 4; ++s) report.total_ms[s] += r.stage_ms[s];
    for (double v : report.total_ms) report.overall_ms += v;
    if (report.overall_ms > 0.0)
        for (std::size_t s = 0; s < 4; ++s)
            report.share_pct[s] = 100.0 * report.total_ms[s] / report.overall_ms;
    return report;
}

} // namespace maskrefine
