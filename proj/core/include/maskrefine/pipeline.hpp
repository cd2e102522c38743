#ifndef MASKREFINE_PIPELINE_HPP
#define MASKREFINE_PIPELINE_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "maskrefine/edge.hpp"
#include "maskrefine/geometry.hpp"
#include "maskrefine/raster.hpp"
#include "maskrefine/sampling.hpp"

namespace maskrefine {

struct RefineConfig {
    int coarse_degree = 3;
    int fine_degree = 2;
    double control_point_ratio = 5.0; // control_count ~ data_count / ratio
    int min_control_points = 8;
    int max_control_points = 128;
    double dilation_radius = 3.0;
    CannyParams canny;
    int sample_count_n = 0;       // 0: max(64, round(0.5 * contour perimeter))
    double curvature_theta = 0.05; // 1/px
    double kd_radius_r = 0.0;      // 0: use dilation_radius
    int min_contour_points = 12;
    int raster_samples = 512;
    bool coarse_only = false; // stop after the coarse fit (ablation mode)

    bool valid() const;
    int resolve_sample_count(double contour_perimeter) const;
    double resolve_kd_radius() const { return kd_radius_r > 0.0 ? kd_radius_r : dilation_radius; }
    int control_count_for(std::size_t data_count) const;
};

struct RefineResult {
    std::size_t mask_id = 0;
    BSplineCurve coarse_curve;
    BSplineCurve fine_curve;
    SampleSet sample_set;
    BinaryMask refined_mask;
    std::array<double, 4> stage_ms{}; // per-stage durations, milliseconds
    std::vector<std::string> flags;

    bool has_flag(const std::string &name) const;
    bool passthrough() const { return has_flag("passthrough"); }
};

/// Refine one mask against its image: coarse closed fit of the traced
/// contour, Canny candidates inside the dilated band, adaptive resampling,
/// fine closed fit, and rasterization back to a mask. Contours shorter than
/// min_contour_points pass the input through unchanged with a flag.
RefineResult refine_mask(const GrayImage &image, const BinaryMask &mask, const RefineConfig &config);

/// Same, with an edge map the caller computed once for the whole image.
RefineResult refine_mask(const GrayImage &image, const BinaryMask &mask, const RefineConfig &config,
                         const EdgeMap &edges);

/// Refine every mask independently; the Canny edge map is computed once
/// and shared. A mask that fails yields a flagged passthrough instead of
/// aborting the batch. Results keep input order regardless of `jobs`.
std::vector<RefineResult> refine_all(const GrayImage &image, const std::vector<BinaryMask> &masks,
                                     const RefineConfig &config, int jobs = 1);

struct StageTimingReport {
    std::array<double, 4> total_ms{};
    std::array<double, 4> share_pct{};
    double overall_ms = 0.0;
};

StageTimingReport stage_timing_report(const std::vector<RefineResult> &results);

} // namespace maskrefine

#endif
