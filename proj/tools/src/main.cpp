#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include <json.hpp>

#include "maskrefine/cli/commands.hpp"

namespace {

using maskrefine::RefineConfig;

RefineConfig load_config_json(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    nlohmann::json doc = nlohmann::json::parse(in);

    RefineConfig cfg;
    for (const auto &[key, value] : doc.items()) {
        if (key == "coarse_degree") cfg.coarse_degree = value;
        else if (key == "fine_degree") cfg.fine_degree = value;
        else if (key == "control_point_ratio") cfg.control_point_ratio = value;
        else if (key == "min_control_points") cfg.min_control_points = value;
        else if (key == "max_control_points") cfg.max_control_points = value;
        else if (key == "dilation_radius") cfg.dilation_radius = value;
        else if (key == "sigma") cfg.canny.sigma = value;
        else if (key == "low_ratio") cfg.canny.low_ratio = value;
        else if (key == "high_ratio") cfg.canny.high_ratio = value;
        else if (key == "sample_count_n") cfg.sample_count_n = value;
        else if (key == "curvature_theta") cfg.curvature_theta = value;
        else if (key == "kd_radius_r") cfg.kd_radius_r = value;
        else if (key == "min_contour_points") cfg.min_contour_points = value;
        else if (key == "raster_samples") cfg.raster_samples = value;
        else if (key == "coarse_only") cfg.coarse_only = value;
        else throw std::invalid_argument("unknown config key \"" + key + "\" in " + path);
    }
    return cfg;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Refine jagged segmentation-mask boundaries into smooth closed B-spline contours"};
    app.require_subcommand(1);

    // refine ---------------------------------------------------------------
    maskrefine::cli::RefineOptions refine_opt;
    RefineConfig flag_cfg;
    std::string config_path;
    auto *refine = app.add_subcommand("refine", "Refine one or more masks against an image");
    refine->add_option("image", refine_opt.image_path, "Source image (PNG or PGM)")->required();
    refine->add_option("--mask", refine_opt.mask_paths, "Mask file; may be repeated");
    refine->add_option("--mask-dir", refine_opt.mask_dir, "Directory of mask files (*.png, *.pgm)");
    refine->add_option("--out-dir", refine_opt.out_dir, "Output directory")
        ->capture_default_str();
    refine->add_option("--doc", refine_opt.document_path,
                       "Contour document path (default: <out-dir>/<image>.contours.json)");
    refine->add_flag("--overlay", refine_opt.overlay, "Also write an overlay image with fine contours");
    refine->add_option("--jobs", refine_opt.jobs, "Refine masks with up to N worker threads")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    refine->add_option("--config", config_path, "JSON file with configuration values");

    struct FieldSync {
        CLI::Option *opt;
        std::function<void(RefineConfig &, const RefineConfig &)> copy;
    };
    std::vector<FieldSync> syncs;
    auto bind = [&syncs](CLI::Option *opt, auto copy) { syncs.push_back({opt, copy}); };

    bind(refine->add_option("--coarse-degree", flag_cfg.coarse_degree, "Stage-1 fit degree")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.coarse_degree = s.coarse_degree; });
    bind(refine->add_option("--fine-degree", flag_cfg.fine_degree, "Stage-4 fit degree")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.fine_degree = s.fine_degree; });
    bind(refine
             ->add_option("--control-ratio", flag_cfg.control_point_ratio,
                          "Data points per control point")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.control_point_ratio = s.control_point_ratio; });
    bind(refine
             ->add_option("--min-control-points", flag_cfg.min_control_points,
                          "Lower clamp on the control-point budget")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.min_control_points = s.min_control_points; });
    bind(refine
             ->add_option("--max-control-points", flag_cfg.max_control_points,
                          "Upper clamp on the control-point budget")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.max_control_points = s.max_control_points; });
    bind(refine->add_option("--dilation-radius", flag_cfg.dilation_radius, "Band radius, px")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.dilation_radius = s.dilation_radius; });
    bind(refine->add_option("--sigma", flag_cfg.canny.sigma, "Canny Gaussian sigma")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.canny.sigma = s.canny.sigma; });
    bind(refine->add_option("--low-ratio", flag_cfg.canny.low_ratio, "Canny low threshold ratio")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.canny.low_ratio = s.canny.low_ratio; });
    bind(refine->add_option("--high-ratio", flag_cfg.canny.high_ratio, "Canny high threshold ratio")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.canny.high_ratio = s.canny.high_ratio; });
    bind(refine
             ->add_option("--samples", flag_cfg.sample_count_n,
                          "Uniform sample count (0: half the contour perimeter)")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.sample_count_n = s.sample_count_n; });
    bind(refine->add_option("--theta", flag_cfg.curvature_theta, "High-curvature threshold, 1/px")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.curvature_theta = s.curvature_theta; });
    bind(refine
             ->add_option("--kd-radius", flag_cfg.kd_radius_r,
                          "Neighbor query radius, px (0: use dilation radius)")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.kd_radius_r = s.kd_radius_r; });
    bind(refine
             ->add_option("--min-contour-points", flag_cfg.min_contour_points,
                          "Contours shorter than this pass through")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.min_contour_points = s.min_contour_points; });
    bind(refine->add_option("--raster-samples", flag_cfg.raster_samples, "Curve samples per polyline")
             ->capture_default_str(),
         [](RefineConfig &d, const RefineConfig &s) { d.raster_samples = s.raster_samples; });
    bind(refine->add_flag("--coarse-only", flag_cfg.coarse_only, "Stop after the coarse fit"),
         [](RefineConfig &d, const RefineConfig &s) { d.coarse_only = s.coarse_only; });

    // metrics ----------------------------------------------------------------
    maskrefine::cli::MetricsOptions metrics_opt;
    auto *metrics = app.add_subcommand("metrics", "Curvature and Frechet metrics for a mask pair");
    metrics->add_option("a", metrics_opt.path_a, "First mask (PNG or PGM)")->required();
    metrics->add_option("b", metrics_opt.path_b, "Second mask (PNG or PGM)")->required();
    metrics->add_flag("--cyclic", metrics_opt.cyclic,
                      "Minimize the Frechet distance over cyclic rotations (quadratic cost)");

    // synth ------------------------------------------------------------------
    maskrefine::cli::SynthOptions synth_opt;
    const std::map<std::string, maskrefine::ShapeKind> shape_names{
        {"pentagram", maskrefine::ShapeKind::pentagram},
        {"disk", maskrefine::ShapeKind::disk},
        {"square", maskrefine::ShapeKind::square}};
    auto *synth = app.add_subcommand("synth", "Generate a synthetic image/mask fixture");
    synth->add_option("--shape", synth_opt.shape, "pentagram, disk or square")
        ->transform(CLI::CheckedTransformer(shape_names, CLI::ignore_case))
        ->required();
    synth->add_option("--size", synth_opt.size, "Raster size, px")
        ->check(CLI::Range(64, 1 << 14))
        ->capture_default_str();
    synth->add_option("--jitter", synth_opt.jitter_px, "Boundary jitter amplitude, px")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--seed", synth_opt.seed, "Random seed")->capture_default_str();
    synth->add_option("--out-dir", synth_opt.out_dir, "Output directory")->capture_default_str();
    synth->add_option("--prefix", synth_opt.prefix, "File prefix (default: <shape>_<size>)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? maskrefine::cli::kExitOk : maskrefine::cli::kExitBadArguments;
    }

    try {
        if (refine->parsed()) {
            RefineConfig cfg;
            if (!config_path.empty()) cfg = load_config_json(config_path);
            for (const FieldSync &s : syncs)
                if (s.opt->count() > 0) s.copy(cfg, flag_cfg);
            refine_opt.config = cfg;
            return maskrefine::cli::run_refine(refine_opt, std::cout, std::cerr);
        }
        if (metrics->parsed()) return maskrefine::cli::run_metrics(metrics_opt, std::cout, std::cerr);
        if (synth->parsed()) return maskrefine::cli::run_synth(synth_opt, std::cout, std::cerr);
    } catch (const std::invalid_argument &e) {
        std::cerr << e.what() << "\n";
        return maskrefine::cli::kExitBadArguments;
    } catch (const std::exception &e) {
        std::cerr << e.what() << "\n";
        return maskrefine::cli::kExitFailure;
    }
    return maskrefine::cli::kExitBadArguments;
}
