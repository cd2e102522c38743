#include "maskrefine/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "maskrefine/cli/document.hpp"
#include "maskrefine/cli/image_io.hpp"
#include "maskrefine/metrics.hpp"

namespace fs = std::filesystem;

namespace maskrefine::cli {

namespace {

bool is_raster_file(const fs::path &p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".pgm";
}

std::string refined_name(const fs::path &mask_path, const fs::path &out_dir) {
    fs::path name = mask_path.stem();
    name += ".refined";
    name += mask_path.extension();
    return (out_dir / name).string();
}

void draw_line(std::vector<std::uint8_t> &rgb, int width, int height, Point2 a, Point2 b) {
    int x0 = static_cast<int>(std::lround(a.x)), y0 = static_cast<int>(std::lround(a.y));
    const int x1 = static_cast<int>(std::lround(b.x)), y1 = static_cast<int>(std::lround(b.y));
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        if (x0 >= 0 && x0 < width && y0 >= 0 && y0 < height) {
            std::uint8_t *px = &rgb[(static_cast<std::size_t>(y0) * width + x0) * 3];
            px[0] = 230;
            px[1] = 30;
            px[2] = 30;
        }
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

std::vector<Point2> curve_polyline(const BSplineCurve &curve, int samples) {
    if (!curve.valid()) return {};
    return rasterize_curve(curve, samples).points;
}

nlohmann::json curvature_json(const Contour &contour) {
    const auto menger = discrete_curvature(contour, CurvatureMode::menger);
    const auto printed = discrete_curvature(contour, CurvatureMode::paper_formula);
    return {
        {"points", contour.points.size()},
        {"menger", {{"mean_curvature", menger.mean_curvature},
                    {"curvature_variance", menger.curvature_variance}}},
        {"paper_formula", {{"mean_curvature", printed.mean_curvature},
                           {"curvature_variance", printed.curvature_variance},
                           {"invalid_points", printed.invalid_points}}},
    };
}

Contour largest_contour(const BinaryMask &mask) {
    Contour best;
    for (const Contour &c : trace_contours(mask))
        if (c.points.size() > best.points.size()) best = c;
    return best;
}

} // namespace

int run_refine(const RefineOptions &opt, std::ostream &out, std::ostream &err) {
    if (!opt.config.valid()) {
        err << "refine: invalid configuration values\n";
        return kExitBadArguments;
    }

    GrayImage image;
    try {
        image = read_gray(opt.image_path);
    } catch (const std::exception &e) {
        err << "refine: " << e.what() << "\n";
        return kExitFailure;
    }

    std::vector<std::string> mask_paths = opt.mask_paths;
    if (!opt.mask_dir.empty()) {
        std::vector<std::string> found;
        try {
            for (const auto &entry : fs::directory_iterator(opt.mask_dir))
                if (entry.is_regular_file() && is_raster_file(entry.path()))
                    found.push_back(entry.path().string());
        } catch (const std::exception &e) {
            err << "refine: " << e.what() << "\n";
            return kExitFailure;
        }
        std::sort(found.begin(), found.end());
        mask_paths.insert(mask_paths.end(), found.begin(), found.end());
    }
    if (mask_paths.empty()) {
        err << "refine: no mask files given\n";
        return kExitBadArguments;
    }

    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);

    // load masks, recording per-file errors without aborting the batch
    std::vector<MaskRecord> records(mask_paths.size());
    std::vector<BinaryMask> good_masks;
    std::vector<std::size_t> good_index;
    for (std::size_t i = 0; i < mask_paths.size(); ++i) {
        records[i].mask_id = i;
        records[i].source_path = mask_paths[i];
        try {
            BinaryMask mask = read_mask(mask_paths[i]);
            if (mask.width != image.width || mask.height != image.height)
                throw std::runtime_error("mask dimensions do not match the image");
            good_masks.push_back(std::move(mask));
            good_index.push_back(i);
        } catch (const std::exception &e) {
            records[i].error = e.what();
        }
    }

    std::vector<RefineResult> results;
    if (!good_masks.empty()) results = refine_all(image, good_masks, opt.config, opt.jobs);

    std::size_t written = 0;
    for (std::size_t g = 0; g < results.size(); ++g) {
        MaskRecord &rec = records[good_index[g]];
        const RefineResult &res = results[g];
        rec.output_path = refined_name(mask_paths[good_index[g]], opt.out_dir);
        rec.coarse_polyline = curve_polyline(res.coarse_curve, opt.config.raster_samples);
        rec.fine_polyline = curve_polyline(res.fine_curve, opt.config.raster_samples);
        rec.sample_count = res.sample_set.points.size();
        rec.flags = res.flags;
        rec.stage_timings_ms = res.stage_ms;
        try {
            write_mask(rec.output_path, res.refined_mask);
            ++written;
        } catch (const std::exception &e) {
            rec.error = e.what();
            rec.output_path.clear();
        }
    }

    const DocumentInfo info{opt.image_path, image.width, image.height, opt.config.dilation_radius};
    const nlohmann::json doc = make_document(info, records);
    fs::path doc_path = opt.document_path.empty()
                            ? fs::path(opt.out_dir) / (fs::path(opt.image_path).stem().string() +
                                                       ".contours.json")
                            : fs::path(opt.document_path);
    {
        std::ofstream doc_out(doc_path);
        if (!doc_out) {
            err << "refine: cannot write " << doc_path.string() << "\n";
            return kExitFailure;
        }
        doc_out << doc.dump(2) << "\n";
    }
    out << "wrote " << doc_path.string() << "\n";

    if (opt.overlay && !results.empty()) {
        std::vector<std::uint8_t> rgb(static_cast<std::size_t>(image.width) * image.height * 3);
        for (std::size_t i = 0; i < image.data.size(); ++i) {
            const auto v = static_cast<std::uint8_t>(
                std::lround(std::clamp(image.data[i], 0.0f, 1.0f) * 255.0f));
            rgb[i * 3] = rgb[i * 3 + 1] = rgb[i * 3 + 2] = v;
        }
        for (const MaskRecord &rec : records) {
            if (!rec.error.empty() || rec.fine_polyline.empty()) continue;
            for (std::size_t i = 0; i < rec.fine_polyline.size(); ++i)
                draw_line(rgb, image.width, image.height, rec.fine_polyline[i],
                          rec.fine_polyline[(i + 1) % rec.fine_polyline.size()]);
        }
        const fs::path overlay_path =
            fs::path(opt.out_dir) / (fs::path(opt.image_path).stem().string() + ".overlay.png");
        try {
            write_rgb_png(overlay_path.string(), image.width, image.height, rgb);
            out << "wrote " << overlay_path.string() << "\n";
        } catch (const std::exception &e) {
            err << "refine: " << e.what() << "\n";
            return kExitFailure;
        }
    }

    if (!results.empty()) {
        const auto report = stage_timing_report(results);
        out << "refined " << written << "/" << mask_paths.size() << " masks in " << report.overall_ms
            << " ms (stage shares:";
        for (std::size_t s = 0; s < 4; ++s)
            out << " S" << s + 1 << " " << std::lround(report.share_pct[s]) << "%";
        out << ")\n";
    }

    return written == 0 ? kExitFailure : kExitOk;
}

int run_metrics(const MetricsOptions &opt, std::ostream &out, std::ostream &err) {
    try {
        const BinaryMask mask_a = read_mask(opt.path_a);
        const BinaryMask mask_b = read_mask(opt.path_b);
        const Contour a = largest_contour(mask_a);
        const Contour b = largest_contour(mask_b);
        if (a.points.size() < 3 || b.points.size() < 3)
            throw std::runtime_error("inputs must contain a contour of at least 3 points");

        nlohmann::json result;
        result["a"] = curvature_json(a);
        result["a"]["source"] = opt.path_a;
        result["b"] = curvature_json(b);
        result["b"]["source"] = opt.path_b;
        result["frechet_distance"] =
            opt.cyclic ? cyclic_frechet_distance(a, b).distance : frechet_distance(a, b).distance;
        result["cyclic"] = opt.cyclic;
        out << result.dump(2) << "\n";
        return kExitOk;
    } catch (const std::exception &e) {
        err << "metrics: " << e.what() << "\n";
        return kExitFailure;
    }
}

int run_synth(const SynthOptions &opt, std::ostream &out, std::ostream &err) {
    SyntheticFixture fx;
    try {
        fx = make_fixture(opt.shape, opt.size, opt.jitter_px, opt.seed);
    } catch (const std::invalid_argument &e) {
        err << "synth: " << e.what() << "\n";
        return kExitBadArguments;
    }

    std::string prefix = opt.prefix;
    if (prefix.empty()) {
        const char *names[] = {"pentagram", "disk", "square"};
        prefix = std::string(names[static_cast<int>(opt.shape)]) + "_" + std::to_string(opt.size);
    }

    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    const fs::path base = fs::path(opt.out_dir) / prefix;
    try {
        write_gray_png(base.string() + "_image.png", fx.image);
        write_mask(base.string() + "_clean.png", fx.clean_mask);
        write_mask(base.string() + "_jittered.png", fx.jittered_mask);
    } catch (const std::exception &e) {
        err << "synth: " << e.what() << "\n";
        return kExitFailure;
    }
    out << "wrote " << base.string() << "_image.png, " << base.string() << "_clean.png, "
        << base.string() << "_jittered.png\n";
    return kExitOk;
}

} // namespace maskrefine::cli
