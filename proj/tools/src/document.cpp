#include "maskrefine/cli/document.hpp"

#include <algorithm>

namespace maskrefine::cli {

namespace {

nlohmann::json polyline_json(const std::vector<Point2> &points, const DocumentInfo &info) {
    nlohmann::json arr = nlohmann::json::array();
    const double r = info.dilation_radius;
    auto emit = [&](const Point2 &p) {
        arr.push_back({std::clamp(p.x, -r, info.width - 1 + r), std::clamp(p.y, -r, info.height - 1 + r)});
    };
    for (const Point2 &p : points) emit(p);
    if (!points.empty()) emit(points.front()); // closed: first point repeated last
    return arr;
}

} // namespace

nlohmann::json make_document(const DocumentInfo &info, const std::vector<MaskRecord> &records) {
    nlohmann::json doc;
    doc["schema_version"] = "1";
    doc["image"] = {{"width", info.width}, {"height", info.height}, {"source_path", info.image_path}};
    nlohmann::json masks = nlohmann::json::array();
    for (const MaskRecord &rec : records) {
        nlohmann::json entry;
        entry["mask_id"] = rec.mask_id;
        entry["source_path"] = rec.source_path;
        if (!rec.error.empty()) {
            entry["error"] = rec.error;
        } else {
            entry["output_path"] = rec.output_path;
            entry["coarse_polyline"] = polyline_json(rec.coarse_polyline, info);
            entry["fine_polyline"] = polyline_json(rec.fine_polyline, info);
            entry["sample_count"] = rec.sample_count;
            entry["flags"] = rec.flags;
            entry["stage_timings_ms"] = rec.stage_timings_ms;
        }
        masks.push_back(std::move(entry));
    }
    doc["masks"] = std::move(masks);
    return doc;
}

std::vector<std::string> validate_document(const nlohmann::json &doc) {
    std::vector<std::string> errors;
    auto fail = [&](const std::string &msg) { errors.push_back(msg); };

    if (doc.value("schema_version", "") != "1") fail("schema_version must be \"1\"");
    if (!doc.contains("image") || !doc["image"].is_object()) {
        fail("missing image object");
        return errors;
    }
    const auto &img = doc["image"];
    if (!img.contains("width") || !img.contains("height") || !img.contains("source_path"))
        fail("image needs width, height and source_path");
    const double w = img.value("width", 0);
    const double h = img.value("height", 0);
    if (w <= 0 || h <= 0) fail("image dimensions must be positive");

    if (!doc.contains("masks") || !doc["masks"].is_array()) {
        fail("missing masks array");
        return errors;
    }
    for (const auto &entry : doc["masks"]) {
        const std::string tag = "mask " + std::to_string(entry.value("mask_id", -1));
        if (!entry.contains("mask_id")) fail(tag + ": missing mask_id");
        if (entry.contains("error")) continue; // failed input: no polylines required
        for (const char *key : {"output_path", "coarse_polyline", "fine_polyline", "sample_count",
                                "flags", "stage_timings_ms"})
            if (!entry.contains(key)) fail(tag + ": missing " + key);
        for (const char *key : {"coarse_polyline", "fine_polyline"}) {
            if (!entry.contains(key) || !entry[key].is_array()) continue;
            const auto &poly = entry[key];
            if (poly.empty()) continue;
            if (poly.front() != poly.back()) fail(tag + ": " + key + " is not closed");
            for (const auto &pt : poly) {
                if (!pt.is_array() || pt.size() != 2) {
                    fail(tag + ": " + key + " has a malformed point");
                    break;
                }
                const double x = pt[0], y = pt[1];
                const double slack = 16.0; // bounds +- dilation radius, generously
                if (x < -slack || x > w - 1 + slack || y < -slack || y > h - 1 + slack) {
                    fail(tag + ": " + key + " leaves the image bounds");
                    break;
                }
            }
        }
    }
    return errors;
}

} // namespace maskrefine::cli
