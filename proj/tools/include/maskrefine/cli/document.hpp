#ifndef MASKREFINE_CLI_DOCUMENT_HPP
#define MASKREFINE_CLI_DOCUMENT_HPP

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "maskrefine/geometry.hpp"

namespace maskrefine::cli {

/// One per-mask record of a refinement run. Failed inputs carry an error
/// message and empty polylines.
struct MaskRecord {
    std::size_t mask_id = 0;
    std::string source_path;
    std::string output_path;
    std::string error;
    std::vector<Point2> coarse_polyline; // open; closed on serialization
    std::vector<Point2> fine_polyline;
    std::size_t sample_count = 0;
    std::vector<std::string> flags;
    std::array<double, 4> stage_timings_ms{};
};

struct DocumentInfo {
    std::string image_path;
    int width = 0;
    int height = 0;
    double dilation_radius = 3.0;
};

/// Serialize to the schema_version "1" ContourDocument. Polylines are
/// emitted closed (first point repeated last) with coordinates clamped to
/// the image bounds extended by the dilation radius.
nlohmann::json make_document(const DocumentInfo &info, const std::vector<MaskRecord> &records);

/// Structural validation against the published schema; returns one message
/// per violation, empty when the document is valid.
std::vector<std::string> validate_document(const nlohmann::json &doc);

} // namespace maskrefine::cli

#endif
