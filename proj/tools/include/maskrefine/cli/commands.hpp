#ifndef MASKREFINE_CLI_COMMANDS_HPP
#define MASKREFINE_CLI_COMMANDS_HPP

#include <ostream>
#include <string>
#include <vector>

#include "maskrefine/pipeline.hpp"
#include "maskrefine/synthetic.hpp"

namespace maskrefine::cli {

// exit codes shared by every subcommand
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBadArguments = 2;

struct RefineOptions {
    std::string image_path;
    std::vector<std::string> mask_paths;
    std::string mask_dir;
    std::string out_dir = ".";
    std::string document_path; // default: <out_dir>/<image stem>.contours.json
    bool overlay = false;
    int jobs = 1;
    RefineConfig config;
};

int run_refine(const RefineOptions &opt, std::ostream &out, std::ostream &err);

struct MetricsOptions {
    std::string path_a;
    std::string path_b;
    bool cyclic = false;
};

int run_metrics(const MetricsOptions &opt, std::ostream &out, std::ostream &err);

struct SynthOptions {
    ShapeKind shape = ShapeKind::pentagram;
    int size = 256;
    double jitter_px = 2.0;
    unsigned seed = 1;
    std::string out_dir = ".";
    std::string prefix; // default: <shape>_<size>
};

int run_synth(const SynthOptions &opt, std::ostream &out, std::ostream &err);

} // namespace maskrefine::cli

#endif
