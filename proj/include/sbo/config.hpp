#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbo/grid.hpp"

namespace sbo {

enum class Command {
    solve,
    conserve,
    scaling,
    picard,
    probe_gateaux,
    probe_bilinear,
    oracle_calculus,
};

const char* to_string(Command c);

// Analytic initial-data profiles plus CSV spectra.
struct DataSpec {
    std::string kind = "gaussian";  // gaussian | single_mode | packet | csv
    double amp_u = 0.4;
    double amp_v = 0.3;
    double width_frac = 0.05;  // gaussian width as a fraction of L
    int mode_u = 3;            // carrier / single mode for u
    int mode_v = 2;            // single mode for v
    int halfwidth_modes = 2;   // packet half-width in modes
    std::string path;          // csv spectra
};

struct RunConfig {
    Command command = Command::solve;

    // system block
    double alpha = 1.0;
    double beta = 1.0;
    double nu = 0.5;
    double s = 0.0;
    double s_prime = -0.5;
    double b = 0.55;
    double b_prime = 0.55;
    double c = 0.6;
    double c_prime = 0.6;

    // grid block
    double length = 128.0;
    int n = 512;
    double dt = 1e-3;
    double horizon = 0.5;

    // probe block (top level in the document)
    std::string case_label;
    std::vector<int> scales{8, 16, 32, 64, 128, 256};
    double probe_t = 1.0;
    int trials = 4;
    int points_per_dim = 8;
    int modes_per_min_width = 16;

    // command extras
    std::vector<int> lambdas{2, 4};
    int iterations = 6;
    int quad_intervals = 64;

    DataSpec data;

    std::string out_prefix = "sbo_out";
    std::uint64_t seed = 1;
};

// Parses one JSON document.  Unknown keys are rejected and every error names
// the offending path.  Per-case defaults are resolved here (probe cases pin
// nu and suggest s, s').
RunConfig parse_config(const std::string& json_text);

// canonical JSON round-trip of a resolved config
std::string emit_config(const RunConfig& cfg);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace sbo
