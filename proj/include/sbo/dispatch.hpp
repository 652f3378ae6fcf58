#pragma once

#include "sbo/config.hpp"
#include "sbo/solver.hpp"

namespace sbo {

struct DispatchOutcome {
    int exit_code = 0;  // 0 all verdicts pass, 1 verdict failure, 2 usage error
    std::vector<std::string> summary;
    std::vector<std::string> artifacts;  // files written
};

// Builds the initial state described by a config (analytic profile or CSV
// spectra), band-limited and de-aliased.
SolutionState initial_state(const RunConfig& cfg);

// Runs one configured command, writes its CSV artifacts and a summary file,
// and returns the verdict conjunction as the exit code.
DispatchOutcome dispatch(const RunConfig& cfg);

}  // namespace sbo
