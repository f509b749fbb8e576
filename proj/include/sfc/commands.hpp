#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "sfc/config.hpp"

namespace sfc {

/// Runs body(i) for i in [0, n) on up to `threads` threads. Results must go to
/// per-index slots, so the output does not depend on the thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

/// Thread count from SFC_THREADS (default 1). Throws InvalidArgument on junk.
int threads_from_env();

/// Mesh through curve. Writes config.json, report.json, atlas.json,
/// forms.json, curve.json and path.csv into the output directory.
void command_pipeline(const RunConfig& config, std::ostream& log);

/// Strategy traces (trace_<strategy>.csv), the fleet (fleet_joint.csv,
/// fleet_mules.csv, overlap.csv, overlap_steps.csv) and summary.json.
void command_simulate(const RunConfig& config, int threads, std::ostream& log);

struct VerifyOptions {
    std::string forms;        // cohomology basis to check instead of the computed one
    bool distributed = true;  // include the distributed-protocol checks
};

/// Writes verify.json; returns true when every check passes.
bool command_verify(const RunConfig& config, const VerifyOptions& options, std::ostream& log);

} // namespace sfc
