#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sfc/covering.hpp"
#include "sfc/curve.hpp"
#include "sfc/error.hpp"
#include "sfc/hodge.hpp"
#include "sfc/topology.hpp"
#include "sfc/graph.hpp"

namespace sfc {

/// Runs `body`, re-throwing any Error with the stage name and a remediation hint.
void run_stage(const std::string& stage, const std::string& hint, const std::function<void()>& body);

/// Everything the centralized pipeline computes from a mesh.
struct PipelineState {
    TriMesh mesh;
    int genus = 0;
    DualTree tree;
    CutGraph cut;
    HomologyBasis homology;
    std::vector<OneForm> cohomology;
    HodgeBasis hodge;
    CoveringResult covering;
    std::vector<ZeroPoint> zeros;
};

PipelineState run_pipeline(TriMesh mesh, std::uint64_t seed, int max_attempts = 2000);

/// One measured invariant. `vacuous` marks checks with nothing to test (e.g. slits at g = 1).
struct Check {
    std::string name;
    double value = 0;
    double bound = 0;
    std::string relation; // "<=", ">", "=="
    bool pass = false;
    bool vacuous = false;
};

std::vector<Check> check_invariants(const PipelineState& state);

/// Dense-line checks on a trace of 200 handle perimeters: crossing gaps stay
/// above the hit tolerance, the gap profile never grows and halves fast enough.
std::vector<Check> curve_checks(const PipelineState& state, double slope, std::uint64_t seed);

/// Distributed variants against the centralized results: flooded cut locus,
/// diffused harmonic forms, flooded integration.
std::vector<Check> distributed_checks(const PipelineState& state);

struct DenseOptions {
    double slope = kDefaultSlope;
    double length = 0;        // flat length; 0 picks it adaptively
    double delta = 0;         // belt width; 0 means 2x the average flat edge
    int start = 0;            // start vertex
};

struct DenseRun {
    double slope = 0, length = 0, delta = 0;
    int start_handle = 0;
    DenseCurve curve;
    SurfaceCurve surface;
    DiscretePath path;
};

/// Slope selection, trace, pullback and discretization. With length 0 the
/// curve starts at 50 handle perimeters and doubles (at most 6 times) until
/// the belt holds every vertex.
DenseRun dense_path(const TriMesh& mesh, const CoveringResult& covering, const CommGraph& graph,
                    const DenseOptions& options, std::uint64_t seed);

} // namespace sfc
