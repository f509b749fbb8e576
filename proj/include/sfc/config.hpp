#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfc/curve.hpp"
#include "sfc/mesh.hpp"

namespace sfc {

/// One data mule. `start` -1 picks a default: the run's start vertex for the
/// first mule, then each next one as far (in hops) from the earlier ones as possible.
/// `slope` 0 picks the run slope plus (sqrt 2 - 1) per mule index.
struct MuleSpec {
    std::string strategy = "dense"; // dense | euler | rw
    double slope = 0;
    int start = -1;
    std::uint64_t seed = 0; // random walk only; 0 means run seed + mule index
};

struct RunConfig {
    std::string mesh;       // OFF/OBJ path
    std::string generate;   // generator spec, e.g. "genus=2,res=16"; used when mesh is empty
    std::uint64_t seed = 7;
    double slope = kDefaultSlope;
    double length = 0;      // 0: adaptive
    double delta = 0;       // 0: twice the average flat edge
    int start = 0;
    std::vector<std::string> strategies{"dense", "euler", "rw"};
    int rw_seeds = 20;      // random walks use seeds seed, seed + 1, ...
    std::vector<MuleSpec> fleet;
    std::string outdir = "out";
    int stride = 0;         // 0: V / 100
    int max_attempts = 2000;
};

/// Builds the mesh named by the config (file or generator spec).
TriMesh load_config_mesh(const RunConfig& config);

/// Generator specs: "genus=G,res=R", "torus=N,M" (torus of revolution), "flat=N,M", "tetrahedron".
TriMesh generate_from_spec(const std::string& spec);

nlohmann::ordered_json to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys and bad values throw InvalidArgument.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

} // namespace sfc
