#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfc/pipeline.hpp"

namespace sfc {

using ojson = nlohmann::ordered_json;

ojson atlas_json(const CoveringAtlas& atlas);
ojson curve_json(const DenseRun& run);
ojson checks_json(const std::vector<Check>& checks);

/// Genus, sizes, zeros and the invariant checks of a pipeline run.
ojson report_json(const PipelineState& state, const std::vector<Check>& checks);

/// Edge list plus the cohomology and harmonic bases, one value per edge.
ojson forms_json(const PipelineState& state);
/// Reads the cohomology basis back; the edge list must match the mesh.
std::vector<OneForm> cohomology_from_json(const nlohmann::json& j, const TriMesh& mesh);

/// Header `hop,vertex,bridge`.
void write_path_csv(std::ostream& out, const DiscretePath& path);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text(const std::string& path, const std::string& text);
std::string dump(const ojson& j);

} // namespace sfc
