#include <fstream>
#include <ostream>

#include "sfc/error.hpp"
#include "sfc/serialize.hpp"

namespace sfc {

namespace {

ojson point(cplx z) { return ojson::array({z.real(), z.imag()}); }

ojson glue_json(const std::vector<GluePiece>& pieces) {
    ojson out = ojson::array();
    for (const GluePiece& p : pieces)
        out.push_back({{"segment", p.segment},
                       {"from", p.from},
                       {"to", p.to},
                       {"partner_handle", p.partner_handle},
                       {"partner_slit", p.partner_slit},
                       {"partner_top", p.partner_top},
                       {"translation", point(p.translation)}});
    return out;
}

ojson vector_json(const Eigen::VectorXd& v) {
    ojson out = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

} // namespace

ojson atlas_json(const CoveringAtlas& atlas) {
    ojson j;
    j["genus"] = atlas.genus;
    j["zeros"] = ojson::array();
    for (const ZeroPoint& z : atlas.zeros)
        j["zeros"].push_back({{"vertex", z.vertex}, {"winding", z.winding}, {"density", z.density}});
    j["handles"] = ojson::array();
    for (const Handle& h : atlas.handles) {
        ojson hj;
        hj["origin"] = point(h.origin);
        hj["lattice"] = ojson::array({point(h.lattice[0]), point(h.lattice[1])});
        hj["perimeter"] = h.perimeter();
        hj["faces"] = h.faces;
        hj["slits"] = ojson::array();
        for (const Slit& s : h.slits)
            hj["slits"].push_back(
                {{"start", point(s.start)}, {"end", point(s.end)}, {"top", glue_json(s.top)}, {"bottom", glue_json(s.bottom)}});
        j["handles"].push_back(hj);
    }
    j["face_handle"] = atlas.face_handle;
    return j;
}

ojson curve_json(const DenseRun& run) {
    const DenseCurve& c = run.curve;
    ojson j;
    j["slope"] = run.slope;
    j["length"] = run.length;
    j["belt_width"] = run.delta;
    j["start_handle"] = c.start_handle;
    j["start"] = point(c.start);
    j["direction"] = point(c.direction);
    j["slit_crossings"] = c.slit_crossings;
    j["closest_endpoint"] = c.closest_endpoint;
    j["closest_lattice_point"] = c.closest_lattice_point;
    j["pullback_resync_error"] = run.surface.resync_error;
    j["surface_pieces"] = run.surface.pieces.size();
    j["path"] = {{"hops", run.path.hops()},
                 {"bridges", run.path.bridges},
                 {"bridge_hops", run.path.bridge_hops},
                 {"belt", run.path.belt.size()}};
    j["segments"] = ojson::array();
    for (const FlatSegment& s : c.segments)
        j["segments"].push_back(ojson::array({s.handle, s.start.real(), s.start.imag(), s.end.real(), s.end.imag()}));
    return j;
}

ojson checks_json(const std::vector<Check>& checks) {
    ojson out = ojson::array();
    for (const Check& c : checks)
        out.push_back({{"name", c.name},
                       {"value", c.value},
                       {"relation", c.relation},
                       {"bound", c.bound},
                       {"pass", c.pass},
                       {"vacuous", c.vacuous}});
    return out;
}

ojson report_json(const PipelineState& s, const std::vector<Check>& checks) {
    ojson j;
    j["vertices"] = s.mesh.num_vertices();
    j["edges"] = s.mesh.num_edges();
    j["faces"] = s.mesh.num_faces();
    j["genus"] = s.genus;
    j["homology_loops"] = s.homology.loops.size();
    j["cut_edges"] = s.cut.size();
    j["zero_count"] = s.zeros.size();
    j["zeros"] = ojson::array();
    for (const ZeroPoint& z : s.zeros) j["zeros"].push_back(z.vertex);
    j["handles"] = s.covering.atlas.handles.size();
    j["covering_attempts"] = s.covering.attempts;
    j["covering_coefficients"] = vector_json(s.covering.coefficients);
    j["checks"] = checks_json(checks);
    bool pass = true;
    for (const Check& c : checks) pass &= c.pass;
    j["pass"] = pass;
    return j;
}

ojson forms_json(const PipelineState& s) {
    ojson j;
    j["edges"] = ojson::array();
    for (int e = 0; e < s.mesh.num_edges(); ++e) {
        const auto [a, b] = s.mesh.edge_vertices(e);
        j["edges"].push_back(ojson::array({a, b}));
    }
    j["cohomology"] = ojson::array();
    for (const OneForm& w : s.cohomology) j["cohomology"].push_back(vector_json(w));
    j["harmonic"] = ojson::array();
    for (const OneForm& w : s.hodge.harmonic) j["harmonic"].push_back(vector_json(w));
    return j;
}

std::vector<OneForm> cohomology_from_json(const nlohmann::json& j, const TriMesh& mesh) {
    try {
        const auto& edges = j.at("edges");
        if (static_cast<int>(edges.size()) != mesh.num_edges())
            throw Error(ErrorKind::InvalidArgument, "forms file has a different edge count than the mesh");
        for (int e = 0; e < mesh.num_edges(); ++e) {
            const auto [a, b] = mesh.edge_vertices(e);
            if (edges[e][0].get<int>() != a || edges[e][1].get<int>() != b)
                throw Error(ErrorKind::InvalidArgument, "forms file edge " + std::to_string(e) + " does not match the mesh");
        }
        std::vector<OneForm> out;
        for (const auto& w : j.at("cohomology")) {
            if (static_cast<int>(w.size()) != mesh.num_edges())
                throw Error(ErrorKind::InvalidArgument, "form with the wrong number of edge values");
            OneForm f(mesh.num_edges());
            for (int e = 0; e < mesh.num_edges(); ++e) f[e] = w[e].get<double>();
            out.push_back(f);
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("forms file: ") + e.what());
    }
}

void write_path_csv(std::ostream& out, const DiscretePath& path) {
    out << "hop,vertex,bridge\n";
    for (std::size_t i = 0; i < path.vertices.size(); ++i)
        out << i << ',' << path.vertices[i] << ',' << (i > 0 && path.bridge[i - 1] ? 1 : 0) << '\n';
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

} // namespace sfc
