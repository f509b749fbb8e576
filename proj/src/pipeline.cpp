#include <algorithm>
#include <cmath>

#include "sfc/pipeline.hpp"

namespace sfc {

void run_stage(const std::string& stage, const std::string& hint, const std::function<void()>& body) {
    try {
        body();
    } catch (const Error& e) {
        throw Error(e.kind(), "stage=" + stage + ": " + e.message() + " (hint: " + hint + ")");
    }
}

PipelineState run_pipeline(TriMesh mesh, std::uint64_t seed, int max_attempts) {
    PipelineState s;
    s.mesh = std::move(mesh);
    run_stage("topology", "the mesh must be a closed connected surface of genus >= 1", [&] {
        s.genus = genus(s.mesh);
        if (s.genus < 1) throw Error(ErrorKind::GenusZero, "a sphere has no homology to work with");
        s.tree = dual_spanning_tree(s.mesh);
        s.cut = cut_graph(s.mesh, s.tree);
        s.homology = homology_basis(s.mesh, s.cut);
    });
    run_stage("forms", "try another seed", [&] { s.cohomology = cohomology_basis(s.mesh, s.homology, seed); });
    run_stage("hodge", "check for degenerate or badly shaped triangles",
              [&] { s.hodge = hodge_basis(s.mesh, s.cohomology); });
    run_stage("covering", "refine the mesh or raise the attempt limit", [&] {
        s.covering = build_covering(s.mesh, s.cut, s.hodge, seed, max_attempts);
        s.zeros = s.genus >= 2 ? find_zeros(s.mesh, s.covering.omega) : std::vector<ZeroPoint>{};
    });
    return s;
}

namespace {

Check make_check(std::string name, double value, std::string relation, double bound, bool vacuous = false) {
    Check c{std::move(name), value, bound, relation, false, vacuous};
    if (relation == "<=") c.pass = value <= bound;
    else if (relation == ">") c.pass = value > bound;
    else c.pass = value == bound;
    return c;
}

double slit_mismatch(const CoveringAtlas& atlas) {
    double worst = 0;
    for (const Handle& h : atlas.handles)
        for (const Slit& slit : h.slits)
            for (int side = 0; side < 2; ++side)
                for (const GluePiece& p : side ? slit.bottom : slit.top) {
                    const Slit& other = atlas.handles.at(p.partner_handle).slits.at(p.partner_slit);
                    double best = 1e300;
                    for (const GluePiece& q : p.partner_top ? other.top : other.bottom)
                        if (q.segment == p.segment) best = std::abs((q.to - q.from) - (p.to - p.from));
                    worst = std::max(worst, best);
                }
    return worst;
}

} // namespace

std::vector<Check> check_invariants(const PipelineState& s) {
    const int g = s.genus;
    std::vector<Check> out;
    out.push_back(make_check("homology_loops", static_cast<double>(s.homology.loops.size()), "==", 2.0 * g));
    out.push_back(make_check("cut_complement_euler", sliced_euler_characteristic(s.mesh, s.cut), "==", 1));
    out.push_back(make_check("zero_count", static_cast<double>(s.zeros.size()), "==", 2.0 * g - 2, g == 1));
    out.push_back(
        make_check("handle_components", static_cast<double>(s.covering.atlas.handles.size()), "==", g));

    double d1max = 0;
    for (const OneForm& w : s.cohomology) d1max = std::max(d1max, max_abs(d1(s.mesh, w)));
    out.push_back(make_check("cohomology_d1", d1max, "<=", 1e-12));

    double div = 0;
    for (const OneForm& h : s.hodge.harmonic)
        div = std::max(div, divergence(s.mesh, s.hodge.weights, h).cwiseAbs().maxCoeff());
    out.push_back(make_check("harmonic_divergence", div, "<=", 1e-8));

    const Eigen::MatrixXd before = periods(s.mesh, s.cohomology, s.homology);
    const Eigen::MatrixXd after = periods(s.mesh, s.hodge.harmonic, s.homology);
    out.push_back(make_check("period_preservation", (before - after).cwiseAbs().maxCoeff(), "<=", 1e-9));

    out.push_back(make_check("integration_closure", s.covering.chart.closure_residual, "<=", 1e-8));

    bool any_slit = false;
    for (const Handle& h : s.covering.atlas.handles) any_slit |= !h.slits.empty();
    out.push_back(make_check("slit_length_mismatch", slit_mismatch(s.covering.atlas), "<=", 1e-6, !any_slit));

    double energy = 1e300;
    for (const HolomorphicForm& f : s.hodge.forms) energy = std::min(energy, wedge_integral(s.mesh, f.omega, f.conj));
    out.push_back(make_check("conjugate_energy", energy, ">", 0));
    return out;
}

DenseRun dense_path(const TriMesh& mesh, const CoveringResult& covering, const CommGraph& graph,
                    const DenseOptions& options, std::uint64_t seed) {
    const CoveringAtlas& atlas = covering.atlas;
    DenseRun run;
    run.delta = options.delta > 0 ? options.delta : 2 * average_flat_edge(mesh, covering.omega);
    auto [handle, point] = default_start(atlas, mesh, options.slope, options.start);
    run.start_handle = handle;
    run.slope = choose_slope(atlas, handle, point, seed, options.slope);
    if (run.slope != options.slope) std::tie(handle, point) = default_start(atlas, mesh, run.slope, options.start);

    double perimeter = 0;
    for (const Handle& h : atlas.handles) perimeter = std::max(perimeter, h.perimeter());
    double length = options.length > 0 ? options.length : 50 * perimeter;
    for (int round = 0;; ++round) {
        run.length = length;
        run.curve = trace_dense(atlas, run.slope, handle, point, length);
        run.surface = pullback(run.curve, atlas, mesh);
        run.path = discretize(run.surface, mesh, graph, run.delta, options.start);
        if (options.length > 0 || static_cast<int>(run.path.belt.size()) == mesh.num_vertices() || round == 6) break;
        length *= 2;
    }
    return run;
}

} // namespace sfc
