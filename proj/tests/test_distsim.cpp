#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "sfc/distsim.hpp"
#include "sfc/error.hpp"
#include "sfc/pipeline.hpp"

using namespace sfc;

namespace {

CommGraph cycle(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    return make_graph(n, edges);
}

// Largest spread of (a - b) over entries: zero when a and b differ by a constant.
double offset_spread(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const cplx shift = a[0] - b[0];
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i] - shift));
    return worst;
}

const PipelineState& genus2() {
    static const PipelineState s = run_pipeline(generate_genus_g(2, 16), 7);
    return s;
}

} // namespace

TEST_CASE("flood on a cycle meets opposite the seed") {
    const FloodLocus c6 = flood_cut_locus(cycle(6), 0);
    CHECK(c6.meeting == std::vector<std::pair<int, int>>{{3, 4}});
    CHECK(c6.hop == std::vector<int>{0, 1, 2, 3, 2, 1});
    CHECK(c6.branch[3] == 1);
    CHECK(c6.branch[4] == 5);
    // Round r: the nodes reached in round r - 1 talk to all their neighbours.
    CHECK(c6.transcript.messages == std::vector<long>{2, 4, 4, 2});

    const FloodLocus c7 = flood_cut_locus(cycle(7), 2);
    CHECK(c7.meeting == std::vector<std::pair<int, int>>{{5, 6}});
}

TEST_CASE("fronts never meet on a tree") {
    std::mt19937 rng(5);
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < 40; ++v) edges.push_back({static_cast<int>(rng() % v), v});
    const CommGraph tree = make_graph(40, edges);
    for (int seed : {0, 17, 39}) CHECK(flood_cut_locus(tree, seed).meeting.empty());

    try {
        flood_cut_locus(make_graph(4, {{0, 1}, {2, 3}}), 0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DisconnectedGraph);
    }
}

TEST_CASE("messages only cross graph edges") {
    const CommGraph g = cycle(5);
    Network net(g, "probe");
    net.send(0, 1);
    net.send(4, 0);
    CHECK_THROWS_AS(net.send(0, 2), Error);
    CHECK_THROWS_AS(net.send(0, 0), Error);
    net.end_round();
    CHECK(net.transcript().messages == std::vector<long>{2});
}

TEST_CASE("mesh cut locus slices to a disk") {
    for (const TriMesh& mesh : {generate_torus_grid(10, 8), generate_genus_g(2, 16), generate_genus_g(3, 16)}) {
        const int g = genus(mesh);
        for (int seed : {0, mesh.num_vertices() / 3}) {
            Transcript t;
            const CutGraph cut = flood_cut_locus(mesh, seed, &t);
            CHECK(sliced_euler_characteristic(mesh, cut) == 1);
            CHECK(sliced_components(mesh, cut) == 1);
            CHECK(cut.size() > 0);
            for (int v = 0; v < mesh.num_vertices(); ++v) CHECK(cut.degree(v) != 1);
            // Rank of the locus as a graph: 2g independent cycles.
            int touched = 0;
            for (int v = 0; v < mesh.num_vertices(); ++v) touched += cut.degree(v) > 0;
            CHECK(cut.size() - touched + 1 == 2 * g);

            // The locus sits far from the seed.
            const std::vector<int> hop = bfs_distances(mesh_graph(mesh), {seed});
            double all = 0, locus = 0;
            for (int v = 0; v < mesh.num_vertices(); ++v) {
                all += hop[v];
                if (cut.degree(v) > 0) locus += hop[v];
            }
            CHECK(locus / touched > all / mesh.num_vertices());

            CHECK(t.total() == mesh.num_faces() - 1);
            Transcript again;
            CHECK(flood_cut_locus(mesh, seed, &again).edges == cut.edges);
            CHECK(again.messages == t.messages);
        }
    }
}

TEST_CASE("diffusion of an exact form dies out") {
    const TriMesh mesh = generate_torus_grid(8, 6);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    VertexFunction f(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) f[v] = u(rng);
    const Diffusion d = diffuse_harmonic(mesh, cotan_weights(mesh), d0(mesh, f));
    CHECK(d.form.cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(d.residual <= 1e-12);
    CHECK(d.transcript.messages.size() == static_cast<std::size_t>(d.rounds));
    CHECK(d.transcript.messages[0] == 2L * mesh.num_edges());
}

TEST_CASE("diffusion matches the direct harmonic solve") {
    const TriMesh torus = generate_torus_grid(12, 8);
    const CutGraph cut = cut_graph(torus, dual_spanning_tree(torus));
    const std::vector<OneForm> basis = cohomology_basis(torus, homology_basis(torus, cut), 7);
    const Eigen::VectorXd w = cotan_weights(torus);
    for (const OneForm& b : basis) {
        const Diffusion d = diffuse_harmonic(torus, w, b);
        CHECK((d.form - harmonize(torus, w, b)).cwiseAbs().maxCoeff() <= 1e-6);
    }

    const PipelineState& s = genus2();
    for (std::size_t i = 0; i < s.cohomology.size(); ++i) {
        const Diffusion d = diffuse_harmonic(s.mesh, s.hodge.weights, s.cohomology[i]);
        CHECK((d.form - s.hodge.harmonic[i]).cwiseAbs().maxCoeff() <= 1e-6);
        CHECK(divergence(s.mesh, s.hodge.weights, d.form).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("diffusion with a near-zero weight row is reported") {
    const TriMesh mesh = generate_torus_grid(8, 6);
    Eigen::VectorXd w = cotan_weights(mesh);
    std::vector<int> at0;
    for (int e = 0; e < mesh.num_edges(); ++e)
        if (mesh.edge_vertices(e)[0] == 0 || mesh.edge_vertices(e)[1] == 0) at0.push_back(e);
    double rest = 0;
    for (std::size_t k = 1; k < at0.size(); ++k) rest += w[at0[k]];
    w[at0[0]] = -rest + 1e-14;
    const CutGraph cut = cut_graph(mesh, dual_spanning_tree(mesh));
    const OneForm b = cohomology_basis(mesh, homology_basis(mesh, cut), 7)[0];
    try {
        diffuse_harmonic(mesh, w, b, 1e-12, 2000);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonConvergence);
        CHECK(std::string(e.what()).find("residual") != std::string::npos);
    }
}

TEST_CASE("flooded integration") {
    const PipelineState& s = genus2();
    const ComplexForm omega = s.covering.omega;
    const CutGraph& cut = s.cut;

    const FloodChart zero = flood_integrate(s.mesh, cut, {OneForm::Zero(s.mesh.num_edges()), OneForm::Zero(s.mesh.num_edges())}, 3);
    CHECK(std::all_of(zero.value.begin(), zero.value.end(), [](cplx z) { return z == cplx(0, 0); }));

    const FlatChart central = integrate(s.mesh, cut, omega, 0);
    const FloodChart a = flood_integrate(s.mesh, cut, omega, 0), b = flood_integrate(s.mesh, cut, omega, 77);
    REQUIRE(a.value.size() == central.value.size());
    CHECK(offset_spread(a.value, central.value) <= 1e-8);
    CHECK(offset_spread(b.value, central.value) <= 1e-8);
    CHECK(std::abs(b.value[b.wedges.first[77]]) == 0.0);

    // On the flooded locus as well.
    const CutGraph locus = flood_cut_locus(s.mesh, 5);
    CHECK(offset_spread(flood_integrate(s.mesh, locus, omega, 5).value, integrate(s.mesh, locus, omega, 0).value) <= 1e-8);
}
