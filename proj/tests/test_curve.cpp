#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "sfc/curve.hpp"
#include "sfc/error.hpp"

using namespace sfc;

namespace {

// dx + i dy on the n x m flat torus, from the grid indices.
ComplexForm grid_form(const TriMesh& mesh, int n, int m) {
    ComplexForm w{OneForm::Zero(mesh.num_edges()), OneForm::Zero(mesh.num_edges())};
    auto wrap = [](int d, int p) { return d > p / 2 ? d - p : d < -p / 2 ? d + p : d; };
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto [a, b] = mesh.edge_vertices(e);
        w.re[e] = wrap(b / m - a / m, n) / static_cast<double>(n);
        w.im[e] = wrap(b % m - a % m, m) / static_cast<double>(m);
    }
    return w;
}

struct FlatTorus {
    int n, m;
    TriMesh mesh;
    ComplexForm form;
    CoveringAtlas atlas;
    FlatTorus(int n_, int m_)
        : n(n_), m(m_), mesh(generate_flat_torus(n_, m_)), form(grid_form(mesh, n_, m_)), atlas(torus_atlas(mesh, form)) {}
    cplx grid(int v) const { return {v / m / double(n), v % m / double(m)}; }
};

struct Genus2 {
    TriMesh mesh;
    CoveringResult cov;
    explicit Genus2(int res) : mesh(generate_genus_g(2, res)) {
        CutGraph cut = cut_graph(mesh, dual_spanning_tree(mesh));
        HodgeBasis hb = hodge_basis(mesh, cohomology_basis(mesh, homology_basis(mesh, cut), 7));
        cov = build_covering(mesh, cut, hb, 7);
    }
    double perimeter() const {
        double p = 0;
        for (const auto& h : cov.atlas.handles) p = std::max(p, h.perimeter());
        return p;
    }
};

double frac(double x) { return x - std::floor(x); }

// Crossings of the unrolled line (x0 + u, y0 + k u) with x = 1/2 mod 1, and their
// smallest circular spacing.
double weyl_min_gap(cplx p0, double k, double length) {
    const double umax = length / std::hypot(1.0, k);
    std::vector<double> ys;
    for (double x = 0.5 + std::ceil(p0.real() - 0.5); x - p0.real() <= umax; x += 1.0)
        ys.push_back(frac(p0.imag() + k * (x - p0.real())));
    std::sort(ys.begin(), ys.end());
    double gap = 1 - ys.back() + ys.front();
    for (std::size_t i = 1; i < ys.size(); ++i) gap = std::min(gap, ys[i] - ys[i - 1]);
    return gap;
}

double mod1_distance(cplx a, cplx b) {
    const cplx d = a - b;
    return std::hypot(d.real() - std::round(d.real()), d.imag() - std::round(d.imag()));
}

} // namespace

TEST_CASE("dense line on the unit torus: crossings match the rotation-by-k oracle") {
    FlatTorus t(8, 8);
    const cplx p0(0.1, 0.2);
    const DenseCurve c = trace_dense(t.atlas, kDefaultSlope, 0, p0, 100);
    double total = 0;
    for (const auto& s : c.segments) total += s.length();
    CHECK(total == doctest::Approx(100).epsilon(1e-12));
    const double gap = aperiodicity(c, t.atlas);
    CHECK(gap > 1e-6);
    CHECK(gap == doctest::Approx(weyl_min_gap(p0, kDefaultSlope, 100)).epsilon(1e-9));

    // Segments stay inside the unit square and continue each other modulo the lattice.
    for (std::size_t i = 0; i < c.segments.size(); ++i) {
        for (cplx z : {c.segments[i].start, c.segments[i].end}) {
            CHECK(z.real() >= -1e-12);
            CHECK(z.real() <= 1 + 1e-12);
            CHECK(z.imag() >= -1e-12);
            CHECK(z.imag() <= 1 + 1e-12);
        }
        if (i > 0) CHECK(mod1_distance(c.segments[i - 1].end, c.segments[i].start) <= 1e-12);
    }
}

TEST_CASE("rational slope closes up") {
    FlatTorus t(8, 8);
    const DenseCurve c = trace_dense(t.atlas, 1.0, 0, cplx(0.1, 0.2), 50);
    CHECK(aperiodicity(c, t.atlas) <= 1e-9);
    CHECK(weyl_min_gap(cplx(0.1, 0.2), 1.0, 50) <= 1e-9);
}

TEST_CASE("density profile on the unit torus") {
    FlatTorus t(8, 8);
    const DenseCurve c = trace_dense(t.atlas, kDefaultSlope, 0, cplx(0.1, 0.2), 10);
    const auto profile = density_profile(c, t.atlas, 20, 4);
    REQUIRE(profile.size() == 5);
    CHECK(profile.front().prefix == 0);
    CHECK(profile.back().prefix == doctest::Approx(10));
    CHECK(profile.back().max_gap <= 0.5);
    for (std::size_t i = 1; i < profile.size(); ++i) CHECK(profile[i].max_gap <= profile[i - 1].max_gap);

    const DenseCurve longer = trace_dense(t.atlas, kDefaultSlope, 0, cplx(0.1, 0.2), 400);
    const auto p = density_profile(longer, t.atlas, 20, 5);
    double ratio = 0;
    for (std::size_t i = 2; i < p.size(); ++i) ratio += p[i].max_gap / p[i - 1].max_gap;
    CHECK(ratio / (p.size() - 2) <= 0.75);
}

TEST_CASE("invalid trace arguments") {
    FlatTorus t(4, 4);
    CHECK_THROWS_AS(trace_dense(t.atlas, 1.0, 0, cplx(0, 0), 0), Error);
    CHECK_THROWS_AS(trace_dense(t.atlas, 1.0, 3, cplx(0, 0), 1), Error);
    CHECK_THROWS_AS(density_profile(DenseCurve{}, t.atlas, 0), Error);
}

TEST_CASE("genus 2: the dense line crosses slits into both handles") {
    Genus2 s(16);
    const auto [h, p] = default_start(s.cov.atlas, s.mesh, kDefaultSlope, 0);
    const double k = choose_slope(s.cov.atlas, h, p, 7);
    const DenseCurve c = trace_dense(s.cov.atlas, k, h, p, 50 * s.perimeter());
    CHECK(c.slit_crossings > 0);
    std::set<int> seen;
    for (const auto& seg : c.segments) seen.insert(seg.handle);
    CHECK(seen.size() == 2);
    CHECK(c.closest_endpoint > hit_tolerance(s.cov.atlas.handles[0]));

    // Each slit crossing changes handle.
    int changes = 0;
    for (std::size_t i = 1; i < c.segments.size(); ++i) changes += c.segments[i].handle != c.segments[i - 1].handle;
    CHECK(changes == c.slit_crossings);

    const auto profile = density_profile(c, s.cov.atlas, 16);
    for (std::size_t i = 1; i < profile.size(); ++i) CHECK(profile[i].max_gap <= profile[i - 1].max_gap);
}

TEST_CASE("a slope aimed at a slit endpoint is perturbed") {
    Genus2 s(16);
    const Handle& handle = s.cov.atlas.handles[0];
    REQUIRE(!handle.slits.empty());
    const double k = 0.5;
    const cplx d = cplx(1, k) / std::abs(cplx(1, k));
    const cplx start = handle.to_fundamental(handle.slits[0].start - 0.05 * d);
    CHECK_THROWS_AS(trace_dense(s.cov.atlas, k, 0, start, 1.0), Error);
    try {
        trace_dense(s.cov.atlas, k, 0, start, 1.0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EndpointHit);
    }
    const double chosen = choose_slope(s.cov.atlas, 0, start, 7, k);
    CHECK(chosen != k);
    CHECK(chosen > k);
    CHECK(chosen < k + 1e-3);
    CHECK(chosen == choose_slope(s.cov.atlas, 0, start, 7, k));
}

TEST_CASE("pullback on the flat torus follows the line exactly") {
    FlatTorus t(10, 10);
    const cplx p0(0.13, 0.27);
    const DenseCurve c = trace_dense(t.atlas, kDefaultSlope, 0, p0, 20);
    const SurfaceCurve sc = pullback(c, t.atlas, t.mesh);
    CHECK(sc.resync_error <= 1e-12);
    REQUIRE(!sc.pieces.empty());
    CHECK(sc.pieces.front().s0 == 0);
    CHECK(sc.pieces.back().s1 == doctest::Approx(20));
    for (std::size_t i = 0; i < sc.pieces.size(); ++i) {
        const SurfacePiece& piece = sc.pieces[i];
        if (i > 0) CHECK(piece.s0 == sc.pieces[i - 1].s1);
        CHECK(piece.a.minCoeff() >= -1e-9);
        CHECK(piece.b.minCoeff() >= -1e-9);
        // Walk point, anchored at the face's first vertex, sits on the line mod 1.
        const Face& f = t.mesh.face(piece.face);
        const cplx at = p0 + piece.s0 * c.direction;
        const cplx walk = piece.a[0] * piece.corners[0] + piece.a[1] * piece.corners[1] + piece.a[2] * piece.corners[2];
        CHECK(std::abs(walk - (sc.origin + piece.s0 * sc.direction)) <= 1e-9);
        CHECK(mod1_distance(walk - piece.corners[0] + t.grid(f[0]), at) <= 1e-9);
    }
}

TEST_CASE("pullback on genus 2 agrees with the flat trace") {
    Genus2 s(32);
    const auto [h, p] = default_start(s.cov.atlas, s.mesh, kDefaultSlope, 0);
    const DenseCurve c = trace_dense(s.cov.atlas, choose_slope(s.cov.atlas, h, p, 7), h, p, 20 * s.perimeter());
    const SurfaceCurve sc = pullback(c, s.cov.atlas, s.mesh);
    CHECK(sc.resync_error <= 1e-9 * s.cov.atlas.handles[0].diagonal());
    double total = 0;
    for (const auto& piece : sc.pieces) total += piece.s1 - piece.s0;
    CHECK(total == doctest::Approx(c.length).epsilon(1e-12));
    // Consecutive pieces share an edge, or a vertex where the line passes through it.
    int through_vertex = 0;
    for (std::size_t i = 1; i < sc.pieces.size(); ++i) {
        const int f = sc.pieces[i - 1].face, g = sc.pieces[i].face;
        bool adjacent = false;
        for (int j = 0; j < 3; ++j) adjacent |= TriMesh::he_face(s.mesh.he_twin(3 * f + j)) == g;
        if (!adjacent) {
            ++through_vertex;
            int shared = 0;
            for (int a : s.mesh.face(f))
                for (int b : s.mesh.face(g)) shared += a == b;
            CHECK(shared == 1);
        }
    }
    CHECK(through_vertex * 100 < static_cast<int>(sc.pieces.size()));
}

TEST_CASE("belt wider than the surface visits every vertex") {
    Genus2 s(16);
    const auto [h, p] = default_start(s.cov.atlas, s.mesh, kDefaultSlope, 0);
    const DenseCurve c = trace_dense(s.cov.atlas, choose_slope(s.cov.atlas, h, p, 7), h, p, s.perimeter());
    const SurfaceCurve sc = pullback(c, s.cov.atlas, s.mesh);
    const DiscretePath path = discretize(sc, s.mesh, mesh_graph(s.mesh), 10 * s.cov.chart.diameter, 0);
    CHECK(static_cast<int>(path.belt.size()) == s.mesh.num_vertices());
    CHECK(std::set<int>(path.vertices.begin(), path.vertices.end()).size() == path.belt.size());
    CHECK(path.vertices.front() == 0);
}

TEST_CASE("line along a grid row") {
    // 12 x 6 grid: row neighbours are one edge (1/12) apart, rows two edges (1/6) apart.
    FlatTorus t(12, 6);
    const DenseCurve c = trace_dense(t.atlas, 0.0, 0, cplx(0, 0), 1.0); // vertex 0 sits at the origin
    const SurfaceCurve sc = pullback(c, t.atlas, t.mesh);
    const CommGraph graph = mesh_graph(t.mesh);
    std::vector<int> row;
    for (int i = 0; i < t.n; ++i) row.push_back(i * t.m);

    const DiscretePath path = discretize(sc, t.mesh, graph, 1.0 / t.n, 0);
    std::vector<int> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    CHECK(path.belt == sorted);
    // First visits run along the row. The vertex one edge behind the start is
    // also within delta of the curve's beginning, so it may be picked up first.
    std::vector<int> first;
    for (int v : path.vertices)
        if (std::find(first.begin(), first.end(), v) == first.end()) first.push_back(v);
    REQUIRE(first.size() == row.size());
    CHECK(first[0] == 0);
    const int behind = row.back();
    CHECK((first[1] == behind || first.back() == behind));
    first.erase(std::find(first.begin(), first.end(), behind));
    row.pop_back();
    CHECK(first == row);
    CHECK(path.hops() <= t.n + 1);

    // Two and a half edges: the neighbouring rows join the belt.
    const DiscretePath wide = discretize(sc, t.mesh, graph, 2.5 / t.n, 0);
    CHECK(wide.belt.size() == static_cast<std::size_t>(3 * t.n));
    CHECK(std::set<int>(wide.vertices.begin(), wide.vertices.end()).size() == wide.belt.size());
}

TEST_CASE("start outside the belt") {
    FlatTorus t(12, 6);
    const DenseCurve c = trace_dense(t.atlas, 0.0, 0, cplx(0, 0), 1.0);
    const SurfaceCurve sc = pullback(c, t.atlas, t.mesh);
    try {
        discretize(sc, t.mesh, mesh_graph(t.mesh), 0.5 / t.n, 3);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyBelt);
    }
}

TEST_CASE("default belt on genus 2") {
    Genus2 s(32);
    const auto [h, p] = default_start(s.cov.atlas, s.mesh, kDefaultSlope, 0);
    const DenseCurve c = trace_dense(s.cov.atlas, choose_slope(s.cov.atlas, h, p, 7), h, p, 50 * s.perimeter());
    const SurfaceCurve sc = pullback(c, s.cov.atlas, s.mesh);
    const double delta = 2 * average_flat_edge(s.mesh, s.cov.omega);
    const DiscretePath path = discretize(sc, s.mesh, mesh_graph(s.mesh), delta, 0);
    const CommGraph graph = mesh_graph(s.mesh);

    for (std::size_t i = 1; i < path.vertices.size(); ++i) CHECK(graph.has_edge(path.vertices[i - 1], path.vertices[i]));
    CHECK(path.bridge.size() == static_cast<std::size_t>(path.hops()));

    // Up to 99 % of the belt: bridges as a share of path steps.
    std::vector<char> seen(s.mesh.num_vertices(), 0);
    std::size_t count = 0, steps = 0, bridges = 0;
    seen[path.vertices[0]] = 1;
    count = 1;
    for (int i = 0; i < path.hops() && count < 0.99 * path.belt.size(); ++i) {
        if (!path.bridge[i]) ++steps;
        else if (i == 0 || !path.bridge[i - 1]) ++steps, ++bridges;
        const int v = path.vertices[i + 1];
        if (!seen[v]) seen[v] = 1, ++count;
    }
    CHECK(count >= 0.99 * path.belt.size());
    CHECK(static_cast<double>(bridges) / steps <= 0.10);

    std::vector<int> visits(s.mesh.num_vertices(), 0);
    for (int v : path.vertices) ++visits[v];
    CHECK(*std::max_element(visits.begin(), visits.end()) <= 6);
}
