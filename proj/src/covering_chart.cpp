#include <cmath>
#include <numbers>
#include <queue>

#include "sfc/covering.hpp"
#include "sfc/error.hpp"

namespace sfc {

FlatChart integrate(const TriMesh& mesh, const CutGraph& cut, const ComplexForm& omega, int base) {
    if (base < 0 || base >= mesh.num_vertices()) throw Error(ErrorKind::InvalidArgument, "base vertex out of range");
    FlatChart chart;
    chart.wedges = slice_wedges(mesh, cut);
    const Wedges& w = chart.wedges;

    // Wedge graph of the sliced disk: every face side, cut or not, joins two wedges.
    std::vector<std::vector<std::pair<int, int>>> adj(w.count());
    for (int h = 0; h < mesh.num_halfedges(); ++h) {
        const int a = w.of_corner[h], b = w.of_corner[TriMesh::he_next(h)];
        adj[a].emplace_back(b, h);
    }

    chart.value.assign(w.count(), cplx(0, 0));
    std::vector<char> seen(w.count(), 0);
    const int root = w.first[base];
    std::queue<int> queue;
    queue.push(root);
    seen[root] = 1;
    while (!queue.empty()) {
        const int a = queue.front();
        queue.pop();
        for (auto [b, h] : adj[a]) {
            if (seen[b]) continue;
            seen[b] = 1;
            chart.value[b] = chart.value[a] + omega.on(mesh, h);
            queue.push(b);
        }
    }
    for (int i = 0; i < w.count(); ++i)
        if (!seen[i]) throw Error(ErrorKind::SliceFailure, "sliced mesh is not connected");

    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const cplx& z : chart.value) {
        lo_x = std::min(lo_x, z.real());
        hi_x = std::max(hi_x, z.real());
        lo_y = std::min(lo_y, z.imag());
        hi_y = std::max(hi_y, z.imag());
    }
    chart.diameter = std::hypot(hi_x - lo_x, hi_y - lo_y);

    // Every face side, tree or not, must agree with the form.
    for (int a = 0; a < w.count(); ++a)
        for (auto [b, h] : adj[a])
            chart.closure_residual =
                std::max(chart.closure_residual, std::abs(chart.value[b] - chart.value[a] - omega.on(mesh, h)));
    if (chart.closure_residual > 1e-8 * std::max(chart.diameter, 1e-300))
        throw Error(ErrorKind::PathDependence, "integration closure residual " + std::to_string(chart.closure_residual));
    return chart;
}

double flat_diameter(const TriMesh& mesh, const ComplexForm& omega) {
    const DualTree tree = dual_spanning_tree(mesh);
    return integrate(mesh, cut_graph(mesh, tree), omega).diameter;
}

int vertex_winding(const TriMesh& mesh, const ComplexForm& omega, int v) {
    const std::vector<int> ring = mesh.outgoing(v);
    double turn = 0.0;
    const int d = static_cast<int>(ring.size());
    for (int j = 0; j < d; ++j) turn += std::arg(omega.on(mesh, ring[(j + 1) % d]) / omega.on(mesh, ring[j]));
    return static_cast<int>(std::lround(turn / (2 * std::numbers::pi)));
}

namespace {

double ring_density(const TriMesh& mesh, const ComplexForm& omega, int v) {
    double flat = 0, length = 0;
    for (int h : mesh.outgoing(v)) {
        flat += std::abs(omega.on(mesh, h));
        length += mesh.edge_length(mesh.he_edge(h));
    }
    return flat / length;
}

// Side of the level through the ring centre; exact ties fall to the higher vertex index.
int level_side(const TriMesh& mesh, const ComplexForm& omega, int h) {
    const double im = form_on(mesh, omega.im, h);
    if (im != 0) return im > 0 ? 1 : -1;
    return mesh.he_target(h) > mesh.he_source(h) ? 1 : -1;
}

} // namespace

std::vector<Prong> prongs_at(const TriMesh& mesh, const ComplexForm& omega, int v) {
    const std::vector<int> ring = mesh.outgoing(v);
    const int d = static_cast<int>(ring.size());
    std::vector<Prong> out;
    for (int j = 0; j < d; ++j) {
        const int s0 = level_side(mesh, omega, ring[j]);
        const int s1 = level_side(mesh, omega, ring[(j + 1) % d]);
        // Counter-clockwise is the left of a ray; a ray heading right has the upper side on its left.
        if (s0 != s1) out.push_back({j, s0 < 0});
    }
    return out;
}

std::vector<ZeroPoint> find_zeros(const TriMesh& mesh, const ComplexForm& omega) {
    const int g = genus(mesh);
    if (g < 2) return {};

    const int nv = mesh.num_vertices();
    std::vector<int> winding(nv);
    std::vector<int> candidates;
    int anomalous = 0;
    for (int v = 0; v < nv; ++v) {
        winding[v] = vertex_winding(mesh, omega, v);
        if (winding[v] == 2) candidates.push_back(v);
        else if (winding[v] != 1) ++anomalous;
    }
    if (anomalous)
        throw Error(ErrorKind::WrongZeroCount, std::to_string(anomalous) + " vertices have a winding other than 1 or 2");

    // Adjacent candidates describe one zero sitting between vertices.
    std::vector<int> group(nv, -1);
    std::vector<std::vector<int>> groups;
    for (int c : candidates) {
        if (group[c] >= 0) continue;
        std::vector<int> members{c};
        group[c] = static_cast<int>(groups.size());
        for (std::size_t i = 0; i < members.size(); ++i)
            for (int h : mesh.outgoing(members[i])) {
                const int u = mesh.he_target(h);
                if (winding[u] == 2 && group[u] < 0) {
                    group[u] = group[c];
                    members.push_back(u);
                }
            }
        groups.push_back(std::move(members));
    }

    std::vector<ZeroPoint> zeros;
    for (const auto& members : groups) {
        ZeroPoint best;
        bool best_saddle = false;
        for (int v : members) {
            const double density = ring_density(mesh, omega, v);
            const bool saddle = prongs_at(mesh, omega, v).size() == 4;
            if (best.vertex < 0 || (saddle && !best_saddle) ||
                (saddle == best_saddle && density < best.density)) {
                best = {v, 2, density};
                best_saddle = saddle;
            }
        }
        zeros.push_back(best);
    }
    if (static_cast<int>(zeros.size()) != 2 * g - 2)
        throw Error(ErrorKind::WrongZeroCount,
                    "found " + std::to_string(zeros.size()) + " zeros, expected " + std::to_string(2 * g - 2));
    for (const ZeroPoint& z : zeros) {
        const std::size_t n = prongs_at(mesh, omega, z.vertex).size();
        if (n != 4)
            throw Error(ErrorKind::WrongZeroCount,
                        "zero at vertex " + std::to_string(z.vertex) + " has " + std::to_string(n) + " horizontal prongs");
    }
    return zeros;
}

ComplexForm rotated_form(const HodgeBasis& basis, const Eigen::VectorXd& coeffs) {
    // i (eta + i conj eta) = -conj eta + i eta: Im phi has the integer periods of eta.
    ComplexForm omega;
    omega.im = basis.combine(coeffs);
    omega.re = -basis.combine(basis.conjugation * coeffs);
    return omega;
}

} // namespace sfc
