#include <algorithm>
#include <cmath>
#include <ostream>

#include "sfc/distsim.hpp"
#include "sfc/error.hpp"

namespace sfc {

long Transcript::total() const {
    long sum = 0;
    for (long m : messages) sum += m;
    return sum;
}

void write_transcript_csv(std::ostream& out, const std::vector<Transcript>& transcripts) {
    out << "protocol,round,messages\n";
    for (const Transcript& t : transcripts)
        for (std::size_t r = 0; r < t.messages.size(); ++r) out << t.protocol << ',' << r << ',' << t.messages[r] << '\n';
}

Network::Network(const CommGraph& graph, std::string protocol) : graph_(&graph) {
    transcript_.protocol = std::move(protocol);
}

void Network::send(int from, int to) {
    if (from < 0 || from >= graph_->size() || !graph_->has_edge(from, to))
        throw Error(ErrorKind::InvalidArgument, "message between non-adjacent nodes " + std::to_string(from) + " and " +
                                                    std::to_string(to));
    ++pending_;
}

void Network::end_round() {
    transcript_.messages.push_back(pending_);
    pending_ = 0;
}

FloodLocus flood_cut_locus(const CommGraph& graph, int seed) {
    const int n = graph.size();
    if (seed < 0 || seed >= n) throw Error(ErrorKind::InvalidArgument, "seed node out of range");
    FloodLocus out;
    out.hop.assign(n, -1);
    out.parent.assign(n, -1);
    out.branch.assign(n, -1);
    Network net(graph, "flood");

    out.hop[seed] = 0;
    std::vector<int> front{seed};
    for (int round = 1; !front.empty(); ++round) {
        // Senders go in id order, so the first claim on a node is the lowest id.
        std::sort(front.begin(), front.end());
        std::vector<int> next;
        for (int u : front)
            for (int w : graph.adj[u]) {
                net.send(u, w);
                if (out.hop[w] >= 0) continue;
                out.hop[w] = round;
                out.parent[w] = u;
                out.branch[w] = u == seed ? w : out.branch[u];
                next.push_back(w);
            }
        net.end_round();
        front = std::move(next);
    }
    if (std::find(out.hop.begin(), out.hop.end(), -1) != out.hop.end())
        throw Error(ErrorKind::DisconnectedGraph, "flood did not reach every node");

    for (int u = 0; u < n; ++u)
        for (int w : graph.adj[u])
            if (u < w && out.parent[u] != w && out.parent[w] != u && out.branch[u] != out.branch[w])
                out.meeting.emplace_back(u, w);
    out.transcript = net.transcript();
    return out;
}

CutGraph flood_cut_locus(const TriMesh& mesh, int seed, Transcript* transcript) {
    if (seed < 0 || seed >= mesh.num_vertices()) throw Error(ErrorKind::InvalidArgument, "seed node out of range");
    const CommGraph graph = mesh_graph(mesh);
    if (!is_connected(graph)) throw Error(ErrorKind::DisconnectedGraph, "mesh graph is not connected");
    Network net(graph, "cut-locus");

    int root = -1;
    for (int h = 0; h < mesh.num_halfedges() && root < 0; ++h)
        if (mesh.he_source(h) == seed) root = TriMesh::he_face(h);
    // Faces live on their vertices; the endpoints of the shared edge tell the
    // far vertex of a newly reached face.
    std::vector<int> parent_edge(mesh.num_faces(), -2);
    parent_edge[root] = -1;
    std::vector<int> front{root};
    while (!front.empty()) {
        std::sort(front.begin(), front.end());
        std::vector<int> next;
        for (int f : front)
            for (int c = 0; c < 3; ++c) {
                const int h = 3 * f + c;
                const int t = mesh.he_twin(h);
                const int g = TriMesh::he_face(t);
                if (parent_edge[g] != -2) continue;
                const int u = std::min(mesh.he_source(h), mesh.he_target(h));
                const int apex = mesh.he_source(TriMesh::he_next(TriMesh::he_next(t)));
                net.send(u, apex);
                parent_edge[g] = mesh.he_edge(h);
                next.push_back(g);
            }
        net.end_round();
        front = std::move(next);
    }

    std::vector<char> crossed(mesh.num_edges(), 0);
    for (int f = 0; f < mesh.num_faces(); ++f)
        if (parent_edge[f] >= 0) crossed[parent_edge[f]] = 1;

    // Trim dangling edges: they do not change the sliced topology.
    std::vector<int> degree(mesh.num_vertices(), 0);
    std::vector<char> in(mesh.num_edges(), 0);
    for (int e = 0; e < mesh.num_edges(); ++e)
        if (!crossed[e]) {
            in[e] = 1;
            for (int v : mesh.edge_vertices(e)) ++degree[v];
        }
    std::vector<std::vector<int>> incident(mesh.num_vertices());
    for (int e = 0; e < mesh.num_edges(); ++e)
        if (in[e])
            for (int v : mesh.edge_vertices(e)) incident[v].push_back(e);
    std::vector<int> stack;
    for (int v = 0; v < mesh.num_vertices(); ++v)
        if (degree[v] == 1) stack.push_back(v);
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (degree[v] != 1) continue;
        for (int e : incident[v]) {
            if (!in[e]) continue;
            in[e] = 0;
            for (int x : mesh.edge_vertices(e))
                if (--degree[x] == 1) stack.push_back(x);
        }
    }
    std::vector<int> edges;
    for (int e = 0; e < mesh.num_edges(); ++e)
        if (in[e]) edges.push_back(e);
    CutGraph cut = make_cut_graph(mesh, edges);
    if (!slices_to_disk(mesh, cut)) throw Error(ErrorKind::SliceFailure, "flooded cut locus does not slice to a disk");
    if (transcript) *transcript = net.transcript();
    return cut;
}

Diffusion diffuse_harmonic(const TriMesh& mesh, const Eigen::VectorXd& weights, const OneForm& omega, double tolerance,
                           int max_rounds) {
    const int n = mesh.num_vertices();
    if (weights.size() != mesh.num_edges() || omega.size() != mesh.num_edges())
        throw Error(ErrorKind::InvalidArgument, "weights and form need one value per edge");
    if (!(tolerance > 0) || max_rounds < 1) throw Error(ErrorKind::InvalidArgument, "bad diffusion tolerance or budget");
    const CommGraph graph = mesh_graph(mesh);
    Network net(graph, "diffusion");

    // Outgoing halfedges of every node: one per incident edge on a closed mesh.
    std::vector<std::vector<int>> out(n);
    for (int h = 0; h < mesh.num_halfedges(); ++h) out[mesh.he_source(h)].push_back(h);

    Diffusion d;
    d.f = VertexFunction::Zero(n);
    d.residual = 0;
    for (int round = 1;; ++round) {
        for (int v = 0; v < n; ++v)
            for (int u : graph.adj[v]) net.send(v, u);
        double worst = 0;
        for (int i = 0; i < n; ++i) {
            double num = 0, den = 0;
            for (int h : out[i]) {
                const double w = weights[mesh.he_edge(h)];
                num += w * (d.f[mesh.he_target(h)] + form_on(mesh, omega, h));
                den += w;
            }
            const double next = num / den;
            worst = std::max(worst, std::abs(next - d.f[i]));
            if (!std::isfinite(next)) worst = next;
            d.f[i] = next;
        }
        net.end_round();
        d.rounds = round;
        d.residual = worst;
        if (!std::isfinite(worst))
            throw Error(ErrorKind::NonConvergence, "diffusion blew up after " + std::to_string(round) +
                                                       " rounds (residual " + std::to_string(worst) + ")");
        if (worst <= tolerance) break;
        if (round == max_rounds)
            throw Error(ErrorKind::NonConvergence, "diffusion did not converge in " + std::to_string(round) +
                                                       " rounds (residual " + std::to_string(worst) + ")");
    }
    d.f.array() -= d.f[0];
    d.form = omega + d0(mesh, d.f);
    d.transcript = net.transcript();
    return d;
}

FloodChart flood_integrate(const TriMesh& mesh, const CutGraph& cut, const ComplexForm& omega, int root) {
    if (root < 0 || root >= mesh.num_vertices()) throw Error(ErrorKind::InvalidArgument, "root node out of range");
    const CommGraph graph = mesh_graph(mesh);
    Network net(graph, "integrate");
    FloodChart chart;
    chart.wedges = slice_wedges(mesh, cut);
    const Wedges& w = chart.wedges;

    // Face sides leaving each wedge; none of them crosses the cut.
    std::vector<std::vector<int>> sides(w.count());
    for (int h = 0; h < mesh.num_halfedges(); ++h) {
        sides[w.of_corner[h]].push_back(h);
        sides[w.of_corner[TriMesh::he_next(h)]].push_back(-1 - h); // reversed side
    }

    chart.value.assign(w.count(), cplx(0, 0));
    std::vector<char> reached(w.count(), 0);
    std::vector<int> front{w.first[root]};
    reached[front[0]] = 1;
    while (!front.empty()) {
        std::sort(front.begin(), front.end());
        std::vector<int> next;
        for (int a : front)
            for (int s : sides[a]) {
                const int h = s >= 0 ? s : -1 - s;
                const int b = s >= 0 ? w.of_corner[TriMesh::he_next(h)] : w.of_corner[h];
                net.send(w.vertex[a], w.vertex[b]);
                if (reached[b]) continue;
                reached[b] = 1;
                chart.value[b] = chart.value[a] + (s >= 0 ? omega.on(mesh, h) : -omega.on(mesh, h));
                next.push_back(b);
            }
        net.end_round();
        front = std::move(next);
    }
    if (std::find(reached.begin(), reached.end(), 0) != reached.end())
        throw Error(ErrorKind::SliceFailure, "sliced mesh is not connected");
    chart.transcript = net.transcript();
    return chart;
}

} // namespace sfc
