#include <queue>
#include <tuple>
#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "sfc/curve.hpp"
#include "sfc/error.hpp"

namespace sfc {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double point_segment(cplx p, cplx a, cplx b) {
    const cplx ab = b - a;
    const double n = std::norm(ab);
    const double t = n > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / n, 0.0, 1.0) : 0.0;
    return std::abs(p - (a + t * ab));
}

double segment_segment(cplx a, cplx b, cplx c, cplx d) {
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0;
    return std::min({point_segment(a, c, d), point_segment(b, c, d), point_segment(c, a, b), point_segment(d, a, b)});
}

struct Near {
    int vertex;
    cplx pos; // walk coordinates
};

// Vertices within delta of one piece, found by developing faces outward
// from the piece's face while the face edges stay within delta.
std::vector<Near> near_piece(const SurfaceCurve& curve, const TriMesh& mesh, std::size_t i, double delta) {
    const SurfacePiece& piece = curve.pieces[i];
    const cplx a = curve.origin + piece.s0 * curve.direction, b = curve.origin + piece.s1 * curve.direction;
    std::vector<Near> out;
    std::unordered_set<int> faces{piece.face}, verts;
    std::deque<std::pair<int, std::array<cplx, 3>>> queue{{piece.face, piece.corners}};
    while (!queue.empty()) {
        const auto [f, C] = queue.front();
        queue.pop_front();
        const Face& fv = mesh.face(f);
        for (int c = 0; c < 3; ++c)
            if (!verts.count(fv[c]) && point_segment(C[c], a, b) <= delta) {
                verts.insert(fv[c]);
                out.push_back({fv[c], C[c]});
            }
        for (int c = 0; c < 3; ++c) {
            if (segment_segment(a, b, C[c], C[(c + 1) % 3]) > delta) continue;
            const int t = mesh.he_twin(3 * f + c);
            const int g = TriMesh::he_face(t);
            if (!faces.insert(g).second) continue;
            const auto& ref = curve.flat_faces[g];
            const cplx shift = C[(c + 1) % 3] - ref[t % 3];
            queue.push_back({g, {ref[0] + shift, ref[1] + shift, ref[2] + shift}});
        }
    }
    return out;
}

// Stepping onto a vertex the path already used this often costs extra hops,
// so bridges do not all funnel through one hub (high-valence zeros).
constexpr int kBusyVisits = 2;
constexpr long kBusyPenalty = 8;

// Cheapest path to the nearest vertex accepted by `open`: hops plus the busy
// penalty, then fewest earlier visits, then lowest vertex id.
template <class Pred>
std::vector<int> bridge_path(const CommGraph& graph, int from, const std::vector<int>& count, Pred open) {
    std::vector<long> dist(graph.size(), -1);
    std::vector<int> parent(graph.size(), -1);
    std::vector<char> done(graph.size(), 0);
    using Item = std::tuple<long, long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    std::vector<long> cost(graph.size(), 0);
    dist[from] = 0;
    pq.push({0, 0, from});
    while (!pq.empty()) {
        auto [d, c, u] = pq.top();
        pq.pop();
        if (done[u]) continue;
        done[u] = 1;
        if (u != from && open(u)) {
            std::vector<int> path;
            for (int x = u; x != -1; x = parent[x]) path.push_back(x);
            return {path.rbegin(), path.rend()};
        }
        for (int w : graph.adj[u]) {
            const long nd = d + 1 + kBusyPenalty * std::max(0, count[w] - kBusyVisits + 1), nc = c + count[w];
            if (dist[w] < 0 || nd < dist[w] || (nd == dist[w] && nc < cost[w])) {
                dist[w] = nd;
                cost[w] = nc;
                parent[w] = u;
                pq.push({nd, nc, w});
            }
        }
    }
    return {};
}

} // namespace

double average_flat_edge(const TriMesh& mesh, const ComplexForm& omega) {
    if (mesh.num_edges() == 0) return 0;
    double sum = 0;
    for (int e = 0; e < mesh.num_edges(); ++e) sum += std::abs(omega.on(mesh, mesh.edge_halfedge(e)));
    return sum / mesh.num_edges();
}

DiscretePath discretize(const SurfaceCurve& curve, const TriMesh& mesh, const CommGraph& graph, double delta,
                        int start) {
    const int nv = mesh.num_vertices();
    if (graph.size() != nv) throw Error(ErrorKind::InvalidArgument, "graph and mesh sizes differ");
    if (start < 0 || start >= nv) throw Error(ErrorKind::InvalidArgument, "start vertex out of range");
    if (!(delta > 0)) throw Error(ErrorKind::InvalidArgument, "belt width must be positive");
    const std::size_t np = curve.pieces.size();

    // Belt and the first piece that comes near the start.
    std::vector<char> in_belt(nv, 0);
    std::size_t first = np;
    for (std::size_t i = 0; i < np; ++i)
        for (const Near& n : near_piece(curve, mesh, i, delta)) {
            in_belt[n.vertex] = 1;
            if (n.vertex == start && first == np) first = i;
        }
    DiscretePath path;
    for (int v = 0; v < nv; ++v)
        if (in_belt[v]) path.belt.push_back(v);
    if (first == np) throw Error(ErrorKind::EmptyBelt, "start vertex is not within the belt width of the curve");

    std::vector<char> visited(nv, 0);
    std::vector<int> count(nv, 0);
    visited[start] = 1;
    count[start] = 1;
    path.vertices.push_back(start);
    std::size_t remaining = path.belt.size() - 1;

    std::vector<std::vector<Near>> cache(np);
    std::vector<char> cached(np, 0);
    std::vector<double> along(nv, 0), perp(nv, 0); // curve coordinates of window vertices
    std::vector<std::size_t> stamp(nv, 0);
    std::size_t round = 0;
    std::size_t lo = first;
    // Slack for stepping slightly backwards, and the parameter advance when stuck.
    const double slack = delta / 4, advance = delta / 4;

    auto visit = [&](int v, bool bridge) {
        path.vertices.push_back(v);
        path.bridge.push_back(bridge);
        path.bridge_hops += bridge;
        ++count[v];
        if (!visited[v]) {
            visited[v] = 1;
            if (in_belt[v]) --remaining;
        }
    };

    double s = curve.pieces[first].s0;
    while (remaining > 0) {
        while (lo < np && curve.pieces[lo].s1 < s - delta) std::vector<Near>().swap(cache[lo++]);
        if (lo == np) break;
        ++round;
        std::vector<int> window;
        for (std::size_t j = lo; j < np && curve.pieces[j].s0 <= s + delta; ++j) {
            if (!cached[j]) {
                cache[j] = near_piece(curve, mesh, j, delta);
                cached[j] = 1;
            }
            for (const Near& n : cache[j]) {
                const cplx q = (n.pos - curve.origin) * std::conj(curve.direction);
                if (stamp[n.vertex] != round) {
                    stamp[n.vertex] = round;
                    window.push_back(n.vertex);
                } else if (std::abs(q.imag()) >= perp[n.vertex]) {
                    continue;
                }
                along[n.vertex] = q.real();
                perp[n.vertex] = std::abs(q.imag());
            }
        }
        const int cur = path.vertices.back();
        const double from = stamp[cur] == round ? std::max(s, along[cur]) - slack : s - slack;
        auto ahead = [&](int v) { return stamp[v] == round && !visited[v] && along[v] >= from; };

        // Closest to the curve among the unvisited neighbours further along it.
        int best = -1;
        for (int u : graph.adj[cur])
            if (ahead(u) && (best < 0 || perp[u] < perp[best])) best = u;
        if (best >= 0) {
            visit(best, false);
            s = std::max(s, along[best]);
            continue;
        }
        if (std::any_of(window.begin(), window.end(), ahead)) {
            const std::vector<int> hop = bridge_path(graph, cur, count, ahead);
            if (hop.empty()) throw Error(ErrorKind::EmptyBelt, "belt vertex unreachable in the communication graph");
            for (std::size_t k = 1; k < hop.size(); ++k) visit(hop[k], true);
            ++path.bridges;
            s = std::max(s, along[hop.back()]);
            continue;
        }
        s += advance;
    }

    // The curve ran out: sweep up what is left of the belt.
    auto left = [&](int v) { return in_belt[v] && !visited[v]; };
    while (remaining > 0) {
        const int cur = path.vertices.back();
        const auto next = std::find_if(graph.adj[cur].begin(), graph.adj[cur].end(), left);
        if (next != graph.adj[cur].end()) {
            visit(*next, false);
            continue;
        }
        const std::vector<int> hop = bridge_path(graph, cur, count, left);
        if (hop.empty()) throw Error(ErrorKind::EmptyBelt, "belt vertex unreachable in the communication graph");
        for (std::size_t k = 1; k < hop.size(); ++k) visit(hop[k], true);
        ++path.bridges;
    }
    return path;
}

} // namespace sfc
