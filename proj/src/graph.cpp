#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "sfc/error.hpp"
#include "sfc/graph.hpp"

namespace sfc {

int CommGraph::num_edges() const {
    std::size_t total = 0;
    for (const auto& a : adj) total += a.size();
    return static_cast<int>(total / 2);
}

bool CommGraph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= size() || v >= size()) return false;
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

CommGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    CommGraph g;
    g.adj.resize(n);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n || u == v)
            throw Error(ErrorKind::InvalidArgument, "graph edge out of range");
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& a : g.adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return g;
}

CommGraph mesh_graph(const TriMesh& mesh) {
    std::vector<std::pair<int, int>> edges;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto& ev = mesh.edge_vertices(e);
        edges.emplace_back(ev[0], ev[1]);
    }
    return make_graph(mesh.num_vertices(), edges);
}

CommGraph unit_disk_graph(const TriMesh& mesh, double radius) {
    if (!(radius > 0)) throw Error(ErrorKind::InvalidArgument, "unit-disk radius must be positive");
    // Uniform grid of cell size `radius`.
    std::map<std::array<long long, 3>, std::vector<int>> cells;
    auto key = [&](const Vec3& p) {
        return std::array<long long, 3>{static_cast<long long>(std::floor(p.x() / radius)),
                                        static_cast<long long>(std::floor(p.y() / radius)),
                                        static_cast<long long>(std::floor(p.z() / radius))};
    };
    for (int v = 0; v < mesh.num_vertices(); ++v) cells[key(mesh.position(v))].push_back(v);
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const auto k = key(mesh.position(v));
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy)
                for (long long dz = -1; dz <= 1; ++dz) {
                    auto it = cells.find({k[0] + dx, k[1] + dy, k[2] + dz});
                    if (it == cells.end()) continue;
                    for (int u : it->second)
                        if (u > v && (mesh.position(u) - mesh.position(v)).norm() < radius) edges.emplace_back(v, u);
                }
    }
    return make_graph(mesh.num_vertices(), edges);
}

std::vector<int> bfs_distances(const CommGraph& graph, const std::vector<int>& sources) {
    std::vector<int> dist(graph.size(), -1);
    std::queue<int> queue;
    for (int s : sources)
        if (dist[s] < 0) {
            dist[s] = 0;
            queue.push(s);
        }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop();
        for (int w : graph.adj[u])
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push(w);
            }
    }
    return dist;
}

bool is_connected(const CommGraph& graph) {
    if (graph.size() == 0) return true;
    const auto d = bfs_distances(graph, {0});
    return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

} // namespace sfc
