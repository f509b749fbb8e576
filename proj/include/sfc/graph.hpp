#pragma once

#include <vector>

#include "sfc/mesh.hpp"

namespace sfc {

/// Undirected sensor communication graph; neighbour lists are sorted.
struct CommGraph {
    std::vector<std::vector<int>> adj;

    int size() const { return static_cast<int>(adj.size()); }
    int num_edges() const;
    bool has_edge(int u, int v) const;
};

CommGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges);

/// The mesh edge graph (the default communication graph).
CommGraph mesh_graph(const TriMesh& mesh);

/// Unit-disk graph: vertices closer than `radius` in space are neighbours.
CommGraph unit_disk_graph(const TriMesh& mesh, double radius);

/// Hop distances from a set of sources (-1 where unreachable).
std::vector<int> bfs_distances(const CommGraph& graph, const std::vector<int>& sources);

bool is_connected(const CommGraph& graph);

/// Shortest hop path from `from` to the first vertex accepted by `target`
/// (breadth first, lowest index first). Empty if none is reachable.
template <class Pred>
std::vector<int> shortest_path_to(const CommGraph& graph, int from, Pred target);

} // namespace sfc

#include <queue>

namespace sfc {

template <class Pred>
std::vector<int> shortest_path_to(const CommGraph& graph, int from, Pred target) {
    std::vector<int> parent(graph.size(), -2);
    std::queue<int> queue;
    queue.push(from);
    parent[from] = -1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop();
        if (u != from && target(u)) {
            std::vector<int> path;
            for (int x = u; x != -1; x = parent[x]) path.push_back(x);
            return {path.rbegin(), path.rend()};
        }
        for (int w : graph.adj[u])
            if (parent[w] == -2) {
                parent[w] = u;
                queue.push(w);
            }
    }
    return {};
}

} // namespace sfc
