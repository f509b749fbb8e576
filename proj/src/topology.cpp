#include "sfc/topology.hpp"

#include <algorithm>
#include <queue>

#include "sfc/error.hpp"

namespace sfc {

DualTree dual_spanning_tree(const TriMesh& mesh, int root) {
    const int nf = mesh.num_faces();
    if (root < 0 || root >= nf) throw Error(ErrorKind::InvalidArgument, "dual tree root out of range");
    DualTree tree;
    tree.root = root;
    tree.parent.assign(nf, -2);
    tree.parent_edge.assign(nf, -1);
    tree.edge_in_tree.assign(mesh.num_edges(), 0);
    tree.order.reserve(nf);

    std::queue<int> queue;
    queue.push(root);
    tree.parent[root] = -1;
    while (!queue.empty()) {
        const int f = queue.front();
        queue.pop();
        tree.order.push_back(f);
        std::array<std::pair<int, int>, 3> nbrs;
        for (int i = 0; i < 3; ++i) {
            const int h = 3 * f + i;
            nbrs[i] = {TriMesh::he_face(mesh.he_twin(h)), mesh.he_edge(h)};
        }
        std::sort(nbrs.begin(), nbrs.end());
        for (auto [g, e] : nbrs) {
            if (tree.parent[g] != -2) continue;
            tree.parent[g] = f;
            tree.parent_edge[g] = e;
            tree.edge_in_tree[e] = 1;
            queue.push(g);
        }
    }
    if (static_cast<int>(tree.order.size()) != nf)
        throw Error(ErrorKind::DisconnectedMesh, "dual graph is disconnected");
    return tree;
}

CutGraph make_cut_graph(const TriMesh& mesh, const std::vector<int>& edges) {
    CutGraph cut;
    cut.contains.assign(mesh.num_edges(), 0);
    cut.adj.assign(mesh.num_vertices(), {});
    for (int e : edges) cut.contains[e] = 1;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!cut.contains[e]) continue;
        cut.edges.push_back(e);
        const auto [a, b] = mesh.edge_vertices(e);
        cut.adj[a].emplace_back(b, e);
        cut.adj[b].emplace_back(a, e);
    }
    for (auto& list : cut.adj) std::sort(list.begin(), list.end());
    return cut;
}

CutGraph cut_graph(const TriMesh& mesh, const DualTree& tree) {
    std::vector<int> edges;
    for (int e = 0; e < mesh.num_edges(); ++e)
        if (!tree.edge_in_tree[e]) edges.push_back(e);
    return make_cut_graph(mesh, edges);
}

int sliced_euler_characteristic(const TriMesh& mesh, const CutGraph& cut) {
    // A vertex of cut-degree k splits into k copies.
    long vertices = 0;
    for (int v = 0; v < mesh.num_vertices(); ++v) vertices += std::max(1, cut.degree(v));
    return static_cast<int>(vertices - (mesh.num_edges() + cut.size()) + mesh.num_faces());
}

int sliced_components(const TriMesh& mesh, const CutGraph& cut) {
    std::vector<char> seen(mesh.num_faces(), 0);
    int components = 0;
    for (int root = 0; root < mesh.num_faces(); ++root) {
        if (seen[root]) continue;
        ++components;
        std::vector<int> stack{root};
        seen[root] = 1;
        while (!stack.empty()) {
            const int f = stack.back();
            stack.pop_back();
            for (int i = 0; i < 3; ++i) {
                const int h = 3 * f + i;
                if (cut.has(mesh.he_edge(h))) continue;
                const int g = TriMesh::he_face(mesh.he_twin(h));
                if (!seen[g]) {
                    seen[g] = 1;
                    stack.push_back(g);
                }
            }
        }
    }
    return components;
}

Wedges slice_wedges(const TriMesh& mesh, const CutGraph& cut) {
    Wedges w;
    w.of_corner.assign(mesh.num_halfedges(), -1);
    w.first.assign(mesh.num_vertices(), -1);
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const std::vector<int> out = mesh.outgoing(v);
        const int d = static_cast<int>(out.size());
        // Start right after a cut edge so each wedge is a contiguous run.
        int start = 0;
        for (int j = 0; j < d; ++j)
            if (cut.has(mesh.he_edge(out[j]))) {
                start = j;
                break;
            }
        for (int k = 0; k < d; ++k) {
            const int h = out[(start + k) % d];
            if (k == 0 || cut.has(mesh.he_edge(h))) {
                if (w.first[v] < 0) w.first[v] = w.count();
                w.vertex.push_back(v);
            }
            w.of_corner[h] = w.count() - 1;
        }
    }
    return w;
}

bool slices_to_disk(const TriMesh& mesh, const CutGraph& cut) {
    return sliced_components(mesh, cut) == 1 && sliced_euler_characteristic(mesh, cut) == 1;
}

HomologyBasis homology_basis(const TriMesh& mesh, const CutGraph& cut) {
    const int nv = mesh.num_vertices();
    HomologyBasis basis;
    basis.tree_parent.assign(nv, -2);
    std::vector<int> depth(nv, 0);
    std::vector<char> tree_edge(mesh.num_edges(), 0);

    int root = -1;
    for (int v = 0; v < nv && root < 0; ++v)
        if (cut.degree(v) > 0) root = v;
    if (root < 0) throw Error(ErrorKind::GenusZero, "cut graph is empty");

    std::queue<int> queue;
    queue.push(root);
    basis.tree_parent[root] = -1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop();
        for (auto [u, e] : cut.adj[v]) {
            if (basis.tree_parent[u] != -2) continue;
            basis.tree_parent[u] = v;
            depth[u] = depth[v] + 1;
            tree_edge[e] = 1;
            queue.push(u);
        }
    }

    for (int e : cut.edges) {
        if (tree_edge[e]) continue;
        const auto [a, b] = mesh.edge_vertices(e);
        if (basis.tree_parent[a] == -2 || basis.tree_parent[b] == -2)
            throw Error(ErrorKind::SliceFailure, "cut graph is disconnected");
        basis.generators.push_back(e);

        // Climb both root-ward paths until they meet.
        std::vector<int> up_a{a}, up_b{b};
        int x = a, y = b;
        while (x != y) {
            if (depth[x] >= depth[y]) {
                x = basis.tree_parent[x];
                up_a.push_back(x);
            } else {
                y = basis.tree_parent[y];
                up_b.push_back(y);
            }
        }
        // Loop: a -> b, b up to the meeting vertex, then down to a.
        Loop loop;
        loop.vertices.push_back(a);
        for (int v : up_b) loop.vertices.push_back(v);
        for (int i = static_cast<int>(up_a.size()) - 2; i >= 1; --i) loop.vertices.push_back(up_a[i]);
        const int n = static_cast<int>(loop.vertices.size());
        for (int i = 0; i < n; ++i) {
            const int h = mesh.find_halfedge(loop.vertices[i], loop.vertices[(i + 1) % n]);
            if (h < 0) throw Error(ErrorKind::SliceFailure, "loop step is not a mesh edge");
            loop.halfedges.push_back(h);
        }
        basis.loops.push_back(std::move(loop));
    }
    if (basis.loops.empty()) throw Error(ErrorKind::GenusZero, "cut graph is a tree: the surface has genus 0");
    return basis;
}

bool loop_is_closed(const TriMesh& mesh, const Loop& loop) {
    const int n = static_cast<int>(loop.halfedges.size());
    if (n < 3) return false;
    for (int i = 0; i < n; ++i)
        if (mesh.he_target(loop.halfedges[i]) != mesh.he_source(loop.halfedges[(i + 1) % n])) return false;
    return true;
}

} // namespace sfc
