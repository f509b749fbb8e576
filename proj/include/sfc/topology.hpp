#pragma once

#include <vector>

#include "sfc/mesh.hpp"

namespace sfc {

/// Spanning tree of the dual graph (faces joined across edges).
struct DualTree {
    int root = 0;
    std::vector<int> parent;      // parent face, -1 at the root
    std::vector<int> parent_edge; // primal edge crossed to reach the parent
    std::vector<int> order;       // faces in breadth-first order
    std::vector<char> edge_in_tree;

    int num_tree_edges() const { return static_cast<int>(order.size()) - 1; }
};

/// Edge subset of the mesh whose complement is a topological disk.
struct CutGraph {
    std::vector<char> contains;                       // per edge
    std::vector<int> edges;                           // sorted edge ids
    std::vector<std::vector<std::pair<int, int>>> adj; // per vertex: (neighbour, edge), sorted by neighbour

    int size() const { return static_cast<int>(edges.size()); }
    bool has(int e) const { return contains[e] != 0; }
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

/// Closed loop of oriented halfedges, head to tail.
struct Loop {
    std::vector<int> halfedges;
    std::vector<int> vertices; // vertices[i] is the source of halfedges[i]
};

struct HomologyBasis {
    std::vector<Loop> loops;
    std::vector<int> tree_parent; // spanning tree of the cut graph, per vertex
    std::vector<int> generators;  // cut-graph edges not in that tree, one per loop
};

/// Breadth-first spanning tree of the dual graph, lowest face index first.
DualTree dual_spanning_tree(const TriMesh& mesh, int root = 0);

/// Edges whose dual edge is not in the tree.
CutGraph cut_graph(const TriMesh& mesh, const DualTree& tree);
CutGraph make_cut_graph(const TriMesh& mesh, const std::vector<int>& edges);

/// Euler characteristic of the mesh sliced open along the cut graph.
int sliced_euler_characteristic(const TriMesh& mesh, const CutGraph& cut);
/// Faces connected through uncut edges.
int sliced_components(const TriMesh& mesh, const CutGraph& cut);
/// True when slicing along the cut leaves a single disk.
bool slices_to_disk(const TriMesh& mesh, const CutGraph& cut);

/// Vertex copies of the mesh sliced along a cut. Corner h (the corner of
/// face he_face(h) at he_source(h)) belongs to wedge of_corner[h].
struct Wedges {
    std::vector<int> of_corner;
    std::vector<int> vertex; // mesh vertex of each wedge
    std::vector<int> first;  // lowest wedge id of each mesh vertex

    int count() const { return static_cast<int>(vertex.size()); }
};

Wedges slice_wedges(const TriMesh& mesh, const CutGraph& cut);

/// 2g loops: each cut-graph edge outside a BFS tree of the cut graph, closed
/// up through the tree. Throws GenusZero when there are none.
HomologyBasis homology_basis(const TriMesh& mesh, const CutGraph& cut);

/// True when the loop chains head to tail and closes.
bool loop_is_closed(const TriMesh& mesh, const Loop& loop);

} // namespace sfc
