#include "sfc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "sfc/error.hpp"

namespace sfc {

namespace {

std::int64_t pair_key(int u, int v, int n) { return static_cast<std::int64_t>(u) * n + v; }

} // namespace

TriMesh::TriMesh(std::vector<Vec3> positions, std::vector<Face> faces)
    : positions_(std::move(positions)), faces_(std::move(faces)) {
    const int nv = num_vertices();
    const int nf = num_faces();
    if (nf == 0) throw Error(ErrorKind::ParseError, "mesh has no faces");

    std::vector<int> referenced(nv, 0);
    for (int f = 0; f < nf; ++f) {
        const Face& t = faces_[f];
        for (int i = 0; i < 3; ++i) {
            if (t[i] < 0 || t[i] >= nv)
                throw Error(ErrorKind::ParseError, "face " + std::to_string(f) + " references vertex out of range");
            referenced[t[i]] = 1;
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw Error(ErrorKind::DegenerateFace, "face " + std::to_string(f) + " repeats a vertex");
        const Vec3 n = (positions_[t[1]] - positions_[t[0]]).cross(positions_[t[2]] - positions_[t[0]]);
        const double scale = std::max({(positions_[t[1]] - positions_[t[0]]).squaredNorm(),
                                       (positions_[t[2]] - positions_[t[0]]).squaredNorm(),
                                       (positions_[t[2]] - positions_[t[1]]).squaredNorm()});
        if (!(n.norm() > 1e-14 * scale))
            throw Error(ErrorKind::DegenerateFace, "face " + std::to_string(f) + " has zero area");
    }
    for (int v = 0; v < nv; ++v)
        if (!referenced[v]) throw Error(ErrorKind::NonManifold, "vertex " + std::to_string(v) + " is isolated");

    // Count faces per undirected edge before pairing halfedges.
    std::unordered_map<std::int64_t, int> undirected;
    undirected.reserve(3 * nf);
    for (const Face& t : faces_)
        for (int i = 0; i < 3; ++i) {
            const int a = t[i], b = t[(i + 1) % 3];
            ++undirected[pair_key(std::min(a, b), std::max(a, b), nv)];
        }
    for (const auto& [key, count] : undirected)
        if (count != 2)
            throw Error(ErrorKind::NonManifold, "edge (" + std::to_string(key / nv) + "," + std::to_string(key % nv) +
                                                    ") bounds " + std::to_string(count) + " faces");

    std::unordered_map<std::int64_t, int> directed;
    directed.reserve(3 * nf);
    for (int h = 0; h < 3 * nf; ++h) {
        const auto [it, inserted] = directed.emplace(pair_key(he_source(h), he_target(h), nv), h);
        if (!inserted)
            throw Error(ErrorKind::InconsistentOrientation, "edge (" + std::to_string(he_source(h)) + "," +
                                                                std::to_string(he_target(h)) +
                                                                ") has the same direction in two faces");
    }

    twin_.assign(3 * nf, -1);
    he_edge_.assign(3 * nf, -1);
    vertex_he_.assign(nv, -1);
    for (int h = 0; h < 3 * nf; ++h) {
        twin_[h] = directed.at(pair_key(he_target(h), he_source(h), nv));
        if (vertex_he_[he_source(h)] < 0) vertex_he_[he_source(h)] = h;
    }
    // Edge numbering follows the first appearance of the canonical halfedge in face order.
    for (int h = 0; h < 3 * nf; ++h) {
        if (he_edge_[h] >= 0) continue;
        const int canonical = he_sign(h) > 0 ? h : twin_[h];
        const int e = static_cast<int>(edge_vertices_.size());
        edge_vertices_.push_back({he_source(canonical), he_target(canonical)});
        edge_he_.push_back(canonical);
        he_edge_[h] = e;
        he_edge_[twin_[h]] = e;
    }
    edge_length_.resize(edge_vertices_.size());
    for (std::size_t e = 0; e < edge_vertices_.size(); ++e)
        edge_length_[e] = (positions_[edge_vertices_[e][0]] - positions_[edge_vertices_[e][1]]).norm();

    // Each vertex must have a single umbrella of faces.
    std::vector<int> out_count(nv, 0);
    for (int h = 0; h < 3 * nf; ++h) ++out_count[he_source(h)];
    for (int v = 0; v < nv; ++v) {
        int count = 0;
        int h = vertex_he_[v];
        do {
            ++count;
            h = rotate_ccw(h);
        } while (h != vertex_he_[v] && count <= out_count[v]);
        if (count != out_count[v])
            throw Error(ErrorKind::NonManifold, "vertex " + std::to_string(v) + " has a non-disk neighborhood");
    }
}

std::vector<int> TriMesh::outgoing(int v) const {
    std::vector<int> result;
    int h = vertex_he_[v];
    do {
        result.push_back(h);
        h = rotate_ccw(h);
    } while (h != vertex_he_[v]);
    return result;
}

int TriMesh::find_halfedge(int u, int v) const {
    int h = vertex_he_[u];
    do {
        if (he_target(h) == v) return h;
        h = rotate_ccw(h);
    } while (h != vertex_he_[u]);
    return -1;
}

int TriMesh::degree(int v) const {
    int count = 0;
    int h = vertex_he_[v];
    do {
        ++count;
        h = rotate_ccw(h);
    } while (h != vertex_he_[v]);
    return count;
}

double TriMesh::average_edge_length() const {
    double sum = std::accumulate(edge_length_.begin(), edge_length_.end(), 0.0);
    return sum / std::max(1, num_edges());
}

double TriMesh::face_area(int f) const {
    // Heron in the cancellation-safe ordering.
    std::array<double, 3> l = {edge_length_[he_edge_[3 * f]], edge_length_[he_edge_[3 * f + 1]],
                               edge_length_[he_edge_[3 * f + 2]]};
    std::sort(l.begin(), l.end(), std::greater<>());
    const double a = l[0], b = l[1], c = l[2];
    const double q = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    return q > 0 ? 0.25 * std::sqrt(q) : 0.0;
}

TriMesh TriMesh::with_edge_lengths(std::vector<double> lengths) const {
    if (static_cast<int>(lengths.size()) != num_edges())
        throw Error(ErrorKind::InvalidArgument, "edge length count does not match the mesh");
    TriMesh copy = *this;
    copy.edge_length_ = std::move(lengths);
    copy.intrinsic_ = true;
    for (int f = 0; f < num_faces(); ++f) {
        const double l0 = copy.edge_length_[he_edge_[3 * f]], l1 = copy.edge_length_[he_edge_[3 * f + 1]],
                     l2 = copy.edge_length_[he_edge_[3 * f + 2]];
        if (!(l0 < l1 + l2 && l1 < l0 + l2 && l2 < l0 + l1))
            throw Error(ErrorKind::DegenerateFace, "face " + std::to_string(f) + " violates the triangle inequality");
    }
    return copy;
}

int connected_components(const TriMesh& mesh) {
    std::vector<int> seen(mesh.num_faces(), 0);
    int components = 0;
    for (int root = 0; root < mesh.num_faces(); ++root) {
        if (seen[root]) continue;
        ++components;
        std::queue<int> queue;
        queue.push(root);
        seen[root] = 1;
        while (!queue.empty()) {
            const int f = queue.front();
            queue.pop();
            for (int i = 0; i < 3; ++i) {
                const int g = TriMesh::he_face(mesh.he_twin(3 * f + i));
                if (!seen[g]) {
                    seen[g] = 1;
                    queue.push(g);
                }
            }
        }
    }
    return components;
}

int genus(const TriMesh& mesh) {
    if (connected_components(mesh) != 1) throw Error(ErrorKind::DisconnectedMesh, "mesh has several components");
    const int twice = 2 - mesh.euler_characteristic();
    if (twice % 2 != 0 || twice < 0)
        throw Error(ErrorKind::NonInteger, "2 - chi = " + std::to_string(twice) + " is not a non-negative even number");
    return twice / 2;
}

TriMesh generate_tetrahedron() {
    std::vector<Vec3> p = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    std::vector<Face> f = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
    return TriMesh(std::move(p), std::move(f));
}

} // namespace sfc
