#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sfc {

using Vec3 = Eigen::Vector3d;
using Face = std::array<int, 3>;

enum class MeshFormat { OFF, OBJ };

/// Closed, consistently oriented triangle mesh with halfedge connectivity.
///
/// Halfedge `3*f + i` runs from corner i to corner (i+1)%3 of face f, so
/// `next`, `prev` and `face` are arithmetic. Edges are stored once, in the
/// canonical orientation lower vertex index -> higher vertex index.
/// Instances are immutable after construction.
class TriMesh {
public:
    TriMesh() = default;

    /// Validates and indexes a triangle soup. Throws sfc::Error on
    /// non-manifold, inconsistently oriented, or degenerate input.
    TriMesh(std::vector<Vec3> positions, std::vector<Face> faces);

    int num_vertices() const { return static_cast<int>(positions_.size()); }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    int num_edges() const { return static_cast<int>(edge_vertices_.size()); }
    int num_halfedges() const { return 3 * num_faces(); }

    const std::vector<Vec3>& positions() const { return positions_; }
    const Vec3& position(int v) const { return positions_[v]; }
    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(int f) const { return faces_[f]; }

    // Halfedge queries.
    static int he_face(int h) { return h / 3; }
    static int he_next(int h) { return 3 * (h / 3) + (h % 3 + 1) % 3; }
    static int he_prev(int h) { return 3 * (h / 3) + (h % 3 + 2) % 3; }
    int he_source(int h) const { return faces_[h / 3][h % 3]; }
    int he_target(int h) const { return faces_[h / 3][(h % 3 + 1) % 3]; }
    int he_twin(int h) const { return twin_[h]; }
    int he_edge(int h) const { return he_edge_[h]; }
    /// +1 when the halfedge runs along the canonical edge orientation.
    int he_sign(int h) const { return he_source(h) < he_target(h) ? 1 : -1; }
    /// Vertex opposite the halfedge inside its face.
    int he_opposite_vertex(int h) const { return faces_[h / 3][(h % 3 + 2) % 3]; }

    /// Some halfedge leaving v.
    int vertex_halfedge(int v) const { return vertex_he_[v]; }
    /// Next outgoing halfedge counter-clockwise around the source vertex.
    int rotate_ccw(int h) const { return twin_[he_prev(h)]; }
    /// Outgoing halfedges of v in counter-clockwise order.
    std::vector<int> outgoing(int v) const;
    /// Halfedge u->v, or -1.
    int find_halfedge(int u, int v) const;
    int degree(int v) const;

    const std::array<int, 2>& edge_vertices(int e) const { return edge_vertices_[e]; }
    /// Intrinsic edge length. Defaults to the Euclidean length of the embedding.
    double edge_length(int e) const { return edge_length_[e]; }
    const std::vector<double>& edge_lengths() const { return edge_length_; }
    /// Halfedge of e running lower -> higher index.
    int edge_halfedge(int e) const { return edge_he_[e]; }

    /// Euler characteristic V - E + F.
    int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }

    double average_edge_length() const;
    double face_area(int f) const;

    /// Copy of this mesh whose metric is given by per-edge lengths instead of
    /// the embedding (e.g. a flat torus). Throws DegenerateFace if a face
    /// violates the strict triangle inequality.
    TriMesh with_edge_lengths(std::vector<double> lengths) const;
    bool has_intrinsic_metric() const { return intrinsic_; }

private:
    std::vector<Vec3> positions_;
    std::vector<Face> faces_;
    std::vector<int> twin_;
    std::vector<int> he_edge_;
    std::vector<int> vertex_he_;
    std::vector<std::array<int, 2>> edge_vertices_;
    std::vector<int> edge_he_;
    std::vector<double> edge_length_;
    bool intrinsic_ = false;
};

/// Genus (2 - V + E - F)/2. Throws NonInteger if the parity is wrong and
/// DisconnectedMesh if the mesh has more than one component.
int genus(const TriMesh& mesh);

/// Number of face-connected components.
int connected_components(const TriMesh& mesh);

TriMesh load_mesh(const std::string& path, MeshFormat format,
                  std::vector<std::string>* warnings = nullptr);
/// Format from the file extension (.off / .obj).
TriMesh load_mesh(const std::string& path, std::vector<std::string>* warnings = nullptr);
TriMesh read_off(std::istream& in);
TriMesh read_obj(std::istream& in);

void save_mesh(const TriMesh& mesh, const std::string& path, MeshFormat format);
void save_mesh(const TriMesh& mesh, const std::string& path);
void write_off(const TriMesh& mesh, std::ostream& out);
void write_obj(const TriMesh& mesh, std::ostream& out);

MeshFormat format_from_path(const std::string& path);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

/// Torus of revolution sampled on an n x m grid (n around the central axis).
TriMesh generate_torus_grid(int n, int m, double major_radius = 2.0, double minor_radius = 1.0);

/// Closed genus-g surface: a chain of g square cells, each with a round
/// hole, forming a planar domain that is doubled into a thin pillow.
/// `resolution` is the number of angular samples around each hole (rounded
/// up to a multiple of 8). The surface is mirror symmetric top/bottom.
TriMesh generate_genus_g(int g, int resolution);

/// n x m grid torus carrying the flat metric of a width x height rectangle
/// with opposite sides identified. Positions are a torus of revolution and are
/// only used for display.
TriMesh generate_flat_torus(int n, int m, double width = 1.0, double height = 1.0);

TriMesh generate_tetrahedron();

} // namespace sfc
