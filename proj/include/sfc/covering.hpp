#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sfc/hodge.hpp"
#include "sfc/topology.hpp"

namespace sfc {

using cplx = std::complex<double>;

/// Omega = re + i im, both stored per canonical edge.
struct ComplexForm {
    OneForm re;
    OneForm im;

    cplx on(const TriMesh& mesh, int h) const { return {form_on(mesh, re, h), form_on(mesh, im, h)}; }
};

inline ComplexForm to_complex(const HolomorphicForm& f) { return {f.omega, f.conj}; }

/// phi on the mesh sliced along the cut graph, one value per wedge.
struct FlatChart {
    Wedges wedges;
    std::vector<cplx> value;   // per wedge
    double closure_residual = 0; // worst |phi(b) - phi(a) - Omega(a->b)| over face sides
    double diameter = 0;         // bounding-box diagonal of the image

    cplx at_corner(int h) const { return value[wedges.of_corner[h]]; }
    cplx at_vertex(int v) const { return value[wedges.first[v]]; }
};

/// Breadth-first integration over the sliced disk from `base` (phi(base) = 0).
/// Throws PathDependence if the closure residual exceeds 1e-8 * diameter.
FlatChart integrate(const TriMesh& mesh, const CutGraph& cut, const ComplexForm& omega, int base = 0);

struct ZeroPoint {
    int vertex = -1;
    int winding = 0;      // turns of arg Omega around the one-ring
    double density = 0;   // mean |Omega| per unit edge length over the one-ring
};

/// Turns of arg Omega(v -> u_j) over the counter-clockwise one-ring of v.
int vertex_winding(const TriMesh& mesh, const ComplexForm& omega, int v);

/// Simple zeros (winding 2), merged over adjacent candidates. Throws
/// WrongZeroCount unless exactly 2g - 2 are found.
std::vector<ZeroPoint> find_zeros(const TriMesh& mesh, const ComplexForm& omega);

/// Face-by-face trace of a critical horizontal trajectory.
struct CriticalSegment {
    int from_zero = -1, from_prong = -1; // prong index in the ring order of the start zero
    int to_zero = -1, to_prong = -1;
    std::vector<int> faces;              // faces crossed, in order (start and end faces included)
    std::vector<int> crossed_halfedges;  // halfedge exited in faces[i], size faces.size() - 1
    std::vector<std::array<cplx, 3>> corners; // developed corners of each face, trace coordinates
    std::vector<cplx> points;            // polyline in trace coordinates, starts at 0 (the start zero)
    double level_residual = 0;           // max |Im(point) - Im(start)| before the snap
    double snap_offset = 0;              // |Im| jump of the final snap onto the end zero
    cplx holonomy() const { return points.back() - points.front(); }
    double length() const;
};

struct Prong {
    int sector = -1;  // index j: face of outgoing halfedge j of the zero's ring
    bool rightward = false;
};

/// Sign changes of Im Omega around the ring of v, as prongs.
std::vector<Prong> prongs_at(const TriMesh& mesh, const ComplexForm& omega, int v);

struct CriticalGraph {
    std::vector<ZeroPoint> zeros;
    std::vector<std::vector<Prong>> prongs; // per zero
    std::vector<CriticalSegment> segments;  // one per rightward prong
    double total_length = 0;
};

/// Traces every rightward prong to the zero it reaches (and every leftward
/// one for validation). Throws TraceEscape when a trace exceeds 100x the
/// flat diameter, and PathDependence when the two directions disagree.
CriticalGraph trace_critical(const TriMesh& mesh, const ComplexForm& omega, const std::vector<ZeroPoint>& zeros,
                             double flat_diameter);

/// One side of a slit is a chain of pieces, each glued to a piece on another handle.
struct GluePiece {
    int segment = -1;   // critical segment id
    double from = 0, to = 0; // offsets along the slit, from its start
    int partner_handle = -1, partner_slit = -1;
    bool partner_top = false;
    cplx translation;   // point here + translation = partner point (in partner coordinates)
};

struct Slit {
    cplx start, end;                 // handle flat coordinates; horizontal within tolerance
    std::vector<GluePiece> top;      // pieces seen from above (the handle lies above them)
    std::vector<GluePiece> bottom;
    double length() const { return std::abs(end - start); }
};

struct HandleTriangle {
    int face;
    std::array<cplx, 3> corners; // flat coordinates of the face corners in this handle
    // Faces straddling a slit only belong to this handle on one side of it:
    // clip_side +1 keeps Im >= clip_level, -1 keeps Im <= clip_level, 0 keeps all.
    int clip_side = 0;
    double clip_level = 0;
};

struct Handle {
    std::vector<int> faces;       // faces assigned to this component
    cplx origin;                  // fundamental parallelogram: origin + s*lattice[0] + t*lattice[1]
    std::array<cplx, 2> lattice;  // positively oriented, reduced
    std::vector<Slit> slits;
    std::vector<HandleTriangle> triangles; // developed faces, including faces straddling the slits

    cplx to_fundamental(cplx p) const;      // lattice-reduce into the parallelogram
    double diagonal() const;
    double perimeter() const;
};

struct CoveringAtlas {
    std::vector<Handle> handles;
    std::vector<ZeroPoint> zeros;
    std::vector<int> face_handle; // component of each face
    int genus = 0;
    // Per critical segment: handle above and below it, and the offset taking
    // trace coordinates to each of those handles' coordinates.
    std::vector<std::array<int, 2>> segment_handles;
    std::vector<std::array<cplx, 2>> segment_offset;
};

/// Cuts along the critical graph, develops each component as a flat torus
/// with slits and records the gluing. Throws WrongComponentCount or
/// NonHorizontalSlit.
CoveringAtlas segment_handles(const TriMesh& mesh, const ComplexForm& omega, const CriticalGraph& graph, int genus);

/// Single flat torus for g = 1: the chart of the whole surface.
CoveringAtlas torus_atlas(const TriMesh& mesh, const ComplexForm& omega);

struct CoveringResult {
    ComplexForm omega;
    Eigen::VectorXd coefficients; // integer combination of the harmonic basis that was used
    int attempts = 0;
    CriticalGraph graph;
    CoveringAtlas atlas;
    FlatChart chart;
};

/// The complex form i (eta + i conj eta) for eta = sum coeffs_i harmonic_i.
ComplexForm rotated_form(const HodgeBasis& basis, const Eigen::VectorXd& coeffs);

/// Tries basis elements, then small integer combinations, then seeded random
/// ones, until zeros, tracing and segmentation all succeed.
CoveringResult build_covering(const TriMesh& mesh, const CutGraph& cut, const HodgeBasis& basis, std::uint64_t seed,
                              int max_attempts = 2000);

/// Flat diagonal of the chart, as a length scale.
double flat_diameter(const TriMesh& mesh, const ComplexForm& omega);

} // namespace sfc
