#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "sfc/covering.hpp"
#include "sfc/graph.hpp"

namespace sfc {

inline constexpr double kDefaultSlope = std::numbers::e;

struct FlatSegment {
    int handle = -1;
    cplx start, end; // handle flat coordinates
    double length() const { return std::abs(end - start); }
};

/// Straight line of fixed slope traced across the welded flat tori.
struct DenseCurve {
    std::vector<FlatSegment> segments;
    double slope = kDefaultSlope;
    double length = 0;
    int start_handle = 0;
    cplx start;
    cplx direction; // unit vector (1, k) / |(1, k)|
    int slit_crossings = 0;
    double closest_endpoint = 1e300;      // flat distance to the nearest slit endpoint passed
    double closest_lattice_point = 1e300; // and to the nearest lattice point
};

/// Tolerance for endpoint and lattice-point proximity on a handle.
double hit_tolerance(const Handle& handle);

/// Image of mesh vertex `v` in the atlas, moved off a slit along the slope if needed.
std::pair<int, cplx> default_start(const CoveringAtlas& atlas, const TriMesh& mesh, double slope, int v = 0);

/// Event-driven trace: lattice wraps and slit transfers until the flat length L
/// is used up. Throws EndpointHit when passing within tolerance of a slit endpoint.
DenseCurve trace_dense(const CoveringAtlas& atlas, double slope, int handle, cplx start, double length);

/// Starts from `initial` and perturbs by seeded offsets in (0, 1e-3) until a
/// probe trace avoids slit endpoints and lattice points (100 attempts).
double choose_slope(const CoveringAtlas& atlas, int handle, cplx start, std::uint64_t seed,
                    double initial = kDefaultSlope);

struct GapSample {
    double prefix;  // curve length
    double max_gap; // max over grid points of the flat distance to the prefix
};

/// Max gap for prefixes L/2^(levels-1), ..., L/2, L, preceded by the empty prefix.
std::vector<GapSample> density_profile(const DenseCurve& curve, const CoveringAtlas& atlas, int samples,
                                       int levels = 8);

/// Smallest flat distance between two crossings of the curve with a fixed
/// transversal (along the second lattice vector) in any handle.
double aperiodicity(const DenseCurve& curve, const CoveringAtlas& atlas, double transversal = 0.5);

/// Piece of the pulled-back curve inside one face. Corners are developed in
/// "walk" coordinates, where the curve point at arc length s is origin + s * direction.
struct SurfacePiece {
    int face = -1;
    Eigen::Vector3d a, b; // barycentric coordinates of the entry and exit points
    double s0 = 0, s1 = 0;
    std::array<cplx, 3> corners;
};

struct SurfaceCurve {
    std::vector<SurfacePiece> pieces;
    cplx origin, direction;
    double length = 0;
    double resync_error = 0; // worst mismatch with the flat segment starts
    std::vector<std::array<cplx, 3>> flat_faces; // one flat copy of every face, for local development
};

struct LocatedPoint {
    int face = -1;
    Eigen::Vector3d bary;
    std::array<cplx, 3> corners; // corners in handle coordinates, translated to contain the point
};

/// Uniform-grid point location over one handle's flat triangles.
class HandleLocator {
public:
    explicit HandleLocator(const Handle& handle);
    /// Throws LocationMiss if no triangle contains p (after a 1e-9 expansion retry).
    LocatedPoint locate(cplx p) const;

private:
    struct Entry {
        int triangle;
        cplx shift;
    };
    const Handle* handle_;
    cplx lo_;
    double cell_;
    int nx_, ny_;
    std::vector<std::vector<Entry>> grid_;
    bool try_locate(cplx p, double eps, LocatedPoint* out) const;
};

/// Maps the curve onto mesh faces by a straight walk in the flat metric,
/// checked against every flat segment start.
SurfaceCurve pullback(const DenseCurve& curve, const CoveringAtlas& atlas, const TriMesh& mesh);

struct DiscretePath {
    std::vector<int> vertices;
    std::vector<char> bridge;     // per hop: 1 if the hop belongs to a bridge
    int bridge_hops = 0;
    int bridges = 0;              // number of bridges (each spans one or more hops)
    std::vector<int> belt;        // sorted belt vertex ids
    int hops() const { return vertices.empty() ? 0 : static_cast<int>(vertices.size()) - 1; }
};

/// Greedy belt walk along the curve. The window holds the belt vertices within
/// delta of the curve around the walker's curve parameter. The walker steps to
/// the unvisited window neighbour closest to the curve among those not behind
/// it; with none it bridges to the nearest such vertex, and with no open vertex
/// ahead it advances the parameter. What the curve misses is swept up last.
/// Throws EmptyBelt if `start` is not within delta of the curve.
DiscretePath discretize(const SurfaceCurve& curve, const TriMesh& mesh, const CommGraph& graph, double delta,
                        int start);

/// Mean |Omega| over edges: the flat edge length scale for the belt width.
double average_flat_edge(const TriMesh& mesh, const ComplexForm& omega);

} // namespace sfc
