#include <algorithm>
#include <cmath>

#include "sfc/covering.hpp"
#include "sfc/error.hpp"

namespace sfc {

double CriticalSegment::length() const {
    double total = 0;
    for (std::size_t i = 1; i < points.size(); ++i) total += std::abs(points[i] - points[i - 1]);
    return total;
}

namespace {

double point_segment_distance(cplx p, cplx a, cplx b) {
    const cplx ab = b - a;
    const double n = std::norm(ab);
    double t = n > 0 ? ((p - a) * std::conj(ab)).real() / n : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

struct Tracer {
    const TriMesh& mesh;
    const ComplexForm& omega;
    const std::vector<ZeroPoint>& zeros;
    std::vector<int> zero_of;       // per vertex
    std::vector<double> snap_radius; // per zero
    std::vector<std::vector<int>> rings;
    double max_length;

    Tracer(const TriMesh& m, const ComplexForm& w, const std::vector<ZeroPoint>& z, double diameter)
        : mesh(m), omega(w), zeros(z), zero_of(m.num_vertices(), -1), max_length(100 * diameter) {
        for (std::size_t i = 0; i < zeros.size(); ++i) {
            const int v = zeros[i].vertex;
            zero_of[v] = static_cast<int>(i);
            rings.push_back(mesh.outgoing(v));
            double flat = 0;
            for (int h : rings.back()) flat += std::abs(omega.on(mesh, h));
            snap_radius.push_back(0.5 * flat / static_cast<double>(rings.back().size()));
        }
    }

    bool incident(int f, int v) const {
        const Face& c = mesh.face(f);
        return c[0] == v || c[1] == v || c[2] == v;
    }

    CriticalSegment trace(int zi, int pi, const std::vector<std::vector<Prong>>& prongs) const {
        const int z = zeros[zi].vertex;
        const Prong prong = prongs[zi][pi];
        const std::vector<int>& ring = rings[zi];
        const int h0 = ring[prong.sector];

        CriticalSegment seg;
        seg.from_zero = zi;
        seg.from_prong = pi;

        // Side of a developed corner relative to the level Im = 0; ties by vertex index.
        auto side = [&](cplx p, int v) {
            if (p.imag() != 0) return p.imag() > 0 ? 1 : -1;
            return v > z ? 1 : -1;
        };
        auto crossing = [](cplx a, cplx b) {
            const double t = a.imag() / (a.imag() - b.imag());
            return a + t * (b - a);
        };

        int f = TriMesh::he_face(h0);
        std::array<cplx, 3> pos;
        const int i0 = h0 % 3;
        pos[i0] = 0;
        pos[(i0 + 1) % 3] = omega.on(mesh, h0);
        pos[(i0 + 2) % 3] = pos[(i0 + 1) % 3] + omega.on(mesh, TriMesh::he_next(h0));
        int exit = TriMesh::he_next(h0);
        cplx point = crossing(pos[exit % 3], pos[(exit % 3 + 1) % 3]);

        seg.faces.push_back(f);
        seg.corners.push_back(pos);
        seg.points.push_back(0);
        seg.points.push_back(point);
        seg.crossed_halfedges.push_back(exit);
        seg.level_residual = std::abs(point.imag());
        double length = std::abs(point);
        bool departed = false;
        const int max_steps = 50 * mesh.num_faces() + 100;

        for (int step = 0; step < max_steps; ++step) {
            const int entry = mesh.he_twin(exit);
            const cplx pa = pos[(exit % 3 + 1) % 3]; // target of exit = source of entry
            const cplx pb = pos[exit % 3];
            f = TriMesh::he_face(entry);
            const int k = entry % 3;
            pos[k] = pa;
            pos[(k + 1) % 3] = pb;
            pos[(k + 2) % 3] = pb + omega.on(mesh, TriMesh::he_next(entry));
            const Face& vs = mesh.face(f);

            const int sb = side(pos[(k + 1) % 3], vs[(k + 1) % 3]);
            const int sw = side(pos[(k + 2) % 3], vs[(k + 2) % 3]);
            exit = sw != sb ? TriMesh::he_next(entry) : TriMesh::he_prev(entry);
            const cplx next = crossing(pos[exit % 3], pos[(exit % 3 + 1) % 3]);

            if (!incident(f, z)) departed = true;
            int snap_corner = -1;
            double best = 0;
            for (int c = 0; c < 3; ++c) {
                const int zj = zero_of[vs[c]];
                if (zj < 0 || (zj == zi && !departed)) continue;
                const double d = point_segment_distance(pos[c], point, next);
                if (d < snap_radius[zj] && (snap_corner < 0 || d < best)) {
                    snap_corner = c;
                    best = d;
                }
            }

            seg.faces.push_back(f);
            seg.corners.push_back(pos);
            if (snap_corner >= 0) {
                const cplx end = pos[snap_corner];
                seg.points.push_back(end);
                seg.snap_offset = std::abs(end.imag());
                seg.to_zero = zero_of[vs[snap_corner]];
                // Arrival sector: the ring slot of this face around the end zero.
                const std::vector<int>& ring2 = rings[seg.to_zero];
                const int d = static_cast<int>(ring2.size());
                int slot = 0;
                for (int j = 0; j < d; ++j)
                    if (TriMesh::he_face(ring2[j]) == f) slot = j;
                int best_prong = -1, best_gap = d + 1;
                const auto& candidates = prongs[seg.to_zero];
                for (int q = 0; q < static_cast<int>(candidates.size()); ++q) {
                    if (candidates[q].rightward == prong.rightward) continue;
                    const int diff = std::abs(candidates[q].sector - slot);
                    const int gap = std::min(diff, d - diff);
                    if (gap < best_gap) {
                        best_gap = gap;
                        best_prong = q;
                    }
                }
                seg.to_prong = best_prong;
                return seg;
            }

            seg.crossed_halfedges.push_back(exit);
            seg.points.push_back(next);
            seg.level_residual = std::max(seg.level_residual, std::abs(next.imag()));
            length += std::abs(next - point);
            point = next;
            if (length > max_length)
                throw Error(ErrorKind::TraceEscape, "critical trajectory from vertex " + std::to_string(z) +
                                                        " exceeds 100x the flat diameter");
        }
        throw Error(ErrorKind::TraceEscape, "critical trajectory from vertex " + std::to_string(z) + " does not close");
    }
};

} // namespace

CriticalGraph trace_critical(const TriMesh& mesh, const ComplexForm& omega, const std::vector<ZeroPoint>& zeros,
                             double flat_diameter) {
    CriticalGraph graph;
    graph.zeros = zeros;
    if (zeros.empty()) return graph;
    for (const ZeroPoint& z : zeros) graph.prongs.push_back(prongs_at(mesh, omega, z.vertex));

    const Tracer tracer(mesh, omega, zeros, flat_diameter);
    // Arrival of every prong, to check that the two directions pair up.
    std::vector<std::vector<std::pair<int, int>>> arrival(zeros.size());
    std::vector<std::vector<int>> segment_of(zeros.size());
    for (std::size_t zi = 0; zi < zeros.size(); ++zi) {
        arrival[zi].assign(graph.prongs[zi].size(), {-1, -1});
        segment_of[zi].assign(graph.prongs[zi].size(), -1);
        for (int pi = 0; pi < static_cast<int>(graph.prongs[zi].size()); ++pi) {
            CriticalSegment seg = tracer.trace(static_cast<int>(zi), pi, graph.prongs);
            if (seg.to_prong < 0)
                throw Error(ErrorKind::TraceEscape, "critical trajectory reached a zero with no matching prong");
            arrival[zi][pi] = {seg.to_zero, seg.to_prong};
            if (graph.prongs[zi][pi].rightward) {
                segment_of[zi][pi] = static_cast<int>(graph.segments.size());
                graph.total_length += seg.length();
                graph.segments.push_back(std::move(seg));
            }
        }
    }
    for (std::size_t zi = 0; zi < zeros.size(); ++zi)
        for (std::size_t pi = 0; pi < arrival[zi].size(); ++pi) {
            auto [zj, pj] = arrival[zi][pi];
            if (arrival[zj][pj] != std::pair<int, int>(static_cast<int>(zi), static_cast<int>(pi)))
                throw Error(ErrorKind::PathDependence, "critical trajectories do not pair up in both directions");
        }
    return graph;
}

} // namespace sfc
