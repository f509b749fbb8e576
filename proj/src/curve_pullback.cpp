#include <algorithm>
#include <cmath>

#include "sfc/curve.hpp"
#include "sfc/error.hpp"

namespace sfc {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

Eigen::Vector3d barycentric(cplx p, const std::array<cplx, 3>& c) {
    const double area = cross(c[1] - c[0], c[2] - c[0]);
    const double l0 = cross(c[1] - p, c[2] - p) / area;
    const double l1 = cross(c[2] - p, c[0] - p) / area;
    return {l0, l1, 1.0 - l0 - l1};
}

} // namespace

HandleLocator::HandleLocator(const Handle& handle) : handle_(&handle) {
    const cplx o = handle.origin, a = handle.lattice[0], b = handle.lattice[1];
    double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
    for (cplx c : {o, o + a, o + b, o + a + b}) {
        lo_x = std::min(lo_x, c.real());
        lo_y = std::min(lo_y, c.imag());
        hi_x = std::max(hi_x, c.real());
        hi_y = std::max(hi_y, c.imag());
    }
    const double w = hi_x - lo_x, h = hi_y - lo_y;
    const double n = std::max<double>(1.0, static_cast<double>(handle.triangles.size()));
    cell_ = std::sqrt(w * h / n);
    nx_ = std::max(1, static_cast<int>(std::ceil(w / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(h / cell_)));
    lo_ = cplx(lo_x, lo_y);
    grid_.resize(static_cast<std::size_t>(nx_) * ny_);

    for (int t = 0; t < static_cast<int>(handle.triangles.size()); ++t) {
        const auto& c = handle.triangles[t].corners;
        const cplx centroid = (c[0] + c[1] + c[2]) / 3.0;
        const cplx base = handle.to_fundamental(centroid) - centroid;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j) {
                const cplx shift = base + double(i) * a + double(j) * b;
                double bx0 = 1e300, by0 = 1e300, bx1 = -1e300, by1 = -1e300;
                for (cplx p : c) {
                    bx0 = std::min(bx0, p.real() + shift.real());
                    by0 = std::min(by0, p.imag() + shift.imag());
                    bx1 = std::max(bx1, p.real() + shift.real());
                    by1 = std::max(by1, p.imag() + shift.imag());
                }
                if (bx1 < lo_x || by1 < lo_y || bx0 > hi_x || by0 > hi_y) continue;
                const int x0 = std::clamp(static_cast<int>(std::floor((bx0 - lo_x) / cell_)), 0, nx_ - 1);
                const int x1 = std::clamp(static_cast<int>(std::floor((bx1 - lo_x) / cell_)), 0, nx_ - 1);
                const int y0 = std::clamp(static_cast<int>(std::floor((by0 - lo_y) / cell_)), 0, ny_ - 1);
                const int y1 = std::clamp(static_cast<int>(std::floor((by1 - lo_y) / cell_)), 0, ny_ - 1);
                for (int x = x0; x <= x1; ++x)
                    for (int y = y0; y <= y1; ++y) grid_[static_cast<std::size_t>(y) * nx_ + x].push_back({t, shift});
            }
    }
}

bool HandleLocator::try_locate(cplx p, double eps, LocatedPoint* out) const {
    const cplx q = handle_->to_fundamental(p);
    const int x = std::clamp(static_cast<int>(std::floor((q.real() - lo_.real()) / cell_)), 0, nx_ - 1);
    const int y = std::clamp(static_cast<int>(std::floor((q.imag() - lo_.imag()) / cell_)), 0, ny_ - 1);
    double best = -1e300;
    bool found = false;
    const double scale = handle_->diagonal();
    for (const Entry& e : grid_[static_cast<std::size_t>(y) * nx_ + x]) {
        const HandleTriangle& tri = handle_->triangles[e.triangle];
        std::array<cplx, 3> c{tri.corners[0] + e.shift, tri.corners[1] + e.shift, tri.corners[2] + e.shift};
        const Eigen::Vector3d bary = barycentric(q, c);
        const double inner = bary.minCoeff();
        if (inner < -eps) continue;
        if (tri.clip_side != 0) {
            const double level = tri.clip_level + e.shift.imag();
            if (tri.clip_side > 0 ? q.imag() < level - eps * scale : q.imag() > level + eps * scale) continue;
        }
        // Most interior triangle wins; lower face id on ties.
        if (!found || inner > best || (inner == best && tri.face < out->face)) {
            found = true;
            best = inner;
            out->face = tri.face;
            out->bary = bary;
            const cplx back = p - q;
            out->corners = {c[0] + back, c[1] + back, c[2] + back};
        }
    }
    return found;
}

LocatedPoint HandleLocator::locate(cplx p) const {
    LocatedPoint out;
    if (try_locate(p, 1e-12, &out) || try_locate(p, 1e-9, &out)) return out;
    throw Error(ErrorKind::LocationMiss, "flat point lies in no triangle of the handle");
}

SurfaceCurve pullback(const DenseCurve& curve, const CoveringAtlas& atlas, const TriMesh& mesh) {
    SurfaceCurve out;
    out.origin = curve.start;
    out.direction = curve.direction;
    out.length = curve.length;

    // One flat copy per face, and where each face sits in each handle.
    const int nf = mesh.num_faces();
    out.flat_faces.resize(nf);
    std::vector<char> have(nf, 0);
    std::vector<std::vector<int>> in_handle(atlas.handles.size(), std::vector<int>(nf, -1));
    for (int k = 0; k < static_cast<int>(atlas.handles.size()); ++k)
        for (int t = 0; t < static_cast<int>(atlas.handles[k].triangles.size()); ++t) {
            const HandleTriangle& tri = atlas.handles[k].triangles[t];
            if (in_handle[k][tri.face] < 0 || tri.clip_side == 0) in_handle[k][tri.face] = t;
            if (!have[tri.face]) {
                out.flat_faces[tri.face] = tri.corners;
                have[tri.face] = 1;
            }
        }
    for (int f = 0; f < nf; ++f)
        if (!have[f]) throw Error(ErrorKind::LocationMiss, "face missing from the atlas");

    const HandleLocator locator(atlas.handles.at(curve.start_handle));
    const LocatedPoint start = locator.locate(curve.start);
    int f = start.face;
    std::array<cplx, 3> C = start.corners; // walk coordinates coincide with the start handle's here
    const cplx d = curve.direction;
    int entry = -1; // local edge index we came in through

    // Segment starts, for the resync check.
    std::vector<double> seg_start;
    double acc = 0;
    for (const FlatSegment& s : curve.segments) {
        seg_start.push_back(acc);
        acc += s.length();
    }
    std::size_t next_seg = 1;
    const double tol = 1e-6 * atlas.handles.front().diagonal();

    double s = 0;
    int stalls = 0;
    while (true) {
        const cplx q = out.origin + s * d;
        int exit = -1;
        double tau = 1e300;
        for (int i = 0; i < 3; ++i) {
            if (i == entry) continue;
            const cplx e = C[(i + 1) % 3] - C[i];
            const double den = cross(e, d);
            if (den >= 0) continue;
            const double t = -cross(e, q - C[i]) / den;
            if (t < tau) {
                tau = t;
                exit = i;
            }
        }
        if (exit < 0) throw Error(ErrorKind::LocationMiss, "curve walk found no exit edge");
        tau = std::max(tau, 0.0);
        const double s1 = std::min(s + tau, curve.length);
        SurfacePiece piece;
        piece.face = f;
        piece.a = barycentric(q, C);
        piece.b = barycentric(out.origin + s1 * d, C);
        piece.s0 = s;
        piece.s1 = s1;
        piece.corners = C;

        // Flat segments starting inside this piece must agree with the walk.
        while (next_seg < seg_start.size() && seg_start[next_seg] <= s1) {
            const FlatSegment& fs = curve.segments[next_seg];
            const Handle& H = atlas.handles[fs.handle];
            const int t = in_handle[fs.handle][f];
            if (t >= 0) {
                const cplx here = out.origin + seg_start[next_seg] * d + (H.triangles[t].corners[0] - C[0]);
                const cplx diff = H.to_fundamental(here - fs.start + H.origin + 0.5 * (H.lattice[0] + H.lattice[1])) -
                                  (H.origin + 0.5 * (H.lattice[0] + H.lattice[1]));
                out.resync_error = std::max(out.resync_error, std::abs(diff));
            }
            ++next_seg;
        }
        if (out.resync_error > tol)
            throw Error(ErrorKind::LocationMiss, "surface walk drifted from the flat trace");

        if (s1 > s || out.pieces.empty()) out.pieces.push_back(piece);
        stalls = s1 > s ? 0 : stalls + 1;
        if (stalls > 1000) throw Error(ErrorKind::LocationMiss, "curve walk stalled at a vertex");
        s = s1;
        if (s >= curve.length) break;

        const int h = 3 * f + exit;
        const int t = mesh.he_twin(h);
        const int g = TriMesh::he_face(t);
        const auto& ref = out.flat_faces[g];
        const cplx shift = C[(exit + 1) % 3] - ref[t % 3];
        C = {ref[0] + shift, ref[1] + shift, ref[2] + shift};
        f = g;
        entry = t % 3;
    }
    return out;
}

} // namespace sfc
