#include <algorithm>
#include <cmath>

#include "sfc/curve.hpp"
#include "sfc/error.hpp"
#include "sfc/rng.hpp"

namespace sfc {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

std::pair<double, double> lattice_coords(cplx p, const std::array<cplx, 2>& l) {
    const double det = cross(l[0], l[1]);
    return {cross(p, l[1]) / det, cross(l[0], p) / det};
}

double point_segment(cplx p, cplx a, cplx b) {
    const cplx ab = b - a;
    const double n = std::norm(ab);
    const double t = n > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / n, 0.0, 1.0) : 0.0;
    return std::abs(p - (a + t * ab));
}

constexpr int kTranslates[9][2] = {{0, 0}, {-1, 0}, {1, 0}, {0, -1}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};

cplx translate(const Handle& h, int i) { return double(kTranslates[i][0]) * h.lattice[0] + double(kTranslates[i][1]) * h.lattice[1]; }

} // namespace

double hit_tolerance(const Handle& handle) { return 1e-7 * handle.diagonal(); }

std::pair<int, cplx> default_start(const CoveringAtlas& atlas, const TriMesh& mesh, double slope, int v) {
    if (v < 0 || v >= mesh.num_vertices()) throw Error(ErrorKind::InvalidArgument, "start vertex out of range");
    int handle = -1, clipped_handle = -1;
    cplx point, clipped_point;
    for (int k = 0; k < static_cast<int>(atlas.handles.size()) && handle < 0; ++k)
        for (const auto& tri : atlas.handles[k].triangles) {
            const Face& f = mesh.face(tri.face);
            const int c = f[0] == v ? 0 : f[1] == v ? 1 : f[2] == v ? 2 : -1;
            if (c < 0) continue;
            if (tri.clip_side == 0) {
                handle = k;
                point = tri.corners[c];
                break;
            }
            if (clipped_handle < 0) {
                clipped_handle = k;
                clipped_point = tri.corners[c];
            }
        }
    if (handle < 0) {
        handle = clipped_handle;
        point = clipped_point;
    }
    if (handle < 0) throw Error(ErrorKind::LocationMiss, "vertex is in no handle");
    const Handle& h = atlas.handles[handle];
    point = h.to_fundamental(point);

    // Off the slits and lattice corners: a small step along the slope direction.
    const double eps = 1e3 * hit_tolerance(h);
    const cplx dir = cplx(1, slope) / std::abs(cplx(1, slope));
    for (int i = 0; i < 4; ++i) {
        const cplx corner = h.origin + double(i & 1) * h.lattice[0] + double(i >> 1) * h.lattice[1];
        if (std::abs(point - corner) <= eps) return {handle, h.to_fundamental(point + eps * dir)};
    }
    for (const Slit& s : h.slits)
        for (int i = 0; i < 9; ++i) {
            const cplx t = translate(h, i);
            if (point_segment(point, s.start + t, s.end + t) <= eps) {
                point = h.to_fundamental(point + eps * dir);
                return {handle, point};
            }
        }
    return {handle, point};
}

DenseCurve trace_dense(const CoveringAtlas& atlas, double slope, int handle, cplx start, double length) {
    if (!(length > 0)) throw Error(ErrorKind::InvalidArgument, "curve length must be positive");
    if (handle < 0 || handle >= static_cast<int>(atlas.handles.size()))
        throw Error(ErrorKind::InvalidArgument, "start handle out of range");
    DenseCurve curve;
    curve.slope = slope;
    curve.length = length;
    curve.start_handle = handle;
    curve.direction = cplx(1, slope) / std::abs(cplx(1, slope));
    const cplx d = curve.direction;

    int h = handle;
    cplx p = atlas.handles[h].to_fundamental(start);
    curve.start = p;
    double remaining = length;
    bool first = true;
    const int max_events = 100000000;
    const double done = 1e-12 * length;
    for (int event = 0; remaining > done; ++event) {
        if (event > max_events) throw Error(ErrorKind::InvalidArgument, "dense trace did not advance");
        const Handle& H = atlas.handles[h];
        const double eps_hit = hit_tolerance(H);
        const double tiny = 1e-12 * H.diagonal();

        auto [s0, t0] = lattice_coords(p - H.origin, H.lattice);
        auto [ds, dt] = lattice_coords(d, H.lattice);
        const double tau_s = ds > 0 ? (1 - s0) / ds : ds < 0 ? -s0 / ds : 1e300;
        const double tau_t = dt > 0 ? (1 - t0) / dt : dt < 0 ? -t0 / dt : 1e300;
        const double tau_wall = std::max(std::min(tau_s, tau_t), 0.0);

        double tau = std::min(tau_wall, remaining);
        int hit_slit = -1, hit_translate = 0;
        if (d.imag() != 0)
            for (int si = 0; si < static_cast<int>(H.slits.size()); ++si)
                for (int i = 0; i < 9; ++i) {
                    const cplx a = H.slits[si].start + translate(H, i), b = H.slits[si].end + translate(H, i);
                    const double ts = (a.imag() - p.imag()) / d.imag();
                    if (!(ts > tiny) || ts > tau) continue;
                    const double x = p.real() + ts * d.real();
                    if (x < std::min(a.real(), b.real()) || x > std::max(a.real(), b.real())) continue;
                    tau = ts;
                    hit_slit = si;
                    hit_translate = i;
                }

        const cplx q = p + tau * d;
        for (const Slit& s : H.slits)
            for (int i = 0; i < 9; ++i)
                for (cplx e : {s.start, s.end}) {
                    const double dist = point_segment(e + translate(H, i), p, q);
                    curve.closest_endpoint = std::min(curve.closest_endpoint, dist);
                    if (dist <= eps_hit)
                        throw Error(ErrorKind::EndpointHit, "dense curve passes a slit endpoint; choose another slope");
                }
        for (int i = 0; i < 4; ++i) {
            const cplx corner = H.origin + double(i & 1) * H.lattice[0] + double(i >> 1) * H.lattice[1];
            if (first && std::abs(corner - p) <= eps_hit) continue; // the start itself
            curve.closest_lattice_point = std::min(curve.closest_lattice_point, point_segment(corner, p, q));
        }
        if (tau > 0) curve.segments.push_back({h, p, q});
        remaining -= tau;
        first = false;
        if (remaining <= done) break;

        if (hit_slit >= 0) {
            const Slit& s = H.slits[hit_slit];
            const cplx local = q - translate(H, hit_translate);
            const double offset = std::abs(local - s.start);
            // Going up we meet the side below the slit, going down the side above it.
            const auto& pieces = d.imag() > 0 ? s.bottom : s.top;
            const GluePiece* best = nullptr;
            double best_gap = 1e300;
            for (const GluePiece& piece : pieces) {
                const double gap = offset < piece.from ? piece.from - offset : offset > piece.to ? offset - piece.to : 0;
                if (gap < best_gap) {
                    best_gap = gap;
                    best = &piece;
                }
            }
            if (!best) throw Error(ErrorKind::WrongComponentCount, "slit side has no glue pieces");
            h = best->partner_handle;
            p = atlas.handles[h].to_fundamental(local + best->translation);
            ++curve.slit_crossings;
        } else {
            // Wrap across the wall(s) reached and pin that coordinate, so the
            // next step cannot start on the wall it just crossed.
            auto [s1, t1] = lattice_coords(q - H.origin, H.lattice);
            const double near = 1e-12 * std::max(tau_s == 1e300 ? 0.0 : tau_s, tau_t == 1e300 ? 0.0 : tau_t);
            if (tau_s <= tau + near) s1 = ds > 0 ? 0.0 : 1.0;
            if (tau_t <= tau + near) t1 = dt > 0 ? 0.0 : 1.0;
            s1 = std::clamp(s1, 0.0, 1.0);
            t1 = std::clamp(t1, 0.0, 1.0);
            p = H.origin + s1 * H.lattice[0] + t1 * H.lattice[1];
        }
    }
    return curve;
}

double choose_slope(const CoveringAtlas& atlas, int handle, cplx start, std::uint64_t seed, double initial) {
    double perimeter = 0;
    for (const Handle& h : atlas.handles) perimeter = std::max(perimeter, h.perimeter());
    double k = initial;
    for (int attempt = 0; attempt < 100; ++attempt) {
        try {
            const DenseCurve probe = trace_dense(atlas, k, handle, start, 200 * perimeter);
            double eps = 1e300;
            for (const Handle& h : atlas.handles) eps = std::min(eps, hit_tolerance(h));
            if (probe.closest_lattice_point > eps) return k;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::EndpointHit) throw;
        }
        Rng rng = Rng::substream(seed, "slope-perturb", static_cast<std::uint64_t>(attempt));
        k = initial + 1e-3 * rng.uniform_open();
    }
    throw Error(ErrorKind::SlopeSelectionFailure, "no slope in 100 attempts avoids the slit endpoints");
}

std::vector<GapSample> density_profile(const DenseCurve& curve, const CoveringAtlas& atlas, int samples, int levels) {
    if (samples < 1 || levels < 1) throw Error(ErrorKind::InvalidArgument, "density profile needs samples and levels");
    struct Probe {
        int handle;
        cplx p;
        double dist;
    };
    std::vector<Probe> probes;
    double diameter = 0;
    for (int k = 0; k < static_cast<int>(atlas.handles.size()); ++k) {
        const Handle& h = atlas.handles[k];
        diameter = std::max(diameter, h.diagonal());
        for (int i = 0; i < samples; ++i)
            for (int j = 0; j < samples; ++j)
                probes.push_back({k, h.origin + (i + 0.5) / samples * h.lattice[0] + (j + 0.5) / samples * h.lattice[1],
                                  1e300});
    }

    std::vector<double> prefixes;
    for (int m = levels - 1; m >= 0; --m) prefixes.push_back(curve.length / std::pow(2.0, m));

    std::vector<GapSample> out{{0.0, diameter}};
    std::size_t next = 0;
    double walked = 0;
    auto record = [&](double prefix) {
        double gap = 0;
        for (const Probe& q : probes) gap = std::max(gap, q.dist);
        out.push_back({prefix, std::min(gap, diameter)});
    };
    for (const FlatSegment& seg : curve.segments) {
        const double len = seg.length();
        double from = 0;
        while (from < len || len == 0) {
            const double until = next < prefixes.size() ? std::min(len, prefixes[next] - walked) : len;
            const cplx dir = len > 0 ? (seg.end - seg.start) / len : cplx(0);
            const cplx a = seg.start + from * dir, b = seg.start + until * dir;
            const Handle& h = atlas.handles[seg.handle];
            for (Probe& q : probes) {
                if (q.handle != seg.handle) continue;
                for (int i = 0; i < 9; ++i) q.dist = std::min(q.dist, point_segment(q.p + translate(h, i), a, b));
            }
            if (next < prefixes.size() && walked + until >= prefixes[next] - 1e-12 * curve.length) {
                record(prefixes[next]);
                ++next;
            }
            if (len == 0 || until >= len) break;
            from = until;
        }
        walked += len;
    }
    while (next < prefixes.size()) record(prefixes[next++]);
    return out;
}

double aperiodicity(const DenseCurve& curve, const CoveringAtlas& atlas, double transversal) {
    std::vector<std::vector<double>> hits(atlas.handles.size());
    for (const FlatSegment& seg : curve.segments) {
        const Handle& h = atlas.handles[seg.handle];
        auto [sa, ta] = lattice_coords(seg.start - h.origin, h.lattice);
        auto [sb, tb] = lattice_coords(seg.end - h.origin, h.lattice);
        if ((sa - transversal) * (sb - transversal) >= 0 || sa == sb) continue;
        const double u = (transversal - sa) / (sb - sa);
        hits[seg.handle].push_back(ta + u * (tb - ta));
    }
    double best = 1e300;
    for (std::size_t k = 0; k < hits.size(); ++k) {
        auto& t = hits[k];
        if (t.size() < 2) continue;
        std::sort(t.begin(), t.end());
        const double scale = std::abs(atlas.handles[k].lattice[1]); // flat length of the transversal
        for (std::size_t i = 1; i < t.size(); ++i) best = std::min(best, (t[i] - t[i - 1]) * scale);
        best = std::min(best, (1 - t.back() + t.front()) * scale);
    }
    return best;
}

} // namespace sfc
