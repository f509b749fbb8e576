#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "sfc/covering.hpp"
#include "sfc/error.hpp"

namespace sfc {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Coefficients of p in the basis (u, v).
std::pair<double, double> coords(cplx p, cplx u, cplx v) {
    const double det = cross(u, v);
    return {cross(p, v) / det, cross(u, p) / det};
}

long long lattice_gcd(long long a, long long b) { return std::gcd(std::llabs(a), std::llabs(b)); }

// Hermite form of an integer lattice in Z^2: rows (p1, p2) and (0, q2).
struct IntLattice {
    long long p1 = 0, p2 = 0, q2 = 0;

    void insert(long long w1, long long w2) {
        if (w1 == 0) {
            q2 = lattice_gcd(q2, w2);
        } else if (p1 == 0) {
            // Old p (first coordinate 0) moves into q.
            q2 = lattice_gcd(q2, p2);
            p1 = w1;
            p2 = w2;
        } else {
            // Extended Euclid on the first coordinates.
            long long a = p1, b = w1, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
            while (b != 0) {
                const long long q = a / b;
                std::tie(a, b) = std::make_pair(b, a - q * b);
                std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
                std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
            }
            const long long g = a;
            const long long np2 = s0 * p2 + t0 * w2;
            const long long rest = (w1 / g) * p2 - (p1 / g) * w2;
            p1 = g;
            p2 = np2;
            q2 = lattice_gcd(q2, rest);
        }
        if (p1 < 0) {
            p1 = -p1;
            p2 = -p2;
        }
        if (q2 != 0) p2 %= q2;
    }
};

// Basis of the lattice generated by the translations. Throws when they do not span rank 2.
std::array<cplx, 2> lattice_basis(std::vector<cplx> ts, double tol) {
    std::erase_if(ts, [&](cplx t) { return std::abs(t) <= tol; });
    std::sort(ts.begin(), ts.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    if (ts.empty()) throw Error(ErrorKind::WrongComponentCount, "component has no periods");
    const cplx u = ts.front();
    cplx v = 0;
    for (cplx t : ts)
        if (std::abs(cross(u, t)) > 1e-6 * std::abs(u) * std::abs(t)) {
            v = t;
            break;
        }
    if (v == cplx(0)) throw Error(ErrorKind::WrongComponentCount, "component periods are all parallel");

    // Express every translation over (u, v) with a small common denominator.
    constexpr int max_den = 24;
    std::vector<std::pair<double, double>> cs;
    long long den = 1;
    for (cplx t : ts) {
        auto [a, b] = coords(t, u, v);
        int q = 1;
        while (q <= max_den && (std::abs(a * q - std::round(a * q)) > 1e-6 || std::abs(b * q - std::round(b * q)) > 1e-6))
            ++q;
        if (q > max_den) throw Error(ErrorKind::WrongComponentCount, "component periods are not commensurate");
        den = std::lcm(den, static_cast<long long>(q));
        cs.emplace_back(a, b);
    }
    IntLattice lat;
    for (auto [a, b] : cs) lat.insert(std::llround(a * den), std::llround(b * den));
    if (lat.p1 == 0 || lat.q2 == 0) throw Error(ErrorKind::WrongComponentCount, "component periods have rank 1");
    const double d = static_cast<double>(den);
    cplx b0 = (static_cast<double>(lat.p1) * u + static_cast<double>(lat.p2) * v) / d;
    cplx b1 = static_cast<double>(lat.q2) * v / d;

    // Gauss reduction.
    for (int it = 0; it < 100; ++it) {
        if (std::abs(b1) < std::abs(b0)) std::swap(b0, b1);
        const double mu = std::round((b1 * std::conj(b0)).real() / std::norm(b0));
        if (mu == 0) break;
        b1 -= mu * b0;
    }
    if (cross(b0, b1) < 0) b1 = -b1;
    return {b0, b1};
}

// Corners of face g reached across halfedge h of a face developed at `pos`.
std::array<cplx, 3> develop_across(const TriMesh& mesh, const ComplexForm& omega, const std::array<cplx, 3>& pos,
                                   int h) {
    const int t = mesh.he_twin(h);
    const int k = t % 3;
    std::array<cplx, 3> out;
    out[k] = pos[(h % 3 + 1) % 3];
    out[(k + 1) % 3] = pos[h % 3];
    out[(k + 2) % 3] = out[(k + 1) % 3] + omega.on(mesh, TriMesh::he_next(t));
    return out;
}

struct Development {
    std::vector<char> placed;
    std::vector<std::array<cplx, 3>> pos;
    std::vector<cplx> translations;
};

// Breadth-first unfolding over the faces in `nodes`, collecting the period
// mismatches on non-tree adjacencies.
Development develop(const TriMesh& mesh, const ComplexForm& omega, const std::vector<char>& nodes, int root) {
    const int nf = mesh.num_faces();
    Development dev;
    dev.placed.assign(nf, 0);
    dev.pos.resize(nf);
    const int h0 = 3 * root;
    dev.pos[root][0] = 0;
    dev.pos[root][1] = omega.on(mesh, h0);
    dev.pos[root][2] = dev.pos[root][1] + omega.on(mesh, h0 + 1);
    dev.placed[root] = 1;
    std::queue<int> queue;
    queue.push(root);
    while (!queue.empty()) {
        const int f = queue.front();
        queue.pop();
        for (int i = 0; i < 3; ++i) {
            const int h = 3 * f + i;
            const int g = TriMesh::he_face(mesh.he_twin(h));
            if (!nodes[g]) continue;
            const std::array<cplx, 3> p = develop_across(mesh, omega, dev.pos[f], h);
            if (!dev.placed[g]) {
                dev.placed[g] = 1;
                dev.pos[g] = p;
                queue.push(g);
            } else {
                const int k = mesh.he_twin(h) % 3;
                dev.translations.push_back(dev.pos[g][k] - p[k]);
            }
        }
    }
    return dev;
}

// Extend a development to extra faces through already placed neighbours.
void extend(const TriMesh& mesh, const ComplexForm& omega, Development& dev, const std::vector<int>& extra) {
    bool progress = true;
    while (progress) {
        progress = false;
        for (int f : extra) {
            if (dev.placed[f]) continue;
            for (int i = 0; i < 3 && !dev.placed[f]; ++i) {
                const int t = mesh.he_twin(3 * f + i);
                const int g = TriMesh::he_face(t);
                if (!dev.placed[g]) continue;
                dev.pos[f] = develop_across(mesh, omega, dev.pos[g], t);
                dev.placed[f] = 1;
                progress = true;
            }
        }
    }
}

cplx reduce(cplx p, cplx origin, const std::array<cplx, 2>& lattice) {
    auto [s, t] = coords(p - origin, lattice[0], lattice[1]);
    return p - std::floor(s) * lattice[0] - std::floor(t) * lattice[1];
}

// Lattice vector taking a to b, if there is one within tol.
bool lattice_equivalent(cplx a, cplx b, const std::array<cplx, 2>& lattice, double tol, cplx* shift) {
    auto [s, t] = coords(b - a, lattice[0], lattice[1]);
    const cplx l = std::round(s) * lattice[0] + std::round(t) * lattice[1];
    if (std::abs(b - a - l) > tol) return false;
    if (shift) *shift = l;
    return true;
}

struct Piece {
    int segment;
    cplx start, end;
};

// Chains pieces end to start (mod the lattice) into runs.
std::vector<std::vector<Piece>> chain(std::vector<Piece> pieces, const std::array<cplx, 2>& lattice, double tol) {
    std::vector<std::vector<Piece>> runs;
    std::vector<char> used(pieces.size(), 0);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (used[i]) continue;
        used[i] = 1;
        std::vector<Piece> run{pieces[i]};
        bool grown = true;
        while (grown) {
            grown = false;
            for (std::size_t j = 0; j < pieces.size(); ++j) {
                if (used[j]) continue;
                cplx shift;
                if (lattice_equivalent(pieces[j].start, run.back().end, lattice, tol, &shift)) {
                    Piece p = pieces[j];
                    p.start += shift;
                    p.end += shift;
                    run.push_back(p);
                    used[j] = grown = true;
                } else if (lattice_equivalent(pieces[j].end, run.front().start, lattice, tol, &shift)) {
                    Piece p = pieces[j];
                    p.start += shift;
                    p.end += shift;
                    run.insert(run.begin(), p);
                    used[j] = grown = true;
                }
            }
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

GluePiece glue_piece(int segment, double from, double to) {
    GluePiece p;
    p.segment = segment;
    p.from = from;
    p.to = to;
    return p;
}

// Prefer a horizontal first generator (the cylinder core) and a second one
// pointing up with its real part in [0, |l0|).
std::array<cplx, 2> canonical(std::array<cplx, 2> l) {
    auto flatness = [](cplx v) { return std::abs(v.imag()) / std::abs(v); };
    if (flatness(l[1]) < flatness(l[0])) std::swap(l[0], l[1]);
    if (flatness(l[0]) < 1e-6) {
        if (l[0].real() < 0) l[0] = -l[0];
        if (l[1].imag() < 0) l[1] = -l[1];
        l[1] -= std::floor(l[1].real() / l[0].real() + 1e-9) * l[0];
    } else if (cross(l[0], l[1]) < 0) {
        l[1] = -l[1];
    }
    return l;
}

} // namespace

cplx Handle::to_fundamental(cplx p) const { return reduce(p, origin, lattice); }

double Handle::diagonal() const { return std::max(std::abs(lattice[0] + lattice[1]), std::abs(lattice[0] - lattice[1])); }

double Handle::perimeter() const { return 2 * (std::abs(lattice[0]) + std::abs(lattice[1])); }

CoveringAtlas segment_handles(const TriMesh& mesh, const ComplexForm& omega, const CriticalGraph& graph, int genus) {
    const int nf = mesh.num_faces();
    const int ns = static_cast<int>(graph.segments.size());
    CoveringAtlas atlas;
    atlas.genus = genus;
    atlas.zeros = graph.zeros;

    // Faces touched by each segment.
    std::vector<std::vector<int>> crossing(nf);
    for (int s = 0; s < ns; ++s)
        for (int f : graph.segments[s].faces)
            if (crossing[f].empty() || crossing[f].back() != s) crossing[f].push_back(s);

    // Components of the untouched faces.
    std::vector<int> comp(nf, -1);
    int ncomp = 0;
    for (int f0 = 0; f0 < nf; ++f0) {
        if (!crossing[f0].empty() || comp[f0] >= 0) continue;
        std::queue<int> queue;
        queue.push(f0);
        comp[f0] = ncomp;
        while (!queue.empty()) {
            const int f = queue.front();
            queue.pop();
            for (int i = 0; i < 3; ++i) {
                const int g = TriMesh::he_face(mesh.he_twin(3 * f + i));
                if (crossing[g].empty() && comp[g] < 0) {
                    comp[g] = ncomp;
                    queue.push(g);
                }
            }
        }
        ++ncomp;
    }
    if (ncomp != genus)
        throw Error(ErrorKind::WrongComponentCount,
                    "critical graph leaves " + std::to_string(ncomp) + " components, expected " + std::to_string(genus));

    // Which component lies above and below each segment, by majority over the untouched neighbours.
    struct Contact {
        int face, halfedge, neighbour;
    };
    atlas.segment_handles.assign(ns, {-1, -1});
    std::vector<std::array<Contact, 2>> contact(ns);
    for (int s = 0; s < ns; ++s) {
        const CriticalSegment& seg = graph.segments[s];
        std::vector<std::array<int, 2>> votes(ncomp, {0, 0});
        std::vector<std::array<Contact, 2>> first(ncomp, {Contact{-1, -1, -1}, Contact{-1, -1, -1}});
        for (std::size_t i = 0; i < seg.faces.size(); ++i) {
            const int f = seg.faces[i];
            for (int c = 0; c < 3; ++c) {
                const int h = 3 * f + c;
                const int g = TriMesh::he_face(mesh.he_twin(h));
                if (comp[g] < 0) continue;
                const double level = seg.corners[i][c].imag() + seg.corners[i][(c + 1) % 3].imag();
                const int side = level > 0 ? 0 : 1;
                if (votes[comp[g]][side]++ == 0) first[comp[g]][side] = {static_cast<int>(i), h, g};
            }
        }
        for (int side = 0; side < 2; ++side) {
            int best = -1;
            for (int k = 0; k < ncomp; ++k)
                if (votes[k][side] > 0 && (best < 0 || votes[k][side] > votes[best][side])) best = k;
            if (best < 0) throw Error(ErrorKind::WrongComponentCount, "critical segment borders no component");
            atlas.segment_handles[s][side] = best;
            contact[s][side] = first[best][side];
        }
    }

    atlas.face_handle = comp;
    atlas.segment_offset.assign(ns, {cplx(0), cplx(0)});
    for (int k = 0; k < ncomp; ++k) {
        Handle handle;
        std::vector<char> nodes(nf, 0);
        std::vector<int> extra;
        int root = -1;
        for (int f = 0; f < nf; ++f) {
            if (comp[f] == k) {
                nodes[f] = 1;
                if (root < 0) root = f;
                continue;
            }
            bool self_only = !crossing[f].empty(), borders = false;
            for (int s : crossing[f]) {
                const auto& sides = atlas.segment_handles[s];
                if (sides[0] != k || sides[1] != k) self_only = false;
                if (sides[0] == k || sides[1] == k) borders = true;
            }
            if (self_only) nodes[f] = 1;
            else if (borders) extra.push_back(f);
        }

        Development dev = develop(mesh, omega, nodes, root);
        double local = 0;
        int counted = 0;
        for (int f = 0; f < nf; ++f)
            if (dev.placed[f]) {
                local += std::abs(dev.pos[f][1] - dev.pos[f][0]);
                ++counted;
            }
        const double tol = 1e-7 * std::max(local / std::max(counted, 1), 1e-300);
        handle.lattice = canonical(lattice_basis(dev.translations, tol));
        extend(mesh, omega, dev, extra);

        for (int f = 0; f < nf; ++f) {
            if (nodes[f]) handle.faces.push_back(f);
            if (nodes[f] && comp[f] < 0) atlas.face_handle[f] = k;
        }

        // Offsets from trace coordinates into this handle, taken at a contact face on the right side.
        for (int s = 0; s < ns; ++s)
            for (int side = 0; side < 2; ++side) {
                if (atlas.segment_handles[s][side] != k) continue;
                const Contact& c = contact[s][side];
                const int t = mesh.he_twin(c.halfedge);
                // Shared vertex: source of the contact halfedge, corner (t % 3 + 1) of the neighbour.
                const cplx here = dev.pos[c.neighbour][(t % 3 + 1) % 3];
                const cplx trace = graph.segments[s].corners[c.face][c.halfedge % 3];
                atlas.segment_offset[s][side] = here - trace;
            }

        // Triangles; faces crossed by a gluing segment keep only this handle's side.
        for (int f = 0; f < nf; ++f) {
            if (!dev.placed[f]) continue;
            HandleTriangle tri{f, dev.pos[f]};
            if (!nodes[f])
                for (int s : crossing[f]) {
                    const auto& sides = atlas.segment_handles[s];
                    if (sides[0] == sides[1]) continue;
                    const int side = sides[0] == k ? 0 : 1;
                    tri.clip_side = side == 0 ? 1 : -1;
                    tri.clip_level = atlas.segment_offset[s][side].imag();
                    break;
                }
            handle.triangles.push_back(tri);
        }
        atlas.handles.push_back(std::move(handle));
    }

    // Slits from the gluing segments.
    for (int k = 0; k < ncomp; ++k) {
        Handle& handle = atlas.handles[k];
        const double tol = 1e-6 * handle.diagonal();
        std::vector<Piece> tops, bottoms;
        for (int s = 0; s < ns; ++s) {
            const auto& sides = atlas.segment_handles[s];
            const cplx hol = graph.segments[s].holonomy();
            if (sides[0] == sides[1]) {
                if (sides[0] == k) {
                    cplx shift;
                    if (!lattice_equivalent(atlas.segment_offset[s][0], atlas.segment_offset[s][1], handle.lattice, tol,
                                            &shift))
                        throw Error(ErrorKind::WrongComponentCount, "self-glued segment does not close a torus");
                }
                continue;
            }
            if (std::abs(hol.imag()) > 1e-4 * std::abs(hol))
                throw Error(ErrorKind::NonHorizontalSlit, "critical segment " + std::to_string(s) + " is not horizontal");
            // The handle lies above the segment on side 0, so it sees the segment from above.
            if (sides[0] == k) tops.push_back({s, atlas.segment_offset[s][0], atlas.segment_offset[s][0] + hol});
            if (sides[1] == k) bottoms.push_back({s, atlas.segment_offset[s][1], atlas.segment_offset[s][1] + hol});
        }
        auto top_runs = chain(tops, handle.lattice, tol);
        auto bottom_runs = chain(bottoms, handle.lattice, tol);
        if (top_runs.size() != bottom_runs.size())
            throw Error(ErrorKind::WrongComponentCount, "slit sides do not pair up on a handle");
        std::vector<char> used(bottom_runs.size(), 0);
        for (const auto& top : top_runs) {
            Slit slit;
            slit.start = top.front().start;
            slit.end = top.back().end;
            int match = -1;
            cplx shift;
            for (std::size_t j = 0; j < bottom_runs.size() && match < 0; ++j) {
                if (used[j]) continue;
                const auto& b = bottom_runs[j];
                const double len = std::abs(b.back().end - b.front().start);
                if (std::abs(len - slit.length()) <= 1e-6 * std::max(1.0, len) &&
                    lattice_equivalent(b.front().start, slit.start, handle.lattice, tol, &shift))
                    match = static_cast<int>(j);
            }
            if (match < 0) throw Error(ErrorKind::WrongComponentCount, "slit sides do not coincide on a handle");
            used[match] = 1;
            for (const Piece& p : top)
                slit.top.push_back(glue_piece(p.segment, std::abs(p.start - slit.start), std::abs(p.end - slit.start)));
            for (const Piece& p : bottom_runs[match]) {
                const cplx a = p.start + shift, b = p.end + shift;
                slit.bottom.push_back(glue_piece(p.segment, std::abs(a - slit.start), std::abs(b - slit.start)));
            }
            handle.slits.push_back(std::move(slit));
        }
    }

    // Re-base each handle at its first slit start.
    for (int k = 0; k < ncomp; ++k) {
        Handle& handle = atlas.handles[k];
        const cplx base = handle.slits.empty() ? cplx(0) : handle.slits.front().start;
        // Centre the fundamental parallelogram on the first slit so the slit is interior.
        handle.origin = handle.slits.empty()
                            ? cplx(0)
                            : 0.5 * (handle.slits.front().end - base) - 0.5 * (handle.lattice[0] + handle.lattice[1]);
        for (auto& tri : handle.triangles) {
            for (cplx& c : tri.corners) c -= base;
            tri.clip_level -= base.imag();
        }
        for (Slit& slit : handle.slits) {
            slit.start -= base;
            slit.end -= base;
        }
        for (int s = 0; s < ns; ++s)
            for (int side = 0; side < 2; ++side)
                if (atlas.segment_handles[s][side] == k) atlas.segment_offset[s][side] -= base;
    }

    // Partners: the piece of the same segment on the other handle.
    for (int k = 0; k < ncomp; ++k)
        for (Slit& slit : atlas.handles[k].slits)
            for (int top = 0; top < 2; ++top)
                for (GluePiece& piece : top ? slit.top : slit.bottom) {
                    const int other = atlas.segment_handles[piece.segment][top ? 1 : 0];
                    const Handle& ph = atlas.handles[other];
                    for (int j = 0; j < static_cast<int>(ph.slits.size()); ++j)
                        for (const GluePiece& q : top ? ph.slits[j].bottom : ph.slits[j].top)
                            if (q.segment == piece.segment) {
                                piece.partner_handle = other;
                                piece.partner_slit = j;
                                piece.partner_top = !top;
                                piece.translation = (ph.slits[j].start + q.from) - (slit.start + piece.from);
                            }
                    if (piece.partner_handle < 0)
                        throw Error(ErrorKind::WrongComponentCount, "slit piece has no partner");
                }
    return atlas;
}

CoveringAtlas torus_atlas(const TriMesh& mesh, const ComplexForm& omega) {
    CriticalGraph empty;
    CoveringAtlas atlas = segment_handles(mesh, omega, empty, 1);
    // Base the single chart at vertex 0.
    Handle& handle = atlas.handles.front();
    cplx base = 0;
    for (const auto& tri : handle.triangles) {
        const Face& f = mesh.face(tri.face);
        const int c = f[0] == 0 ? 0 : f[1] == 0 ? 1 : f[2] == 0 ? 2 : -1;
        if (c >= 0) {
            base = tri.corners[c];
            break;
        }
    }
    for (auto& tri : handle.triangles)
        for (cplx& c : tri.corners) c -= base;
    return atlas;
}

} // namespace sfc
