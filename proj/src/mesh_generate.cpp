#include <cmath>
#include <map>
#include <numbers>

#include "sfc/error.hpp"
#include "sfc/mesh.hpp"

namespace sfc {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Face> grid_faces(int n, int m) {
    std::vector<Face> faces;
    faces.reserve(2 * n * m);
    auto id = [&](int i, int j) { return ((i + n) % n) * m + (j + m) % m; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return faces;
}

std::vector<Vec3> revolution_positions(int n, int m, double R, double r) {
    std::vector<Vec3> p(n * m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            const double u = 2 * kPi * i / n, v = 2 * kPi * j / m;
            p[i * m + j] = Vec3((R + r * std::cos(v)) * std::cos(u), (R + r * std::cos(v)) * std::sin(u), r * std::sin(v));
        }
    return p;
}

} // namespace

TriMesh generate_torus_grid(int n, int m, double major_radius, double minor_radius) {
    if (n < 3 || m < 3) throw Error(ErrorKind::InvalidArgument, "torus grid needs n, m >= 3");
    if (!(major_radius > minor_radius && minor_radius > 0))
        throw Error(ErrorKind::InvalidArgument, "torus radii must satisfy R > r > 0");
    return TriMesh(revolution_positions(n, m, major_radius, minor_radius), grid_faces(n, m));
}

TriMesh generate_flat_torus(int n, int m, double width, double height) {
    if (n < 3 || m < 3) throw Error(ErrorKind::InvalidArgument, "flat torus needs n, m >= 3");
    TriMesh mesh(revolution_positions(n, m, 2.0, 1.0), grid_faces(n, m));
    const double dx = width / n, dy = height / m;
    std::vector<double> lengths(mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto [a, b] = mesh.edge_vertices(e);
        int di = std::abs(a / m - b / m), dj = std::abs(a % m - b % m);
        di = std::min(di, n - di);
        dj = std::min(dj, m - dj);
        lengths[e] = std::hypot(di * dx, dj * dy);
    }
    return mesh.with_edge_lengths(std::move(lengths));
}

// Planar domain: g unit squares of half-size 1 in a row along x, each with a
// round hole. The surface is the double of the domain, inflated slightly so
// that the embedding has no zero-area faces.
TriMesh generate_genus_g(int g, int resolution) {
    if (g < 1) throw Error(ErrorKind::InvalidArgument, "genus must be >= 1");
    if (resolution < 4) throw Error(ErrorKind::InvalidArgument, "resolution must be >= 4");
    const double a = 1.0, r0 = 0.45, h0 = 0.12, rim = 0.25;
    const int n = std::max(8, (resolution + 7) / 8 * 8);
    const int m = std::max(2, static_cast<int>(std::lround(std::log(a / r0) * n / (2 * kPi))));
    const double half_width = g * a;

    std::vector<double> centers(g);
    for (int k = 0; k < g; ++k) centers[k] = 2 * a * (k - (g - 1) / 2.0);

    std::vector<Eigen::Vector2d> planar;
    std::vector<char> on_boundary;
    std::map<std::pair<long long, long long>, int> lookup;
    auto add_point = [&](const Eigen::Vector2d& p, bool boundary) {
        const auto key = std::make_pair(std::llround(p.x() * 1e9), std::llround(p.y() * 1e9));
        auto it = lookup.find(key);
        if (it != lookup.end()) return it->second;
        const int id = static_cast<int>(planar.size());
        lookup.emplace(key, id);
        planar.push_back(p);
        on_boundary.push_back(boundary);
        return id;
    };

    std::vector<std::array<int, 3>> tris;
    for (int k = 0; k < g; ++k) {
        std::vector<int> ids(n * (m + 1));
        for (int i = 0; i < n; ++i) {
            const double t = 2 * kPi * i / n;
            const double c = std::cos(t), s = std::sin(t);
            const double R = a / std::max(std::abs(c), std::abs(s));
            for (int j = 0; j <= m; ++j) {
                const double rho = r0 * std::pow(R / r0, static_cast<double>(j) / m);
                Eigen::Vector2d p(centers[k] + rho * c, rho * s);
                if (j == m) {
                    // Snap the square side exactly so neighbouring cells share vertices.
                    if (std::abs(c) >= std::abs(s)) p.x() = centers[k] + (c > 0 ? a : -a);
                    if (std::abs(s) >= std::abs(c)) p.y() = s > 0 ? a : -a;
                }
                const bool boundary =
                    j == 0 || (j == m && (std::abs(p.y()) > a - 1e-12 || std::abs(p.x()) > half_width - 1e-12));
                ids[i * (m + 1) + j] = add_point(p, boundary);
            }
        }
        for (int i = 0; i < n; ++i) {
            const int i1 = (i + 1) % n;
            const double tmid = 2 * kPi * (i + 0.5) / n;
            // Diagonal choice mirrors across both axes.
            const bool q13 = std::cos(tmid) * std::sin(tmid) > 0;
            for (int j = 0; j < m; ++j) {
                const int p00 = ids[i * (m + 1) + j], p01 = ids[i * (m + 1) + j + 1];
                const int p11 = ids[i1 * (m + 1) + j + 1], p10 = ids[i1 * (m + 1) + j];
                if (q13) {
                    tris.push_back({p00, p01, p11});
                    tris.push_back({p00, p11, p10});
                } else {
                    tris.push_back({p00, p01, p10});
                    tris.push_back({p01, p11, p10});
                }
            }
        }
    }

    auto height = [&](const Eigen::Vector2d& p) {
        double d = std::min(half_width - std::abs(p.x()), a - std::abs(p.y()));
        for (double cx : centers) d = std::min(d, std::hypot(p.x() - cx, p.y()) - r0);
        const double t = 1.0 - std::min(std::max(d, 0.0) / rim, 1.0);
        return h0 * std::sqrt(1.0 - t * t);
    };

    const int nd = static_cast<int>(planar.size());
    std::vector<Vec3> positions;
    positions.reserve(2 * nd);
    std::vector<int> bottom(nd);
    for (int v = 0; v < nd; ++v) {
        const double z = on_boundary[v] ? 0.0 : height(planar[v]);
        positions.emplace_back(planar[v].x(), planar[v].y(), z);
    }
    for (int v = 0; v < nd; ++v) {
        if (on_boundary[v]) {
            bottom[v] = v;
        } else {
            bottom[v] = static_cast<int>(positions.size());
            positions.emplace_back(planar[v].x(), planar[v].y(), -positions[v].z());
        }
    }
    std::vector<Face> faces;
    faces.reserve(2 * tris.size());
    for (const auto& t : tris) faces.push_back({t[0], t[1], t[2]});
    for (const auto& t : tris) faces.push_back({bottom[t[0]], bottom[t[2]], bottom[t[1]]});
    return TriMesh(std::move(positions), std::move(faces));
}

} // namespace sfc
