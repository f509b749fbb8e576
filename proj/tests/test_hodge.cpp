#include <doctest.h>

#include <cmath>

#include "sfc/error.hpp"
#include "sfc/hodge.hpp"
#include "sfc/rng.hpp"

using namespace sfc;

namespace {

// Sphere made of two copies of one triangle with the given side lengths.
TriMesh doubled_triangle(double a, double b, double c) {
    TriMesh m({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 2, 1}});
    std::vector<double> len(3);
    for (int e = 0; e < 3; ++e) {
        auto [u, v] = m.edge_vertices(e);
        len[e] = (u == 0 && v == 1) ? a : (u == 1 && v == 2) ? b : c;
    }
    return m.with_edge_lengths(len);
}

double weight_of(const TriMesh& m, const Eigen::VectorXd& w, int u, int v) {
    return w[m.he_edge(m.find_halfedge(u, v))];
}

struct Genus2 {
    TriMesh mesh = generate_genus_g(2, 16);
    HomologyBasis basis = homology_basis(mesh, cut_graph(mesh, dual_spanning_tree(mesh)));
    std::vector<OneForm> cohom = cohomology_basis(mesh, basis, 7);
    HodgeBasis hb = hodge_basis(mesh, cohom);
};

} // namespace

TEST_CASE("cotan weights of closed-form configurations") {
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    TriMesh eq = doubled_triangle(1, 1, 1);
    CHECK(weight_of(eq, cotan_weights(eq), 0, 1) == doctest::Approx(2 * inv_sqrt3).epsilon(1e-12));

    TriMesh right = doubled_triangle(std::sqrt(2.0), 1, 1); // edge 0-1 is the hypotenuse
    CHECK(std::abs(weight_of(right, cotan_weights(right), 0, 1)) <= 1e-12);

    TriMesh obtuse = doubled_triangle(std::sqrt(3.0), 1, 1);
    CHECK(weight_of(obtuse, cotan_weights(obtuse), 0, 1) == doctest::Approx(-2 * inv_sqrt3).epsilon(1e-12));

    TriMesh flat = generate_flat_torus(6, 6);
    Eigen::VectorXd w = cotan_weights(flat);
    for (int e = 0; e < flat.num_edges(); ++e) {
        const bool diagonal = flat.edge_length(e) > 1.2 / 6;
        CHECK(w[e] == doctest::Approx(diagonal ? 0.0 : 2.0).epsilon(1e-12));
    }
}

TEST_CASE("hodge star on face coefficients") {
    CHECK(hodge_star_face({1, 0}) == Eigen::Vector2d(0, 1));
    CHECK(hodge_star_face({0, 1}) == Eigen::Vector2d(-1, 0));
    CHECK(hodge_star_face(hodge_star_face({0.3, -2})) == Eigen::Vector2d(-0.3, 2));
}

TEST_CASE("face coefficients reproduce the third edge of a closed form") {
    Genus2 s;
    const OneForm& w = s.hb.harmonic[0];
    double worst = 0;
    for (int f = 0; f < s.mesh.num_faces(); ++f) {
        const FaceFrame fr = face_frame(s.mesh, f);
        const Eigen::Vector2d ab = face_coefficients(s.mesh, fr, w, f);
        const double w12 = form_on(s.mesh, w, 3 * f + 1);
        worst = std::max(worst, std::abs(ab.x() * (fr.x2 - fr.l) + ab.y() * fr.y2 - w12));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("harmonize") {
    Genus2 s;
    const auto& weights = s.hb.weights;
    HarmonicSolver solver(s.mesh, weights);

    Rng rng(2);
    VertexFunction f(s.mesh.num_vertices());
    for (int v = 0; v < f.size(); ++v) f[v] = rng.uniform_open();
    CHECK(solver.harmonize(d0(s.mesh, f)).cwiseAbs().maxCoeff() <= 1e-8);

    const Eigen::MatrixXd before = periods(s.mesh, s.cohom, s.basis);
    const Eigen::MatrixXd after = periods(s.mesh, s.hb.harmonic, s.basis);
    CHECK((before - after).cwiseAbs().maxCoeff() <= 1e-9);
    for (const auto& h : s.hb.harmonic) {
        CHECK(divergence(s.mesh, weights, h).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(max_abs(d1(s.mesh, h)) <= 1e-12);
        CHECK((solver.harmonize(h) - h).cwiseAbs().maxCoeff() <= 1e-8);
    }
    // Free-function path agrees.
    CHECK((harmonize(s.mesh, weights, s.cohom[1]) - s.hb.harmonic[1]).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("wedge integrals") {
    Genus2 s;
    const auto& h = s.hb.harmonic;
    CHECK(std::abs(wedge_integral(s.mesh, h[0], h[0])) <= 1e-12);
    CHECK(std::abs(wedge_integral(s.mesh, h[0], h[1]) + wedge_integral(s.mesh, h[1], h[0])) <= 1e-12);
    const Eigen::MatrixXd& W = s.hb.wedge;
    CHECK((W + W.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(std::abs(W.determinant()) > 1e-6);

    // Energy oracle: face-wise |(a,b)|^2 area equals half the cotan-weighted sum of squares.
    for (const auto& w : h) {
        double cotan_energy = 0;
        for (int e = 0; e < s.mesh.num_edges(); ++e) cotan_energy += 0.5 * s.hb.weights[e] * w[e] * w[e];
        CHECK(dirichlet_energy(s.mesh, w) == doctest::Approx(cotan_energy).epsilon(1e-10));
    }
}

TEST_CASE("conjugate forms") {
    Genus2 s;
    for (const auto& f : s.hb.forms) {
        const double energy = dirichlet_energy(s.mesh, f.omega);
        const double pairing = wedge_integral(s.mesh, f.omega, f.conj);
        CHECK(pairing > 0);
        CHECK(std::abs(pairing - energy) <= 1e-8 * energy);
        CHECK(max_abs(d1(s.mesh, f.conj)) <= 1e-6);
        CHECK(divergence(s.mesh, s.hb.weights, f.conj).cwiseAbs().maxCoeff() <= 1e-8);
    }
    OneForm direct = conjugate(s.mesh, s.hb.harmonic, s.hb.harmonic[2]);
    CHECK((direct - s.hb.forms[2].conj).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("conjugating twice negates exactly on a flat torus") {
    TriMesh flat = generate_flat_torus(8, 8);
    HomologyBasis basis = homology_basis(flat, cut_graph(flat, dual_spanning_tree(flat)));
    HodgeBasis hb = hodge_basis(flat, cohomology_basis(flat, basis, 1));
    for (int i = 0; i < 2; ++i) {
        OneForm twice = conjugate(flat, hb.harmonic, hb.forms[i].conj);
        std::vector<OneForm> diff{twice + hb.harmonic[i]};
        CHECK(periods(flat, diff, basis).cwiseAbs().maxCoeff() <= 1e-6);

        // A constant form on the unit square: the conjugate swaps which loop sees a period.
        Eigen::MatrixXd p = periods(flat, {hb.harmonic[i], hb.forms[i].conj}, basis);
        const int seen = std::abs(p(0, 0)) > 0.5 ? 0 : 1;
        CHECK(std::abs(p(0, 1 - seen)) <= 1e-9);
        CHECK(std::abs(p(1, seen)) <= 1e-9);
        CHECK(std::abs(p(1, 1 - seen)) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("conjugating twice converges to minus identity under refinement") {
    // On curved meshes the discrete conjugation squares to -I only up to discretization error.
    double previous = 1e9;
    for (int res : {16, 32, 64}) {
        TriMesh mesh = generate_genus_g(2, res);
        HomologyBasis basis = homology_basis(mesh, cut_graph(mesh, dual_spanning_tree(mesh)));
        HodgeBasis hb = hodge_basis(mesh, cohomology_basis(mesh, basis, 7));
        const Eigen::MatrixXd err = hb.conjugation * hb.conjugation + Eigen::MatrixXd::Identity(4, 4);
        const double e = err.cwiseAbs().maxCoeff();
        MESSAGE("res " << res << " max |C^2 + I| = " << e);
        CHECK(e < 0.35 * previous);
        previous = e;
    }
}

TEST_CASE("holomorphic basis sizes") {
    CHECK(holomorphic_basis(generate_torus_grid(8, 8), 1).size() == 2);
    auto forms = holomorphic_basis(generate_genus_g(2, 16), 1);
    CHECK(forms.size() == 4);
    CHECK_THROWS_AS(holomorphic_basis(generate_tetrahedron(), 1), Error);
}
