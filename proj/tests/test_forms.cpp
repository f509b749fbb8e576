#include <doctest.h>

#include <cmath>

#include "sfc/error.hpp"
#include "sfc/forms.hpp"
#include "sfc/rng.hpp"

using namespace sfc;

namespace {

struct Setup {
    TriMesh mesh;
    HomologyBasis basis;
    explicit Setup(TriMesh m) : mesh(std::move(m)) {
        basis = homology_basis(mesh, cut_graph(mesh, dual_spanning_tree(mesh)));
    }
};

double distance_to_integer(double x) { return std::abs(x - std::round(x)); }

} // namespace

TEST_CASE("d0 of a constant and of an indicator") {
    TriMesh mesh = generate_torus_grid(5, 4);
    CHECK(d0(mesh, VertexFunction::Constant(mesh.num_vertices(), 3.5)).cwiseAbs().maxCoeff() == 0.0);

    const int vj = 7;
    VertexFunction f = VertexFunction::Zero(mesh.num_vertices());
    f[vj] = 1.0;
    OneForm w = d0(mesh, f);
    for (int h = 0; h < mesh.num_halfedges(); ++h) {
        double expected = mesh.he_target(h) == vj ? 1.0 : (mesh.he_source(h) == vj ? -1.0 : 0.0);
        CHECK(form_on(mesh, w, h) == expected);
    }
}

TEST_CASE("d1 of d0 vanishes for random functions") {
    TriMesh mesh = generate_genus_g(2, 16);
    Rng rng(11);
    double worst = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        VertexFunction f(mesh.num_vertices());
        for (int v = 0; v < mesh.num_vertices(); ++v) f[v] = 2 * rng.uniform_open() - 1;
        worst = std::max(worst, max_abs(d1(mesh, d0(mesh, f))));
    }
    CHECK(worst <= 1e-12);
    auto D0 = d0_matrix(mesh);
    auto D1 = d1_matrix(mesh);
    Eigen::SparseMatrix<double> zero = D1 * D0;
    CHECK(zero.norm() == 0.0);
}

TEST_CASE("d1 of a face boundary indicator") {
    TriMesh mesh = generate_torus_grid(4, 4);
    const int f = 5;
    OneForm w = OneForm::Zero(mesh.num_edges());
    for (int i = 0; i < 3; ++i) w[mesh.he_edge(3 * f + i)] = mesh.he_sign(3 * f + i);
    TwoForm t = d1(mesh, w);
    CHECK(t[f] == 3.0);
}

TEST_CASE("cohomology basis forms are closed with integral periods") {
    for (int g : {1, 2, 3}) {
        Setup s(generate_genus_g(g, 16));
        auto forms = cohomology_basis(s.mesh, s.basis, 7);
        REQUIRE(forms.size() == static_cast<std::size_t>(2 * g));
        for (const OneForm& w : forms) CHECK(max_abs(d1(s.mesh, w)) <= 1e-12);

        Eigen::MatrixXd p = period_matrix(s.mesh, forms, s.basis);
        for (int i = 0; i < p.rows(); ++i) {
            bool some_nonzero = false;
            for (int j = 0; j < p.cols(); ++j) {
                CHECK(distance_to_integer(p(i, j)) <= 1e-9);
                some_nonzero = some_nonzero || std::abs(p(i, j)) >= 1 - 1e-9;
            }
            CHECK(some_nonzero);
        }
        CHECK(std::abs(p.determinant()) >= 1 - 1e-9);
    }
}

TEST_CASE("periods are invariant under exact forms") {
    Setup s(generate_genus_g(2, 16));
    auto forms = cohomology_basis(s.mesh, s.basis, 3);
    Eigen::MatrixXd before = periods(s.mesh, forms, s.basis);
    Rng rng(5);
    VertexFunction h(s.mesh.num_vertices());
    for (int v = 0; v < s.mesh.num_vertices(); ++v) h[v] = 10 * rng.uniform_open();
    for (auto& w : forms) w += d0(s.mesh, h);
    CHECK((periods(s.mesh, forms, s.basis) - before).cwiseAbs().maxCoeff() <= 1e-9);

    std::vector<OneForm> exact{d0(s.mesh, h)};
    CHECK(periods(s.mesh, exact, s.basis).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("rank-deficient period matrix is reported") {
    Setup s(generate_genus_g(2, 16));
    auto forms = cohomology_basis(s.mesh, s.basis, 3);
    forms[1] = forms[0];
    CHECK_THROWS_AS(period_matrix(s.mesh, forms, s.basis), Error);
}

TEST_CASE("cohomology basis is reproducible from its seed") {
    Setup s(generate_genus_g(2, 16));
    auto a = cohomology_basis(s.mesh, s.basis, 42);
    auto b = cohomology_basis(s.mesh, s.basis, 42);
    auto c = cohomology_basis(s.mesh, s.basis, 43);
    CHECK(a[0] == b[0]);
    CHECK_FALSE(a[0] == c[0]);
}
