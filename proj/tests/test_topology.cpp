#include <doctest.h>

#include <set>

#include "sfc/error.hpp"
#include "sfc/topology.hpp"

using namespace sfc;

TEST_CASE("dual spanning tree reaches every face") {
    TriMesh tet = generate_tetrahedron();
    CHECK(dual_spanning_tree(tet, 0).num_tree_edges() == 3);
    TriMesh torus = generate_torus_grid(8, 8);
    DualTree tree = dual_spanning_tree(torus, 0);
    CHECK(tree.num_tree_edges() == 127);
    TriMesh g2 = generate_genus_g(2, 16);
    DualTree t2 = dual_spanning_tree(g2, 0);
    CHECK(t2.num_tree_edges() == g2.num_faces() - 1);
    CHECK(std::set<int>(t2.order.begin(), t2.order.end()).size() == static_cast<std::size_t>(g2.num_faces()));
}

TEST_CASE("cut graph size and disk property") {
    TriMesh tet = generate_tetrahedron();
    CutGraph ct = cut_graph(tet, dual_spanning_tree(tet));
    CHECK(ct.size() == 3);
    CHECK(slices_to_disk(tet, ct));

    TriMesh torus = generate_torus_grid(8, 8);
    CutGraph cg = cut_graph(torus, dual_spanning_tree(torus));
    CHECK(cg.size() == 65);
    CHECK(sliced_euler_characteristic(torus, cg) == 1);
    CHECK(slices_to_disk(torus, cg));

    for (int g = 1; g <= 3; ++g) {
        TriMesh mesh = generate_genus_g(g, 16);
        for (int root : {0, mesh.num_faces() / 2}) {
            CutGraph cut = cut_graph(mesh, dual_spanning_tree(mesh, root));
            CHECK(cut.size() == mesh.num_edges() - mesh.num_faces() + 1);
            CHECK(slices_to_disk(mesh, cut));
        }
    }
}

TEST_CASE("removing a cut edge breaks the disk property") {
    TriMesh torus = generate_torus_grid(6, 6);
    CutGraph cut = cut_graph(torus, dual_spanning_tree(torus));
    std::vector<int> fewer(cut.edges.begin() + 1, cut.edges.end());
    CHECK_FALSE(slices_to_disk(torus, make_cut_graph(torus, fewer)));
}

TEST_CASE("homology basis has 2g closed loops in the cut graph") {
    TriMesh torus = generate_torus_grid(8, 8);
    HomologyBasis hb = homology_basis(torus, cut_graph(torus, dual_spanning_tree(torus)));
    CHECK(hb.loops.size() == 2);

    for (int g = 2; g <= 3; ++g) {
        TriMesh mesh = generate_genus_g(g, 16);
        CutGraph cut = cut_graph(mesh, dual_spanning_tree(mesh));
        HomologyBasis basis = homology_basis(mesh, cut);
        REQUIRE(basis.loops.size() == static_cast<std::size_t>(2 * g));
        for (const Loop& loop : basis.loops) {
            CHECK(loop_is_closed(mesh, loop));
            std::set<int> distinct(loop.vertices.begin(), loop.vertices.end());
            CHECK(distinct.size() == loop.vertices.size());
            for (int h : loop.halfedges) CHECK(cut.has(mesh.he_edge(h)));
        }
    }
}

TEST_CASE("genus zero has no homology") {
    TriMesh tet = generate_tetrahedron();
    CutGraph cut = cut_graph(tet, dual_spanning_tree(tet));
    try {
        homology_basis(tet, cut);
        FAIL("expected GenusZero");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GenusZero);
    }
}
