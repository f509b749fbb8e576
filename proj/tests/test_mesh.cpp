#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sfc/error.hpp"
#include "sfc/mesh.hpp"

using namespace sfc;

namespace {

ErrorKind error_kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an sfc::Error");
    return ErrorKind::IoError;
}

std::filesystem::path temp_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "sfc_test_mesh";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("tetrahedron loads from OFF with genus 0 flagged") {
    std::istringstream in("OFF\n4 4 6\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n");
    TriMesh mesh = read_off(in);
    CHECK(mesh.num_vertices() == 4);
    CHECK(mesh.num_edges() == 6);
    CHECK(mesh.num_faces() == 4);
    CHECK(genus(mesh) == 0);

    auto path = temp_file("tet.off");
    {
        std::ofstream out(path);
        write_off(mesh, out);
    }
    std::vector<std::string> warnings;
    TriMesh loaded = load_mesh(path.string(), &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("GenusZero") != std::string::npos);
}

TEST_CASE("8x8 grid torus counts") {
    TriMesh mesh = generate_torus_grid(8, 8);
    CHECK(mesh.num_vertices() == 64);
    CHECK(mesh.num_edges() == 192);
    CHECK(mesh.num_faces() == 128);
    CHECK(genus(mesh) == 1);
}

TEST_CASE("edge bounding three faces is rejected") {
    // Tetrahedron plus a fin on edge (0,1).
    std::istringstream in("OFF\n5 5 0\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n3 0 0\n"
                          "3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n3 0 1 4\n");
    CHECK(error_kind_of([&] { read_off(in); }) == ErrorKind::NonManifold);
}

TEST_CASE("flipped face is an orientation error") {
    std::vector<Vec3> p = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    std::vector<Face> f = {{0, 2, 1}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
    CHECK(error_kind_of([&] { TriMesh(p, f); }) == ErrorKind::InconsistentOrientation);
}

TEST_CASE("degenerate faces are rejected") {
    std::vector<Vec3> p = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}};
    CHECK(error_kind_of([&] { TriMesh(p, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}}); }) == ErrorKind::DegenerateFace);
    CHECK(error_kind_of([&] { TriMesh(p, {{0, 0, 1}}); }) == ErrorKind::DegenerateFace);
}

TEST_CASE("malformed input is a parse error") {
    std::istringstream bad("OFF\n3 1 0\n0 0 0\n1 0\n");
    CHECK(error_kind_of([&] { read_off(bad); }) == ErrorKind::ParseError);
    std::istringstream quad("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
    CHECK(error_kind_of([&] { read_off(quad); }) == ErrorKind::ParseError);
}

TEST_CASE("generated genus-g meshes have the expected Euler characteristic") {
    CHECK(generate_genus_g(1, 16).euler_characteristic() == 0);
    CHECK(generate_genus_g(2, 16).euler_characteristic() == -2);
    CHECK(generate_genus_g(3, 8).euler_characteristic() == -4);
    for (int g = 1; g <= 5; ++g)
        for (int r : {8, 16, 32}) {
            TriMesh mesh = generate_genus_g(g, r);
            CHECK(genus(mesh) == g);
            CHECK(3 * mesh.num_faces() == 2 * mesh.num_edges());
            CHECK(connected_components(mesh) == 1);
        }
}

TEST_CASE("halfedge structure is consistent") {
    TriMesh mesh = generate_genus_g(2, 16);
    for (int h = 0; h < mesh.num_halfedges(); ++h) {
        CHECK(mesh.he_twin(mesh.he_twin(h)) == h);
        CHECK(mesh.he_source(mesh.he_twin(h)) == mesh.he_target(h));
        CHECK(mesh.he_edge(h) == mesh.he_edge(mesh.he_twin(h)));
    }
    int total = 0;
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        for (int h : mesh.outgoing(v)) CHECK(mesh.he_source(h) == v);
        total += mesh.degree(v);
    }
    CHECK(total == 2 * mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        auto [a, b] = mesh.edge_vertices(e);
        CHECK(a < b);
        CHECK(mesh.find_halfedge(a, b) == mesh.edge_halfedge(e));
    }
}

TEST_CASE("save and reload is bit exact") {
    TriMesh mesh = generate_genus_g(2, 16);
    for (MeshFormat fmt : {MeshFormat::OFF, MeshFormat::OBJ}) {
        auto path = temp_file(fmt == MeshFormat::OFF ? "g2.off" : "g2.obj");
        save_mesh(mesh, path.string());
        TriMesh back = load_mesh(path.string());
        REQUIRE(back.num_vertices() == mesh.num_vertices());
        CHECK(back.faces() == mesh.faces());
        bool same = true;
        for (int v = 0; v < mesh.num_vertices(); ++v) same = same && back.position(v) == mesh.position(v);
        CHECK(same);
    }
}

TEST_CASE("OBJ with texture and normal indices") {
    std::istringstream in("# tet\nv 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\n"
                          "f 1/1/1 2/2/2 3/3/3\nf 1//1 4//1 2//1\nf 1 3 4\nf -3 -1 -2\n");
    TriMesh mesh = read_obj(in);
    CHECK(mesh.num_faces() == 4);
    CHECK(mesh.face(3) == Face{1, 3, 2});
}

TEST_CASE("flat torus metric") {
    TriMesh mesh = generate_flat_torus(4, 4);
    CHECK(mesh.has_intrinsic_metric());
    double area = 0;
    for (int f = 0; f < mesh.num_faces(); ++f) area += mesh.face_area(f);
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(format_double(0.1) == "0.1");
}
