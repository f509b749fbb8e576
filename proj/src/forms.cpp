#include "sfc/forms.hpp"

#include "sfc/error.hpp"
#include "sfc/rng.hpp"

namespace sfc {

OneForm d0(const TriMesh& mesh, const VertexFunction& f) {
    OneForm w(mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto [a, b] = mesh.edge_vertices(e);
        w[e] = f[b] - f[a];
    }
    return w;
}

TwoForm d1(const TriMesh& mesh, const OneForm& w) {
    TwoForm t(mesh.num_faces());
    for (int f = 0; f < mesh.num_faces(); ++f)
        t[f] = form_on(mesh, w, 3 * f) + form_on(mesh, w, 3 * f + 1) + form_on(mesh, w, 3 * f + 2);
    return t;
}

Eigen::SparseMatrix<double> d0_matrix(const TriMesh& mesh) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto [a, b] = mesh.edge_vertices(e);
        trips.emplace_back(e, a, -1.0);
        trips.emplace_back(e, b, 1.0);
    }
    Eigen::SparseMatrix<double> m(mesh.num_edges(), mesh.num_vertices());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

Eigen::SparseMatrix<double> d1_matrix(const TriMesh& mesh) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(3 * mesh.num_faces());
    for (int h = 0; h < mesh.num_halfedges(); ++h)
        trips.emplace_back(TriMesh::he_face(h), mesh.he_edge(h), static_cast<double>(mesh.he_sign(h)));
    Eigen::SparseMatrix<double> m(mesh.num_faces(), mesh.num_edges());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

double max_abs(const TwoForm& t) { return t.size() ? t.cwiseAbs().maxCoeff() : 0.0; }

double loop_integral(const TriMesh& mesh, const OneForm& w, const Loop& loop) {
    double sum = 0.0;
    for (int h : loop.halfedges) sum += form_on(mesh, w, h);
    return sum;
}

OneForm sliced_jump_form(const TriMesh& mesh, const Loop& loop, const VertexFunction& values) {
    // Corner values: on a loop vertex the corners left of the loop get 1,
    // those right of it 0. Elsewhere the vertex value is shared by all corners.
    std::vector<double> corner(mesh.num_halfedges());
    for (int h = 0; h < mesh.num_halfedges(); ++h) corner[h] = values[mesh.he_source(h)];

    const int n = static_cast<int>(loop.halfedges.size());
    std::vector<char> on_loop(mesh.num_vertices(), 0);
    for (int v : loop.vertices) {
        if (on_loop[v]) throw Error(ErrorKind::SliceFailure, "loop visits vertex " + std::to_string(v) + " twice");
        on_loop[v] = 1;
    }
    for (int i = 0; i < n; ++i) {
        const int out = loop.halfedges[i];
        const int in = loop.halfedges[(i + n - 1) % n];
        const int v = mesh.he_source(out);
        const int back = mesh.he_twin(in); // v -> previous loop vertex
        for (int h : mesh.outgoing(v)) corner[h] = 0.0;
        int h = out;
        int steps = 0;
        while (h != back) {
            corner[h] = 1.0;
            h = mesh.rotate_ccw(h);
            if (++steps > mesh.degree(v)) throw Error(ErrorKind::SliceFailure, "cannot split the star of a loop vertex");
        }
    }

    OneForm w(mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const int h = mesh.edge_halfedge(e);
        w[e] = corner[TriMesh::he_next(h)] - corner[h];
    }
    return w;
}

std::vector<OneForm> cohomology_basis(const TriMesh& mesh, const HomologyBasis& basis, std::uint64_t seed) {
    std::vector<OneForm> forms;
    forms.reserve(basis.loops.size());
    for (std::size_t k = 0; k < basis.loops.size(); ++k) {
        Rng rng = Rng::substream(seed, "cohomology-rand", k);
        VertexFunction values(mesh.num_vertices());
        for (int v = 0; v < mesh.num_vertices(); ++v) values[v] = rng.uniform_open();
        forms.push_back(sliced_jump_form(mesh, basis.loops[k], values));
    }
    return forms;
}

Eigen::MatrixXd periods(const TriMesh& mesh, const std::vector<OneForm>& forms, const HomologyBasis& basis) {
    Eigen::MatrixXd p(forms.size(), basis.loops.size());
    for (std::size_t i = 0; i < forms.size(); ++i)
        for (std::size_t j = 0; j < basis.loops.size(); ++j) p(i, j) = loop_integral(mesh, forms[i], basis.loops[j]);
    return p;
}

Eigen::MatrixXd period_matrix(const TriMesh& mesh, const std::vector<OneForm>& forms, const HomologyBasis& basis) {
    Eigen::MatrixXd p = periods(mesh, forms, basis);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(p);
    lu.setThreshold(1e-9);
    const int need = static_cast<int>(std::min(p.rows(), p.cols()));
    if (p.rows() != p.cols() || lu.rank() < need)
        throw Error(ErrorKind::RankDeficient, "period matrix has rank " + std::to_string(lu.rank()) + ", expected " +
                                                  std::to_string(p.rows()));
    return p;
}

} // namespace sfc
