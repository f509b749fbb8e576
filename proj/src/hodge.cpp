#include "sfc/hodge.hpp"

#include <cmath>

#include <Eigen/SparseCholesky>

#include "sfc/error.hpp"

namespace sfc {

FaceFrame face_frame(const TriMesh& mesh, int f) {
    const double l01 = mesh.edge_length(mesh.he_edge(3 * f));
    const double l12 = mesh.edge_length(mesh.he_edge(3 * f + 1));
    const double l20 = mesh.edge_length(mesh.he_edge(3 * f + 2));
    FaceFrame frame;
    frame.l = l01;
    frame.x2 = (l01 * l01 + l20 * l20 - l12 * l12) / (2 * l01);
    // 2 * area / l01 is better conditioned than sqrt(l20^2 - x2^2).
    frame.y2 = 2 * mesh.face_area(f) / l01;
    if (!(frame.y2 > 0) || !std::isfinite(frame.y2))
        throw Error(ErrorKind::DegenerateFace, "face " + std::to_string(f) + " has zero area");
    return frame;
}

std::vector<FaceFrame> face_frames(const TriMesh& mesh) {
    std::vector<FaceFrame> frames(mesh.num_faces());
    for (int f = 0; f < mesh.num_faces(); ++f) frames[f] = face_frame(mesh, f);
    return frames;
}

Eigen::Vector2d face_coefficients(const TriMesh& mesh, const FaceFrame& fr, const OneForm& w, int f) {
    const double w01 = form_on(mesh, w, 3 * f);
    const double w02 = -form_on(mesh, w, 3 * f + 2);
    const double a = w01 / fr.l;
    return {a, (w02 - a * fr.x2) / fr.y2};
}

Eigen::Vector2d face_coefficients(const TriMesh& mesh, const OneForm& w, int f) {
    return face_coefficients(mesh, face_frame(mesh, f), w, f);
}

namespace {

Eigen::Matrix2Xd coefficient_table(const TriMesh& mesh, const std::vector<FaceFrame>& frames, const OneForm& w) {
    Eigen::Matrix2Xd table(2, mesh.num_faces());
    for (int f = 0; f < mesh.num_faces(); ++f) table.col(f) = face_coefficients(mesh, frames[f], w, f);
    return table;
}

double wedge_from_tables(const std::vector<FaceFrame>& frames, const Eigen::Matrix2Xd& p, const Eigen::Matrix2Xd& q) {
    double sum = 0.0;
    for (std::size_t f = 0; f < frames.size(); ++f)
        sum += (p(0, f) * q(1, f) - q(0, f) * p(1, f)) * frames[f].area();
    return sum;
}

} // namespace

Eigen::VectorXd cotan_weights(const TriMesh& mesh) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.num_edges());
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const FaceFrame fr = face_frame(mesh, f);
        const Eigen::Vector2d p[3] = {{0, 0}, {fr.l, 0}, {fr.x2, fr.y2}};
        for (int i = 0; i < 3; ++i) {
            const int k = (i + 2) % 3;
            const Eigen::Vector2d u = p[i] - p[k], v = p[(i + 1) % 3] - p[k];
            const double cross = u.x() * v.y() - u.y() * v.x();
            w[mesh.he_edge(3 * f + i)] += u.dot(v) / std::abs(cross);
        }
    }
    for (int e = 0; e < w.size(); ++e)
        if (!std::isfinite(w[e])) throw Error(ErrorKind::DegenerateFace, "non-finite cotan weight on edge " + std::to_string(e));
    return w;
}

Eigen::VectorXd divergence(const TriMesh& mesh, const Eigen::VectorXd& weights, const OneForm& w) {
    Eigen::VectorXd div = Eigen::VectorXd::Zero(mesh.num_vertices());
    for (int h = 0; h < mesh.num_halfedges(); ++h)
        div[mesh.he_source(h)] += weights[mesh.he_edge(h)] * form_on(mesh, w, h);
    return div;
}

struct HarmonicSolver::Impl {
    Eigen::SparseMatrix<double> L;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

HarmonicSolver::HarmonicSolver(const TriMesh& mesh, Eigen::VectorXd weights)
    : mesh_(&mesh), weights_(std::move(weights)), impl_(std::make_unique<Impl>()) {
    const int n = mesh.num_vertices() - 1;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(4 * mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto [a, b] = mesh.edge_vertices(e);
        const double w = weights_[e];
        // Row/column of vertex v is v - 1; vertex 0 is pinned.
        if (a > 0) trips.emplace_back(a - 1, a - 1, w);
        if (b > 0) trips.emplace_back(b - 1, b - 1, w);
        if (a > 0 && b > 0) {
            trips.emplace_back(a - 1, b - 1, -w);
            trips.emplace_back(b - 1, a - 1, -w);
        }
    }
    impl_->L.resize(n, n);
    impl_->L.setFromTriplets(trips.begin(), trips.end());
    impl_->ldlt.compute(impl_->L);
    if (impl_->ldlt.info() != Eigen::Success)
        throw Error(ErrorKind::SolverFailure, "cotan Laplacian factorization failed");
}

HarmonicSolver::~HarmonicSolver() = default;
HarmonicSolver::HarmonicSolver(HarmonicSolver&&) noexcept = default;

VertexFunction HarmonicSolver::correction(const OneForm& w) const {
    const TriMesh& mesh = *mesh_;
    // Solve sum_j w_ij (h_j - h_i + w_ij) = 0, i.e. L h = div(w).
    Eigen::VectorXd div = divergence(mesh, weights_, w);
    Eigen::VectorXd rhs = div.tail(mesh.num_vertices() - 1);
    Eigen::VectorXd x = impl_->ldlt.solve(rhs);
    if (impl_->ldlt.info() != Eigen::Success || !x.allFinite())
        throw Error(ErrorKind::SolverFailure, "cotan Laplacian solve failed");
    x += impl_->ldlt.solve(rhs - impl_->L * x);
    VertexFunction h(mesh.num_vertices());
    h[0] = 0.0;
    h.tail(mesh.num_vertices() - 1) = x;
    return h;
}

OneForm HarmonicSolver::harmonize(const OneForm& w) const { return w + d0(*mesh_, correction(w)); }

OneForm harmonize(const TriMesh& mesh, const Eigen::VectorXd& weights, const OneForm& w) {
    return HarmonicSolver(mesh, weights).harmonize(w);
}

double wedge_integral(const TriMesh& mesh, const OneForm& wi, const OneForm& wj) {
    const auto frames = face_frames(mesh);
    return wedge_from_tables(frames, coefficient_table(mesh, frames, wi), coefficient_table(mesh, frames, wj));
}

double dirichlet_energy(const TriMesh& mesh, const OneForm& w) {
    double sum = 0.0;
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const FaceFrame fr = face_frame(mesh, f);
        sum += face_coefficients(mesh, fr, w, f).squaredNorm() * fr.area();
    }
    return sum;
}

double star_wedge_integral(const TriMesh& mesh, const OneForm& w, const OneForm& v) {
    double sum = 0.0;
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const FaceFrame fr = face_frame(mesh, f);
        const Eigen::Vector2d s = hodge_star_face(face_coefficients(mesh, fr, w, f));
        const Eigen::Vector2d q = face_coefficients(mesh, fr, v, f);
        sum += (s.x() * q.y() - q.x() * s.y()) * fr.area();
    }
    return sum;
}

Eigen::MatrixXd wedge_matrix(const TriMesh& mesh, const std::vector<OneForm>& basis) {
    const auto frames = face_frames(mesh);
    std::vector<Eigen::Matrix2Xd> tables;
    for (const auto& w : basis) tables.push_back(coefficient_table(mesh, frames, w));
    const int n = static_cast<int>(basis.size());
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            W(i, j) = wedge_from_tables(frames, tables[i], tables[j]);
            W(j, i) = -W(i, j);
        }
    return W;
}

Eigen::VectorXd conjugate_coefficients(const TriMesh& mesh, const std::vector<OneForm>& basis,
                                       const Eigen::MatrixXd& wedge, const OneForm& w) {
    const int n = static_cast<int>(basis.size());
    Eigen::FullPivLU<Eigen::MatrixXd> lu(wedge.transpose());
    lu.setThreshold(1e-10);
    if (lu.rank() < n)
        throw Error(ErrorKind::SingularGram, "wedge matrix has rank " + std::to_string(lu.rank()) + " < " + std::to_string(n));
    Eigen::VectorXd rhs(n);
    for (int k = 0; k < n; ++k) rhs[k] = star_wedge_integral(mesh, w, basis[k]);
    return lu.solve(rhs);
}

OneForm conjugate(const TriMesh& mesh, const std::vector<OneForm>& basis, const OneForm& w) {
    const Eigen::VectorXd lambda = conjugate_coefficients(mesh, basis, wedge_matrix(mesh, basis), w);
    OneForm out = OneForm::Zero(mesh.num_edges());
    for (int i = 0; i < lambda.size(); ++i) out += lambda[i] * basis[i];
    return out;
}

OneForm HodgeBasis::combine(const Eigen::VectorXd& coeffs) const {
    OneForm out = OneForm::Zero(harmonic.empty() ? 0 : harmonic[0].size());
    for (int i = 0; i < coeffs.size(); ++i) out += coeffs[i] * harmonic[i];
    return out;
}

HodgeBasis hodge_basis(const TriMesh& mesh, const std::vector<OneForm>& cohomology) {
    HodgeBasis hb;
    hb.weights = cotan_weights(mesh);
    HarmonicSolver solver(mesh, hb.weights);
    for (const auto& w : cohomology) hb.harmonic.push_back(solver.harmonize(w));
    hb.wedge = wedge_matrix(mesh, hb.harmonic);

    const int n = hb.size();
    hb.conjugation.resize(n, n);
    for (int i = 0; i < n; ++i)
        hb.conjugation.col(i) = conjugate_coefficients(mesh, hb.harmonic, hb.wedge, hb.harmonic[i]);
    for (int i = 0; i < n; ++i) hb.forms.push_back({hb.harmonic[i], hb.combine(hb.conjugation.col(i))});
    return hb;
}

std::vector<HolomorphicForm> holomorphic_basis(const TriMesh& mesh, std::uint64_t seed) {
    if (genus(mesh) < 1) throw Error(ErrorKind::GenusZero, "holomorphic forms need genus >= 1");
    const HomologyBasis basis = homology_basis(mesh, cut_graph(mesh, dual_spanning_tree(mesh)));
    return hodge_basis(mesh, cohomology_basis(mesh, basis, seed)).forms;
}

} // namespace sfc
