#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sfc/forms.hpp"

namespace sfc {

/// Isometric planar layout of a face: corner 0 at the origin, corner 1 at
/// (l, 0), corner 2 at (x2, y2) with y2 > 0.
struct FaceFrame {
    double l = 0, x2 = 0, y2 = 0;
    double area() const { return 0.5 * l * y2; }
};

FaceFrame face_frame(const TriMesh& mesh, int f);
std::vector<FaceFrame> face_frames(const TriMesh& mesh);

/// Constant covector (a, b) in the face frame reproducing the form on the
/// edges leaving corner 0.
Eigen::Vector2d face_coefficients(const TriMesh& mesh, const FaceFrame& frame, const OneForm& w, int f);
Eigen::Vector2d face_coefficients(const TriMesh& mesh, const OneForm& w, int f);

/// Rotation by a right angle: a dx + b dy -> a dy - b dx.
inline Eigen::Vector2d hodge_star_face(const Eigen::Vector2d& ab) { return {-ab.y(), ab.x()}; }

/// w_ij = cot(alpha) + cot(beta) of the two angles opposite each edge.
Eigen::VectorXd cotan_weights(const TriMesh& mesh);

/// Weighted divergence sum_j w_ij w([vi, vj]) at every vertex.
Eigen::VectorXd divergence(const TriMesh& mesh, const Eigen::VectorXd& weights, const OneForm& w);

/// Cotan Laplacian with vertex 0 pinned, factored once.
class HarmonicSolver {
public:
    HarmonicSolver(const TriMesh& mesh, Eigen::VectorXd weights);
    ~HarmonicSolver();
    HarmonicSolver(HarmonicSolver&&) noexcept;

    /// w + d0(h) with zero divergence.
    OneForm harmonize(const OneForm& w) const;
    /// The potential h of the exact correction, h(0) = 0.
    VertexFunction correction(const OneForm& w) const;
    const Eigen::VectorXd& weights() const { return weights_; }

private:
    struct Impl;
    const TriMesh* mesh_;
    Eigen::VectorXd weights_;
    std::unique_ptr<Impl> impl_;
};

OneForm harmonize(const TriMesh& mesh, const Eigen::VectorXd& weights, const OneForm& w);

/// Integral of wi ^ wj over the surface.
double wedge_integral(const TriMesh& mesh, const OneForm& wi, const OneForm& wj);
/// Sum over faces of |(a, b)|^2 area.
double dirichlet_energy(const TriMesh& mesh, const OneForm& w);
/// Integral of (star w) ^ v, evaluated face by face.
double star_wedge_integral(const TriMesh& mesh, const OneForm& w, const OneForm& v);

Eigen::MatrixXd wedge_matrix(const TriMesh& mesh, const std::vector<OneForm>& basis);

struct HolomorphicForm {
    OneForm omega;
    OneForm conj;
};

/// Harmonic basis with its wedge Gram matrix and the conjugation map.
struct HodgeBasis {
    Eigen::VectorXd weights;
    std::vector<OneForm> harmonic;
    Eigen::MatrixXd wedge;       // W(k, l) = int harmonic[k] ^ harmonic[l]
    Eigen::MatrixXd conjugation; // column i: coefficients of conj(harmonic[i])
    std::vector<HolomorphicForm> forms;

    OneForm combine(const Eigen::VectorXd& coeffs) const;
    int size() const { return static_cast<int>(harmonic.size()); }
};

/// Coefficients lambda with conj(w) = sum lambda_i basis[i].
Eigen::VectorXd conjugate_coefficients(const TriMesh& mesh, const std::vector<OneForm>& basis,
                                       const Eigen::MatrixXd& wedge, const OneForm& w);
/// Conjugate harmonic form of w in the span of the basis. Throws SingularGram.
OneForm conjugate(const TriMesh& mesh, const std::vector<OneForm>& basis, const OneForm& w);

HodgeBasis hodge_basis(const TriMesh& mesh, const std::vector<OneForm>& cohomology);

/// Cohomology basis, harmonic projection and conjugation in one go.
std::vector<HolomorphicForm> holomorphic_basis(const TriMesh& mesh, std::uint64_t seed);

} // namespace sfc
