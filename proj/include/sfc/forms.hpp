#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sfc/mesh.hpp"
#include "sfc/topology.hpp"

namespace sfc {

/// Per-edge value in the canonical (low -> high) orientation.
using OneForm = Eigen::VectorXd;
/// Per-face value on the face orientation.
using TwoForm = Eigen::VectorXd;
using VertexFunction = Eigen::VectorXd;

/// Value of the form on a halfedge, sign included.
inline double form_on(const TriMesh& mesh, const OneForm& w, int h) { return mesh.he_sign(h) * w[mesh.he_edge(h)]; }

OneForm d0(const TriMesh& mesh, const VertexFunction& f);
TwoForm d1(const TriMesh& mesh, const OneForm& w);

/// Sparse E x V and F x E incidence matrices.
Eigen::SparseMatrix<double> d0_matrix(const TriMesh& mesh);
Eigen::SparseMatrix<double> d1_matrix(const TriMesh& mesh);

double max_abs(const TwoForm& t);

double loop_integral(const TriMesh& mesh, const OneForm& w, const Loop& loop);

/// Closed, non-exact form dual to each loop: a vertex function jumping by
/// one across the loop, random in (0,1) away from it.
std::vector<OneForm> cohomology_basis(const TriMesh& mesh, const HomologyBasis& basis, std::uint64_t seed);

/// Single basis form for one loop; `values` are the off-loop vertex values.
OneForm sliced_jump_form(const TriMesh& mesh, const Loop& loop, const VertexFunction& values);

/// P(i, j) = integral of forms[i] over loop j. Throws RankDeficient.
Eigen::MatrixXd period_matrix(const TriMesh& mesh, const std::vector<OneForm>& forms, const HomologyBasis& basis);
/// Same without the rank check.
Eigen::MatrixXd periods(const TriMesh& mesh, const std::vector<OneForm>& forms, const HomologyBasis& basis);

} // namespace sfc
