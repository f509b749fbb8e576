#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sfc/covering.hpp"
#include "sfc/forms.hpp"
#include "sfc/graph.hpp"
#include "sfc/topology.hpp"

namespace sfc {

/// Per-round message counts of one protocol run.
struct Transcript {
    std::string protocol;
    std::vector<long> messages; // messages sent in round r

    long total() const;
};

/// Header `protocol,round,messages`.
void write_transcript_csv(std::ostream& out, const std::vector<Transcript>& transcripts);

/// Synchronous rounds over a communication graph. Every message must cross
/// exactly one graph edge; anything else is rejected with InvalidArgument.
class Network {
public:
    Network(const CommGraph& graph, std::string protocol);

    void send(int from, int to);
    void end_round();
    int round() const { return static_cast<int>(transcript_.messages.size()); }
    const Transcript& transcript() const { return transcript_; }

private:
    const CommGraph* graph_;
    Transcript transcript_;
    long pending_ = 0;
};

/// Result of a hop-count flood on a plain graph.
struct FloodLocus {
    std::vector<int> hop;    // round in which the node was reached
    std::vector<int> parent; // -1 at the seed
    std::vector<int> branch; // the seed's child whose subtree holds the node (-1 at the seed)
    std::vector<std::pair<int, int>> meeting; // non-tree edges between different branches, (lower, higher) sorted
    Transcript transcript;
};

/// BFS flood from `seed`; a node reached by several senders in one round keeps
/// the lowest id. Throws DisconnectedGraph.
FloodLocus flood_cut_locus(const CommGraph& graph, int seed);

/// The cut locus on a mesh: a front of faces floods out from the lowest face at
/// `seed`, each face adopting the lowest-id face that reached it first; the edges
/// no front crossed are where fronts met. Dangling branches are trimmed, so what
/// remains is the locus itself. The complement is a disk (SliceFailure otherwise).
CutGraph flood_cut_locus(const TriMesh& mesh, int seed, Transcript* transcript = nullptr);

struct Diffusion {
    OneForm form;          // omega + d0(f)
    VertexFunction f;
    double residual = 0;   // largest vertex update in the last sweep
    int rounds = 0;
    Transcript transcript;
};

/// Gauss-Seidel heat diffusion in node order:
///   f(i) <- sum_j w_ij (f(j) + omega(i -> j)) / sum_j w_ij
/// until the largest update is at most `tolerance`. Throws NonConvergence
/// (with the last residual) after `max_rounds` sweeps or on blow-up.
Diffusion diffuse_harmonic(const TriMesh& mesh, const Eigen::VectorXd& weights, const OneForm& omega,
                           double tolerance = 1e-12, int max_rounds = 200000);

struct FloodChart {
    Wedges wedges;
    std::vector<cplx> value; // per wedge
    Transcript transcript;
};

/// phi flooded from `root` across face sides of the sliced mesh (never across
/// the cut): phi(j) = phi(i) + (omega, conj)(i -> j).
FloodChart flood_integrate(const TriMesh& mesh, const CutGraph& cut, const ComplexForm& omega, int root);

} // namespace sfc
