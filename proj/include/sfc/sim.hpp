#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sfc/curve.hpp"
#include "sfc/graph.hpp"

namespace sfc {

struct SimRecord {
    int step = 0;    // hops
    int visited = 0; // distinct vertices so far
    double coverage = 0;
    std::optional<double> avg_dist; // mean hop distance of unvisited vertices to the visited set
};

struct SimTrace {
    std::string strategy;
    std::uint64_t seed = 0;
    int num_vertices = 0;
    std::vector<SimRecord> records;
};

/// Tour of a breadth-first spanning tree from `root` (children in id order),
/// each tree edge walked twice: 2(V-1) hops. Throws DisconnectedGraph.
DiscretePath euler_path(const CommGraph& graph, int root);

/// Uniform neighbour choice per hop from substream "random-walk" of `seed`.
DiscretePath random_walk(const CommGraph& graph, int start, int steps, std::uint64_t seed);

/// Average hop distance from the unvisited vertices to the visited set (multi-source BFS).
std::optional<double> average_distance(const CommGraph& graph, const std::vector<char>& visited);

/// Samples every `stride` hops, starting at hop 0, plus the final hop.
SimTrace measure(const CommGraph& graph, const DiscretePath& path, int stride, const std::string& strategy = "",
                 std::uint64_t seed = 0);

/// First hop count at which the path has visited at least `count` distinct vertices (-1 if never).
int hops_to_visit(const DiscretePath& path, int num_vertices, long count);

/// Distinct vertices visited within the first `hops` hops.
int visited_after(const DiscretePath& path, int num_vertices, int hops);

/// Average distance at the first hop where `count` vertices have been visited.
std::optional<double> distance_at_visited(const CommGraph& graph, const DiscretePath& path, long count);

/// Largest number of times one vertex occurs in the path.
int max_multiplicity(const DiscretePath& path, int num_vertices);

struct Mule {
    std::string strategy;
    std::uint64_t seed = 0;
    DiscretePath path;
};

struct FleetResult {
    std::vector<SimTrace> mules;
    SimTrace joint;              // step = round; each mule makes one hop per round
    Eigen::MatrixXi overlap;     // vertices visited by both mules after the last round
    Eigen::MatrixXi first_overlap; // overlap of each mule's first `first_k` distinct vertices
    std::vector<Eigen::MatrixXi> overlap_steps; // overlap at each recorded round
    int first_k = 0;
    int rounds = 0;
};

/// Advances all paths in lockstep for `rounds` rounds (a finished path stays put).
/// Rounds are recorded every `stride`, starting at round 0, plus the last round.
FleetResult run_fleet(const CommGraph& graph, const std::vector<Mule>& mules, int rounds, int stride, int first_k);

/// Header `step,visited,coverage,avg_dist,strategy,seed`; avg_dist is empty once everything is visited.
void write_trace_csv(std::ostream& out, const std::vector<SimTrace>& traces);
/// Header `step,mule_a,mule_b,overlap`, one row per recorded round and mule pair.
void write_overlap_steps_csv(std::ostream& out, const FleetResult& fleet);
void write_overlap_csv(std::ostream& out, const Eigen::MatrixXi& overlap, const std::vector<std::string>& names);

} // namespace sfc
