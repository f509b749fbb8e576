#include <algorithm>
#include <ostream>
#include <queue>

#include "sfc/error.hpp"
#include "sfc/mesh.hpp"
#include "sfc/rng.hpp"
#include "sfc/sim.hpp"

namespace sfc {

namespace {

void check_vertex(const CommGraph& graph, int v) {
    if (v < 0 || v >= graph.size()) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
}

SimRecord record(const CommGraph& graph, const std::vector<char>& visited, int step, int count) {
    SimRecord r;
    r.step = step;
    r.visited = count;
    r.coverage = static_cast<double>(count) / graph.size();
    r.avg_dist = average_distance(graph, visited);
    return r;
}

} // namespace

DiscretePath euler_path(const CommGraph& graph, int root) {
    check_vertex(graph, root);
    const int n = graph.size();
    std::vector<int> parent(n, -2);
    std::vector<std::vector<int>> children(n);
    std::queue<int> queue;
    queue.push(root);
    parent[root] = -1;
    int reached = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop();
        for (int w : graph.adj[u])
            if (parent[w] == -2) {
                parent[w] = u;
                children[u].push_back(w);
                queue.push(w);
                ++reached;
            }
    }
    if (reached != n) throw Error(ErrorKind::DisconnectedGraph, "graph is not connected");

    DiscretePath path;
    path.vertices.push_back(root);
    std::vector<std::size_t> next(n, 0);
    std::vector<int> stack{root};
    while (!stack.empty()) {
        const int u = stack.back();
        if (next[u] < children[u].size()) {
            const int c = children[u][next[u]++];
            stack.push_back(c);
            path.vertices.push_back(c);
        } else {
            stack.pop_back();
            if (!stack.empty()) path.vertices.push_back(stack.back());
        }
    }
    path.bridge.assign(path.vertices.size() - 1, 0);
    return path;
}

DiscretePath random_walk(const CommGraph& graph, int start, int steps, std::uint64_t seed) {
    check_vertex(graph, start);
    if (steps < 0) throw Error(ErrorKind::InvalidArgument, "random walk needs steps >= 0");
    Rng rng = Rng::substream(seed, "random-walk");
    DiscretePath path;
    path.vertices.reserve(static_cast<std::size_t>(steps) + 1);
    path.vertices.push_back(start);
    int cur = start;
    for (int i = 0; i < steps; ++i) {
        const auto& nb = graph.adj[cur];
        if (nb.empty()) throw Error(ErrorKind::DisconnectedGraph, "random walk stuck at an isolated vertex");
        cur = nb[rng.index(nb.size())];
        path.vertices.push_back(cur);
    }
    path.bridge.assign(path.vertices.size() - 1, 0);
    return path;
}

std::optional<double> average_distance(const CommGraph& graph, const std::vector<char>& visited) {
    std::vector<int> sources;
    for (int v = 0; v < graph.size(); ++v)
        if (visited[v]) sources.push_back(v);
    if (static_cast<int>(sources.size()) == graph.size() || sources.empty()) return std::nullopt;
    const std::vector<int> dist = bfs_distances(graph, sources);
    double sum = 0;
    long count = 0;
    for (int v = 0; v < graph.size(); ++v)
        if (!visited[v] && dist[v] >= 0) {
            sum += dist[v];
            ++count;
        }
    if (count == 0) return std::nullopt;
    return sum / count;
}

SimTrace measure(const CommGraph& graph, const DiscretePath& path, int stride, const std::string& strategy,
                 std::uint64_t seed) {
    if (stride < 1) throw Error(ErrorKind::InvalidArgument, "stride must be positive");
    if (path.vertices.empty()) throw Error(ErrorKind::InvalidArgument, "empty path");
    SimTrace trace;
    trace.strategy = strategy;
    trace.seed = seed;
    trace.num_vertices = graph.size();
    std::vector<char> visited(graph.size(), 0);
    int count = 0;
    for (int step = 0; step <= path.hops(); ++step) {
        const int v = path.vertices[step];
        check_vertex(graph, v);
        if (step > 0 && !graph.has_edge(path.vertices[step - 1], v))
            throw Error(ErrorKind::InvalidArgument, "path hop is not a graph edge");
        if (!visited[v]) {
            visited[v] = 1;
            ++count;
        }
        if (step % stride == 0 || step == path.hops()) trace.records.push_back(record(graph, visited, step, count));
    }
    return trace;
}

int hops_to_visit(const DiscretePath& path, int num_vertices, long count) {
    std::vector<char> seen(num_vertices, 0);
    long c = 0;
    for (int i = 0; i <= path.hops(); ++i) {
        if (!seen[path.vertices[i]]) {
            seen[path.vertices[i]] = 1;
            ++c;
        }
        if (c >= count) return i;
    }
    return -1;
}

int visited_after(const DiscretePath& path, int num_vertices, int hops) {
    std::vector<char> seen(num_vertices, 0);
    int c = 0;
    for (int i = 0; i <= std::min(hops, path.hops()); ++i)
        if (!seen[path.vertices[i]]) {
            seen[path.vertices[i]] = 1;
            ++c;
        }
    return c;
}

std::optional<double> distance_at_visited(const CommGraph& graph, const DiscretePath& path, long count) {
    const int at = hops_to_visit(path, graph.size(), count);
    if (at < 0) return std::nullopt;
    std::vector<char> visited(graph.size(), 0);
    for (int i = 0; i <= at; ++i) visited[path.vertices[i]] = 1;
    return average_distance(graph, visited);
}

int max_multiplicity(const DiscretePath& path, int num_vertices) {
    std::vector<int> count(num_vertices, 0);
    int best = 0;
    for (int v : path.vertices) best = std::max(best, ++count[v]);
    return best;
}

FleetResult run_fleet(const CommGraph& graph, const std::vector<Mule>& mules, int rounds, int stride, int first_k) {
    if (mules.empty()) throw Error(ErrorKind::InvalidArgument, "fleet needs at least one mule");
    if (rounds < 0 || stride < 1 || first_k < 0) throw Error(ErrorKind::InvalidArgument, "bad fleet budget");
    const int n = graph.size();
    const int m = static_cast<int>(mules.size());
    FleetResult out;
    out.rounds = rounds;
    out.first_k = first_k;

    std::vector<std::vector<char>> seen(m, std::vector<char>(n, 0));
    std::vector<char> joint(n, 0);
    std::vector<int> counts(m, 0);
    std::vector<std::vector<int>> first(m); // first_k distinct vertices of each mule
    int joint_count = 0;
    out.joint.strategy = "fleet";
    out.joint.seed = mules.front().seed;
    out.joint.num_vertices = n;
    for (const Mule& mule : mules) out.mules.push_back({mule.strategy, mule.seed, n, {}});

    for (int r = 0; r <= rounds; ++r) {
        for (int k = 0; k < m; ++k) {
            const auto& vs = mules[k].path.vertices;
            if (vs.empty()) throw Error(ErrorKind::InvalidArgument, "empty mule path");
            const int v = vs[std::min<std::size_t>(r, vs.size() - 1)];
            check_vertex(graph, v);
            if (!seen[k][v]) {
                seen[k][v] = 1;
                ++counts[k];
                if (static_cast<int>(first[k].size()) < first_k) first[k].push_back(v);
            }
            if (!joint[v]) {
                joint[v] = 1;
                ++joint_count;
            }
        }
        if (r % stride == 0 || r == rounds) {
            for (int k = 0; k < m; ++k) out.mules[k].records.push_back(record(graph, seen[k], r, counts[k]));
            out.joint.records.push_back(record(graph, joint, r, joint_count));
            Eigen::MatrixXi both = Eigen::MatrixXi::Zero(m, m);
            for (int v = 0; v < n; ++v)
                for (int a = 0; a < m; ++a)
                    if (seen[a][v])
                        for (int b = 0; b < m; ++b) both(a, b) += seen[b][v];
            out.overlap_steps.push_back(both);
        }
    }

    out.overlap = Eigen::MatrixXi::Zero(m, m);
    out.first_overlap = Eigen::MatrixXi::Zero(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            for (int v = 0; v < n; ++v) out.overlap(a, b) += seen[a][v] && seen[b][v];
            std::vector<char> mark(n, 0);
            for (int v : first[a]) mark[v] = 1;
            int early = 0;
            for (int v : first[b]) early += mark[v];
            out.first_overlap(a, b) = early;
        }
    return out;
}

void write_trace_csv(std::ostream& out, const std::vector<SimTrace>& traces) {
    out << "step,visited,coverage,avg_dist,strategy,seed\n";
    for (const SimTrace& t : traces)
        for (const SimRecord& r : t.records) {
            out << r.step << ',' << r.visited << ',' << format_double(r.coverage) << ',';
            if (r.avg_dist) out << format_double(*r.avg_dist);
            out << ',' << t.strategy << ',' << t.seed << '\n';
        }
}

void write_overlap_steps_csv(std::ostream& out, const FleetResult& fleet) {
    out << "step,mule_a,mule_b,overlap\n";
    for (std::size_t i = 0; i < fleet.overlap_steps.size(); ++i) {
        const Eigen::MatrixXi& o = fleet.overlap_steps[i];
        for (int a = 0; a < o.rows(); ++a)
            for (int b = a + 1; b < o.cols(); ++b)
                out << fleet.joint.records[i].step << ',' << a << ',' << b << ',' << o(a, b) << '\n';
    }
}

void write_overlap_csv(std::ostream& out, const Eigen::MatrixXi& overlap, const std::vector<std::string>& names) {
    out << "mule";
    for (const auto& name : names) out << ',' << name;
    out << '\n';
    for (int a = 0; a < overlap.rows(); ++a) {
        out << names.at(a);
        for (int b = 0; b < overlap.cols(); ++b) out << ',' << overlap(a, b);
        out << '\n';
    }
}

} // namespace sfc
