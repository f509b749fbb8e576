#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "sfc/commands.hpp"
#include "sfc/error.hpp"
#include "sfc/pipeline.hpp"
#include "sfc/serialize.hpp"
#include "sfc/sim.hpp"

namespace sfc {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    // Rethrow the lowest-index failure so errors do not depend on scheduling.
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

int threads_from_env() {
    const char* text = std::getenv("SFC_THREADS");
    if (!text || !*text) return 1;
    char* end = nullptr;
    const long n = std::strtol(text, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024)
        throw Error(ErrorKind::InvalidArgument, std::string("SFC_THREADS must be a positive integer, got '") + text + "'");
    return static_cast<int>(n);
}

namespace {

std::string out_path(const RunConfig& c, const std::string& name) { return (std::filesystem::path(c.outdir) / name).string(); }

void prepare_outdir(const RunConfig& c) {
    std::error_code ec;
    std::filesystem::create_directories(c.outdir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create output directory '" + c.outdir + "': " + ec.message());
}

TriMesh stage_mesh(const RunConfig& c) {
    TriMesh mesh;
    run_stage("mesh", "check the mesh path and format (OFF or OBJ), or use --generate genus=G,res=R",
              [&] { mesh = load_config_mesh(c); });
    return mesh;
}

PipelineState stage_pipeline(const RunConfig& c) {
    TriMesh mesh = stage_mesh(c);
    return run_pipeline(std::move(mesh), c.seed, c.max_attempts);
}

DenseRun stage_dense(const PipelineState& s, const CommGraph& graph, const RunConfig& c, double slope, int start) {
    DenseRun run;
    DenseOptions options;
    options.slope = slope;
    options.length = c.length;
    options.delta = c.delta;
    options.start = start;
    run_stage("curve", "try another slope or seed, or widen the belt with --delta",
              [&] { run = dense_path(s.mesh, s.covering, graph, options, c.seed); });
    return run;
}

long at_fraction(int n, double f) { return std::max(1L, static_cast<long>(std::ceil(f * n))); }

ojson milestones(const CommGraph& graph, const DiscretePath& path) {
    const int n = graph.size();
    ojson j;
    j["hops"] = path.hops();
    ojson hops;
    for (auto [name, f] : {std::pair{"50", 0.5}, {"90", 0.9}, {"99", 0.99}, {"100", 1.0}}) {
        const int h = hops_to_visit(path, n, at_fraction(n, f));
        hops[name] = h >= 0 ? ojson(h) : ojson(nullptr);
    }
    j["hops_to_coverage"] = hops;
    j["distance_at_visited"] = ojson::array();
    for (double f : {0.05, 0.10, 0.25, 0.50}) {
        const long count = at_fraction(n, f);
        const auto d = distance_at_visited(graph, path, count);
        j["distance_at_visited"].push_back({{"visited", count}, {"avg_dist", d ? ojson(*d) : ojson(nullptr)}});
    }
    j["coverage_at_V_hops"] = static_cast<double>(visited_after(path, n, n)) / n;
    j["max_multiplicity"] = max_multiplicity(path, n);
    return j;
}

// Start of mule i: as far in hops from all earlier starts as possible.
int spread_start(const CommGraph& graph, const std::vector<int>& earlier) {
    const std::vector<int> d = bfs_distances(graph, earlier);
    return static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
}

void write_csv(const std::string& path, const std::vector<SimTrace>& traces) {
    std::ostringstream out;
    write_trace_csv(out, traces);
    write_text(path, out.str());
}

} // namespace

void command_pipeline(const RunConfig& c, std::ostream& log) {
    prepare_outdir(c);
    write_text(out_path(c, "config.json"), dump(to_json(c)));
    const PipelineState s = stage_pipeline(c);
    const std::vector<Check> checks = check_invariants(s);
    const CommGraph graph = mesh_graph(s.mesh);
    const DenseRun run = stage_dense(s, graph, c, c.slope, c.start);

    write_text(out_path(c, "report.json"), dump(report_json(s, checks)));
    write_text(out_path(c, "atlas.json"), dump(atlas_json(s.covering.atlas)));
    write_text(out_path(c, "forms.json"), dump(forms_json(s)));
    write_text(out_path(c, "curve.json"), dump(curve_json(run)));
    std::ostringstream path;
    write_path_csv(path, run.path);
    write_text(out_path(c, "path.csv"), path.str());

    log << "genus " << s.genus << ", " << s.homology.loops.size() << " loops, " << s.zeros.size() << " zeros, "
        << s.covering.atlas.handles.size() << " handles\n";
    log << "dense path: " << run.path.hops() << " hops over " << s.mesh.num_vertices() << " vertices (slope "
        << format_double(run.slope) << ", length " << format_double(run.length) << ")\n";
}

void command_simulate(const RunConfig& config, int threads, std::ostream& log) {
    RunConfig c = config;
    for (const std::string& s : c.strategies)
        if (s != "dense" && s != "euler" && s != "rw")
            throw Error(ErrorKind::InvalidArgument, "unknown strategy '" + s + "' (use dense, euler, rw)");
    for (const MuleSpec& m : c.fleet)
        if (m.strategy != "dense" && m.strategy != "euler" && m.strategy != "rw")
            throw Error(ErrorKind::InvalidArgument, "unknown mule strategy '" + m.strategy + "'");
    if (c.rw_seeds < 1) throw Error(ErrorKind::InvalidArgument, "rw_seeds must be positive");
    if (c.stride < 0) throw Error(ErrorKind::InvalidArgument, "stride must not be negative");
    prepare_outdir(c);

    const bool need_dense = std::count(c.strategies.begin(), c.strategies.end(), "dense") > 0 ||
                            std::any_of(c.fleet.begin(), c.fleet.end(), [](const MuleSpec& m) { return m.strategy == "dense"; });
    PipelineState state;
    if (need_dense) state = stage_pipeline(c);
    else state.mesh = stage_mesh(c);
    const CommGraph graph = mesh_graph(state.mesh);
    const int n = graph.size();
    if (c.start < 0 || c.start >= n) throw Error(ErrorKind::InvalidArgument, "start vertex out of range");
    if (c.stride == 0) c.stride = std::max(1, n / 100);

    // Resolve mule defaults so the echoed config is explicit.
    std::vector<int> starts;
    for (std::size_t i = 0; i < c.fleet.size(); ++i) {
        MuleSpec& m = c.fleet[i];
        if (m.slope == 0) m.slope = c.slope + static_cast<double>(i) * (std::sqrt(2.0) - 1);
        if (m.start < 0) m.start = i == 0 ? c.start : spread_start(graph, starts);
        if (m.seed == 0) m.seed = c.seed + i;
        starts.push_back(m.start);
    }
    write_text(out_path(c, "config.json"), dump(to_json(c)));

    ojson summary;
    summary["vertices"] = n;
    summary["stride"] = c.stride;
    summary["strategies"] = ojson::object();

    std::optional<DenseRun> dense;
    run_stage("simulate", "check the strategy list and the start vertex", [&] {
        if (std::count(c.strategies.begin(), c.strategies.end(), "dense")) dense = stage_dense(state, graph, c, c.slope, c.start);
        const int walk = dense ? dense->path.hops() : 2 * (n - 1);
        for (const std::string& strategy : c.strategies) {
            if (strategy == "dense") {
                write_csv(out_path(c, "trace_dense.csv"), {measure(graph, dense->path, c.stride, "dense", c.seed)});
                ojson m = milestones(graph, dense->path);
                m["slope"] = dense->slope;
                m["length"] = dense->length;
                m["belt_width"] = dense->delta;
                m["bridges"] = dense->path.bridges;
                m["bridge_hops"] = dense->path.bridge_hops;
                summary["strategies"]["dense"] = m;
            } else if (strategy == "euler") {
                const DiscretePath tour = euler_path(graph, c.start);
                write_csv(out_path(c, "trace_euler.csv"), {measure(graph, tour, c.stride, "euler", c.seed)});
                summary["strategies"]["euler"] = milestones(graph, tour);
            } else {
                std::vector<SimTrace> traces(c.rw_seeds);
                std::vector<ojson> stats(c.rw_seeds);
                parallel_for(c.rw_seeds, threads, [&](int i) {
                    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(i);
                    const DiscretePath walk_path = random_walk(graph, c.start, walk, seed);
                    traces[i] = measure(graph, walk_path, c.stride, "rw", seed);
                    stats[i] = milestones(graph, walk_path);
                    stats[i]["seed"] = seed;
                });
                write_csv(out_path(c, "trace_rw.csv"), traces);
                summary["strategies"]["rw"] = stats;
            }
        }
    });

    if (!c.fleet.empty()) {
        std::vector<Mule> mules(c.fleet.size());
        const int walk = dense ? dense->path.hops() : 2 * (n - 1);
        run_stage("fleet", "give each mule a distinct slope and start", [&] {
            parallel_for(static_cast<int>(mules.size()), threads, [&](int i) {
                const MuleSpec& m = c.fleet[i];
                Mule& mule = mules[i];
                mule.strategy = m.strategy;
                mule.seed = m.seed;
                if (m.strategy == "dense") mule.path = stage_dense(state, graph, c, m.slope, m.start).path;
                else if (m.strategy == "euler") mule.path = euler_path(graph, m.start);
                else mule.path = random_walk(graph, m.start, walk, m.seed);
            });
        });
        int rounds = 0;
        for (const Mule& m : mules) rounds = std::max(rounds, m.path.hops());
        const FleetResult fleet = run_fleet(graph, mules, rounds, c.stride, static_cast<int>(at_fraction(n, 0.10)));

        std::vector<std::string> names;
        std::vector<SimTrace> per_mule = fleet.mules;
        for (std::size_t i = 0; i < mules.size(); ++i) {
            names.push_back("mule" + std::to_string(i));
            per_mule[i].strategy = names.back() + "-" + mules[i].strategy;
        }
        write_csv(out_path(c, "fleet_joint.csv"), {fleet.joint});
        write_csv(out_path(c, "fleet_mules.csv"), per_mule);
        std::ostringstream overlap, steps;
        write_overlap_csv(overlap, fleet.overlap, names);
        write_text(out_path(c, "overlap.csv"), overlap.str());
        write_overlap_steps_csv(steps, fleet);
        write_text(out_path(c, "overlap_steps.csv"), steps.str());

        ojson f;
        f["rounds"] = rounds;
        f["first_k"] = fleet.first_k;
        f["mules"] = ojson::array();
        for (std::size_t i = 0; i < mules.size(); ++i)
            f["mules"].push_back({{"name", names[i]},
                                  {"strategy", c.fleet[i].strategy},
                                  {"slope", c.fleet[i].slope},
                                  {"start", c.fleet[i].start},
                                  {"seed", c.fleet[i].seed},
                                  {"hops", mules[i].path.hops()}});
        auto matrix = [](const Eigen::MatrixXi& m) {
            ojson rows = ojson::array();
            for (int a = 0; a < m.rows(); ++a) {
                ojson row = ojson::array();
                for (int b = 0; b < m.cols(); ++b) row.push_back(m(a, b));
                rows.push_back(row);
            }
            return rows;
        };
        f["first_overlap"] = matrix(fleet.first_overlap);
        f["overlap"] = matrix(fleet.overlap);
        f["joint_final_coverage"] = fleet.joint.records.empty() ? 0.0 : fleet.joint.records.back().coverage;
        summary["fleet"] = f;
    }
    write_text(out_path(c, "summary.json"), dump(summary));

    for (const auto& [name, m] : summary["strategies"].items()) {
        if (m.is_array()) {
            log << name << ": " << m.size() << " seeds\n";
            continue;
        }
        log << name << ": " << m["hops"].get<int>() << " hops, 90% coverage at " << m["hops_to_coverage"]["90"].dump()
            << " hops\n";
    }
    if (summary.contains("fleet")) log << "fleet: " << c.fleet.size() << " mules\n";
}

bool command_verify(const RunConfig& c, const VerifyOptions& options, std::ostream& log) {
    prepare_outdir(c);
    write_text(out_path(c, "config.json"), dump(to_json(c)));
    PipelineState s = stage_pipeline(c);
    if (!options.forms.empty())
        run_stage("forms-file", "the forms file must come from `pipeline` on the same mesh", [&] {
            std::ifstream in(options.forms);
            if (!in) throw Error(ErrorKind::IoError, "cannot open '" + options.forms + "'");
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw Error(ErrorKind::ParseError, e.what());
            }
            s.cohomology = cohomology_from_json(j, s.mesh);
        });

    std::vector<Check> checks = check_invariants(s);
    std::vector<Check> more;
    run_stage("curve", "try another slope or seed", [&] { more = curve_checks(s, c.slope, c.seed); });
    checks.insert(checks.end(), more.begin(), more.end());
    if (options.distributed) {
        run_stage("distsim", "raise the diffusion budget or use a smaller mesh", [&] { more = distributed_checks(s); });
        checks.insert(checks.end(), more.begin(), more.end());
    }

    bool pass = true;
    for (const Check& ch : checks) {
        pass &= ch.pass;
        log << (ch.pass ? "PASS " : "FAIL ") << ch.name << ' ' << format_double(ch.value) << ' ' << ch.relation << ' '
            << format_double(ch.bound) << (ch.vacuous ? " (vacuous)" : "") << '\n';
    }
    ojson j;
    j["genus"] = s.genus;
    j["vertices"] = s.mesh.num_vertices();
    j["checks"] = checks_json(checks);
    j["pass"] = pass;
    write_text(out_path(c, "verify.json"), dump(j));
    return pass;
}

} // namespace sfc
