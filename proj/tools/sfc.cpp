#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sfc/commands.hpp"
#include "sfc/error.hpp"
#include "sfc/mesh.hpp"
#include "sfc/pipeline.hpp"

using namespace sfc;

namespace {

// Flags shared by the run commands. Values given on the command line override
// the config file.
struct Flags {
    std::string config;
    RunConfig values;
    std::string strategies;
    int fleet = 0;
    CLI::App* app = nullptr;

    void add(CLI::App* sub) {
        app = sub;
        sub->add_option("--config", config, "JSON run config (flags override it)")->check(CLI::ExistingFile);
        sub->add_option("--mesh", values.mesh, "input mesh (OFF or OBJ)");
        sub->add_option("--generate", values.generate, "generator spec: genus=G,res=R | torus=N,M | flat=N,M");
        sub->add_option("--seed", values.seed, "root seed");
        sub->add_option("--slope", values.slope, "slope of the dense line");
        sub->add_option("--length", values.length, "flat curve length (0: adaptive)")->check(CLI::NonNegativeNumber);
        sub->add_option("--delta", values.delta, "belt width (0: twice the average flat edge)")->check(CLI::NonNegativeNumber);
        sub->add_option("--start", values.start, "start vertex")->check(CLI::NonNegativeNumber);
        sub->add_option("--strategies", strategies, "comma list of dense, euler, rw");
        sub->add_option("--rw-seeds", values.rw_seeds, "random walks to run")->check(CLI::PositiveNumber);
        sub->add_option("--fleet", fleet, "number of dense mules in the fleet")->check(CLI::NonNegativeNumber);
        sub->add_option("--outdir", values.outdir, "output directory");
        sub->add_option("--stride", values.stride, "metric stride in hops (0: V/100)")->check(CLI::NonNegativeNumber);
        sub->add_option("--max-attempts", values.max_attempts, "covering form attempts")->check(CLI::PositiveNumber);
    }

    bool given(const char* name) const { return app->get_option(name)->count() > 0; }

    RunConfig resolve() const {
        RunConfig c = config.empty() ? RunConfig{} : load_config(config);
        if (given("--mesh")) {
            c.mesh = values.mesh;
            c.generate.clear();
        }
        if (given("--generate")) {
            c.generate = values.generate;
            c.mesh.clear();
        }
        if (given("--mesh") && given("--generate"))
            throw Error(ErrorKind::InvalidArgument, "give either --mesh or --generate, not both");
        if (given("--seed")) c.seed = values.seed;
        if (given("--slope")) c.slope = values.slope;
        if (given("--length")) c.length = values.length;
        if (given("--delta")) c.delta = values.delta;
        if (given("--start")) c.start = values.start;
        if (given("--rw-seeds")) c.rw_seeds = values.rw_seeds;
        if (given("--outdir")) c.outdir = values.outdir;
        if (given("--stride")) c.stride = values.stride;
        if (given("--max-attempts")) c.max_attempts = values.max_attempts;
        if (given("--strategies")) {
            c.strategies.clear();
            std::stringstream in(strategies);
            for (std::string s; std::getline(in, s, ',');)
                if (!s.empty()) c.strategies.push_back(s);
        }
        if (given("--fleet")) c.fleet.assign(fleet, MuleSpec{});
        return c;
    }
};

int exit_code(const Error& e) { return is_numerical(e.kind()) ? 2 : 1; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dense curves on closed surfaces and the data-mule paths they induce"};
    app.require_subcommand(1);

    Flags pipeline_flags, simulate_flags, verify_flags;
    auto* pipeline = app.add_subcommand("pipeline", "topology, forms, covering and the dense path");
    pipeline_flags.add(pipeline);
    auto* simulate = app.add_subcommand("simulate", "coverage and distance traces of the path strategies");
    simulate_flags.add(simulate);
    auto* verify = app.add_subcommand("verify", "measure every invariant and report pass/fail");
    verify_flags.add(verify);
    VerifyOptions verify_options;
    bool no_distributed = false;
    verify->add_option("--forms", verify_options.forms, "cohomology basis (forms.json) to check instead")
        ->check(CLI::ExistingFile);
    verify->add_flag("--no-distributed", no_distributed, "skip the distributed-protocol checks");

    auto* generate = app.add_subcommand("generate-mesh", "write a generated mesh");
    std::string spec, out;
    generate->add_option("--generate,spec", spec, "genus=G,res=R | torus=N,M | flat=N,M | tetrahedron")->required();
    generate->add_option("--out", out, "output file (.off or .obj)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const int threads = threads_from_env();
        if (pipeline->parsed()) {
            command_pipeline(pipeline_flags.resolve(), std::cout);
        } else if (simulate->parsed()) {
            command_simulate(simulate_flags.resolve(), threads, std::cout);
        } else if (verify->parsed()) {
            verify_options.distributed = !no_distributed;
            if (!command_verify(verify_flags.resolve(), verify_options, std::cout)) return 1;
        } else if (generate->parsed()) {
            TriMesh mesh;
            run_stage("mesh", "use genus=G,res=R, torus=N,M, flat=N,M or tetrahedron", [&] {
                mesh = generate_from_spec(spec);
                save_mesh(mesh, out);
            });
            std::cout << "V=" << mesh.num_vertices() << " E=" << mesh.num_edges() << " F=" << mesh.num_faces()
                      << " genus=" << genus(mesh) << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
