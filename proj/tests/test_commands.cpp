#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sfc/commands.hpp"
#include "sfc/error.hpp"
#include "sfc/serialize.hpp"

using namespace sfc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("sfc_test_" + name);
    fs::remove_all(p);
    return p;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

const nlohmann::json& check_named(const nlohmann::json& checks, const std::string& name) {
    for (const auto& c : checks)
        if (c["name"] == name) return c;
    throw std::runtime_error("no check " + name);
}

} // namespace

TEST_CASE("generator specs") {
    CHECK(genus(generate_from_spec("genus=2,res=16")) == 2);
    CHECK(genus(generate_from_spec("torus=9,7")) == 1);
    CHECK(generate_from_spec("flat=6,5").num_vertices() == 30);
    CHECK(generate_from_spec("tetrahedron").num_vertices() == 4);
    for (const char* bad : {"genus=2", "genus=x,res=16", "torus=9", "flat=2,5", "cube", "genus=2,res=16,extra=1"})
        CHECK_THROWS_AS(generate_from_spec(bad), Error);
}

TEST_CASE("config round trip") {
    RunConfig c;
    c.generate = "genus=1,res=16";
    c.seed = 11;
    c.slope = 1.6180339887498949;
    c.strategies = {"dense", "rw"};
    c.fleet = {MuleSpec{"dense", 2.5, 3, 0}, MuleSpec{"rw", 0, -1, 9}};
    c.stride = 4;
    const RunConfig back = config_from_json(nlohmann::json::parse(to_json(c).dump()));
    CHECK(to_json(back).dump() == to_json(c).dump());
    CHECK(back.fleet[1].seed == 9);

    CHECK(config_from_json(nlohmann::json::object()).seed == RunConfig{}.seed);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"sede", 3}}), Error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"seed", "three"}}), Error);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("parallel_for and SFC_THREADS") {
    std::vector<int> out(37, 0);
    parallel_for(37, 4, [&](int i) { out[i] = i * i; });
    for (int i = 0; i < 37; ++i) CHECK(out[i] == i * i);
    try {
        parallel_for(10, 3, [](int i) {
            if (i == 4 || i == 7) throw Error(ErrorKind::InvalidArgument, "at " + std::to_string(i));
        });
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.message() == "at 4");
    }

    ::unsetenv("SFC_THREADS");
    CHECK(threads_from_env() == 1);
    ::setenv("SFC_THREADS", "3", 1);
    CHECK(threads_from_env() == 3);
    for (const char* bad : {"0", "-2", "two", "4x"}) {
        ::setenv("SFC_THREADS", bad, 1);
        CHECK_THROWS_AS(threads_from_env(), Error);
    }
    ::unsetenv("SFC_THREADS");
}

TEST_CASE("pipeline command on genus 2") {
    RunConfig c;
    c.generate = "genus=2,res=16";
    c.outdir = scratch("pipeline").string();
    std::ostringstream log;
    command_pipeline(c, log);
    for (const char* f : {"config.json", "report.json", "atlas.json", "forms.json", "curve.json", "path.csv"})
        CHECK(fs::exists(fs::path(c.outdir) / f));
    const auto report = read_json(fs::path(c.outdir) / "report.json");
    CHECK(report["genus"] == 2);
    CHECK(report["homology_loops"] == 4);
    CHECK(report["zero_count"] == 2);
    CHECK(report["pass"] == true);
    CHECK(read_json(fs::path(c.outdir) / "atlas.json")["handles"].size() == 2);
    CHECK(to_json(load_config((fs::path(c.outdir) / "config.json").string())).dump() == to_json(c).dump());

    const auto path = read_lines(fs::path(c.outdir) / "path.csv");
    CHECK(path.front() == "hop,vertex,bridge");
    CHECK(path.size() == read_json(fs::path(c.outdir) / "curve.json")["path"]["hops"].get<std::size_t>() + 2);
}

TEST_CASE("pipeline command on tori") {
    for (const char* spec : {"torus=12,8", "flat=10,7"}) {
        RunConfig c;
        c.generate = spec;
        c.outdir = scratch("torus").string();
        std::ostringstream log;
        command_pipeline(c, log);
        const auto report = read_json(fs::path(c.outdir) / "report.json");
        CHECK(report["genus"] == 1);
        CHECK(report["zero_count"] == 0);
        CHECK(report["handles"] == 1);
    }
}

TEST_CASE("pipeline errors name the stage") {
    RunConfig c;
    c.mesh = "/nonexistent/mesh.off";
    c.outdir = scratch("errors").string();
    std::ostringstream log;
    try {
        command_pipeline(c, log);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("stage=mesh") != std::string::npos);
        CHECK(std::string(e.what()).find("hint:") != std::string::npos);
    }
    c.mesh.clear();
    c.generate = "tetrahedron";
    try {
        command_pipeline(c, log);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GenusZero);
        CHECK(std::string(e.what()).find("stage=topology") != std::string::npos);
    }
}

TEST_CASE("simulate command") {
    RunConfig c;
    c.generate = "genus=2,res=16";
    c.rw_seeds = 3;
    c.fleet = {MuleSpec{}, MuleSpec{}};
    c.outdir = scratch("simulate").string();
    std::ostringstream log;
    command_simulate(c, 2, log);
    const fs::path out(c.outdir);
    for (const char* f : {"trace_dense.csv", "trace_euler.csv", "trace_rw.csv", "fleet_joint.csv", "fleet_mules.csv",
                          "overlap.csv", "overlap_steps.csv", "summary.json", "config.json"})
        CHECK(fs::exists(out / f));
    const auto summary = read_json(out / "summary.json");
    CHECK(summary["stride"] == 1); // V / 100 rounded down, at least 1
    CHECK(summary["strategies"]["rw"].size() == 3);
    CHECK(summary["strategies"]["euler"]["hops"] == 2 * (126 - 1));
    CHECK(summary["strategies"]["dense"]["hops_to_coverage"]["100"].is_number());
    CHECK(read_lines(out / "trace_rw.csv").size() ==
          1 + 3 * (summary["strategies"]["dense"]["hops"].get<std::size_t>() + 1));

    const auto config = read_json(out / "config.json");
    CHECK(config["fleet"][1]["start"].get<int>() > 0);
    CHECK(config["fleet"][1]["slope"].get<double>() != config["fleet"][0]["slope"].get<double>());

    const auto joint = read_lines(out / "fleet_joint.csv"), mules = read_lines(out / "fleet_mules.csv");
    const std::size_t rows = joint.size() - 1;
    CHECK(mules.size() - 1 == 2 * rows);
    for (std::size_t r = 1; r <= rows; ++r) {
        auto visited = [](const std::string& line) { return std::stoi(line.substr(line.find(',') + 1)); };
        CHECK(visited(joint[r]) >= visited(mules[r]));
        CHECK(visited(joint[r]) >= visited(mules[r + rows]));
    }

    // A stride beyond the path leaves the first and last rows.
    c.strategies = {"dense", "euler"};
    c.fleet.clear();
    c.stride = 100000;
    c.outdir = scratch("stride").string();
    command_simulate(c, 1, log);
    CHECK(read_lines(fs::path(c.outdir) / "trace_dense.csv").size() == 3);
    CHECK(read_lines(fs::path(c.outdir) / "trace_euler.csv").size() == 3);

    c.strategies = {"zigzag"};
    CHECK_THROWS_AS(command_simulate(c, 1, log), Error);
}

TEST_CASE("verify command") {
    RunConfig c;
    c.generate = "genus=1,res=16";
    c.outdir = scratch("verify").string();
    std::ostringstream log;
    CHECK(command_verify(c, {}, log));
    const auto v = read_json(fs::path(c.outdir) / "verify.json");
    CHECK(check_named(v["checks"], "zero_count")["vacuous"] == true);
    CHECK(check_named(v["checks"], "zero_count")["pass"] == true);
    CHECK(check_named(v["checks"], "slit_length_mismatch")["vacuous"] == true);
    CHECK(check_named(v["checks"], "diffusion_vs_harmonize")["pass"] == true);

    // A corrupted form file fails closedness, by name.
    c.generate = "genus=2,res=16";
    c.outdir = scratch("verify_forms").string();
    command_pipeline(c, log);
    auto forms = read_json(fs::path(c.outdir) / "forms.json");
    forms["cohomology"][0][5] = forms["cohomology"][0][5].get<double>() + 0.25;
    const fs::path bad = fs::path(c.outdir) / "bad_forms.json";
    std::ofstream(bad) << forms.dump();
    VerifyOptions options;
    options.forms = bad.string();
    options.distributed = false;
    std::ostringstream report;
    CHECK(!command_verify(c, options, report));
    const auto failed = read_json(fs::path(c.outdir) / "verify.json");
    CHECK(check_named(failed["checks"], "cohomology_d1")["pass"] == false);
    CHECK(report.str().find("FAIL cohomology_d1") != std::string::npos);
}
