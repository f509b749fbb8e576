#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sfc/config.hpp"
#include "sfc/error.hpp"

namespace sfc {

namespace {

int parse_int(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidArgument, "generator spec: '" + key + "' needs an integer, got '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string part; std::getline(in, part, sep);) out.push_back(part);
    return out;
}

} // namespace

TriMesh generate_from_spec(const std::string& spec) {
    if (spec == "tetrahedron") return generate_tetrahedron();
    // "torus=N,M" and "flat=N,M" carry two numbers, so parse the key first.
    for (const char* kind : {"torus=", "flat="}) {
        if (spec.rfind(kind, 0) != 0) continue;
        const auto nm = split(spec.substr(std::string(kind).size()), ',');
        if (nm.size() != 2) throw Error(ErrorKind::InvalidArgument, "generator spec: expected " + std::string(kind) + "N,M");
        const int n = parse_int("n", nm[0]), m = parse_int("m", nm[1]);
        if (n < 3 || m < 3) throw Error(ErrorKind::InvalidArgument, "generator spec: torus grids need N, M >= 3");
        return kind[0] == 't' ? generate_torus_grid(n, m) : generate_flat_torus(n, m);
    }
    std::map<std::string, int> kv;
    for (const std::string& part : split(spec, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "generator spec: expected key=value, got '" + part + "'");
        kv[part.substr(0, eq)] = parse_int(part.substr(0, eq), part.substr(eq + 1));
    }
    if (kv.size() == 2 && kv.count("genus") && kv.count("res")) return generate_genus_g(kv["genus"], kv["res"]);
    throw Error(ErrorKind::InvalidArgument,
                "unknown generator spec '" + spec + "' (use genus=G,res=R, torus=N,M, flat=N,M or tetrahedron)");
}

TriMesh load_config_mesh(const RunConfig& config) {
    if (!config.mesh.empty()) return load_mesh(config.mesh);
    if (!config.generate.empty()) return generate_from_spec(config.generate);
    throw Error(ErrorKind::InvalidArgument, "no mesh: give a mesh file or a generator spec");
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["mesh"] = c.mesh;
    j["generate"] = c.generate;
    j["seed"] = c.seed;
    j["slope"] = c.slope;
    j["length"] = c.length;
    j["delta"] = c.delta;
    j["start"] = c.start;
    j["strategies"] = c.strategies;
    j["rw_seeds"] = c.rw_seeds;
    j["fleet"] = nlohmann::ordered_json::array();
    for (const MuleSpec& m : c.fleet)
        j["fleet"].push_back({{"strategy", m.strategy}, {"slope", m.slope}, {"start", m.start}, {"seed", m.seed}});
    j["outdir"] = c.outdir;
    j["stride"] = c.stride;
    j["max_attempts"] = c.max_attempts;
    return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "config must be a JSON object");
    static const std::set<std::string> known{"mesh",     "generate", "seed",  "slope",  "length",
                                             "delta",    "start",    "strategies", "rw_seeds", "fleet",
                                             "outdir",   "stride",   "max_attempts"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
    RunConfig c;
    try {
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) j.at(key).get_to(field);
        };
        get("mesh", c.mesh);
        get("generate", c.generate);
        get("seed", c.seed);
        get("slope", c.slope);
        get("length", c.length);
        get("delta", c.delta);
        get("start", c.start);
        get("strategies", c.strategies);
        get("rw_seeds", c.rw_seeds);
        get("outdir", c.outdir);
        get("stride", c.stride);
        get("max_attempts", c.max_attempts);
        if (j.contains("fleet"))
            for (const auto& m : j.at("fleet")) {
                MuleSpec spec;
                if (m.contains("strategy")) m.at("strategy").get_to(spec.strategy);
                if (m.contains("slope")) m.at("slope").get_to(spec.slope);
                if (m.contains("start")) m.at("start").get_to(spec.start);
                if (m.contains("seed")) m.at("seed").get_to(spec.seed);
                c.fleet.push_back(spec);
            }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("bad config value: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open config '" + path + "'");
    try {
        return config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, "config '" + path + "': " + e.what());
    }
}

} // namespace sfc
