#include <charconv>
#include <fstream>
#include <sstream>

#include "sfc/error.hpp"
#include "sfc/mesh.hpp"

namespace sfc {

namespace {

// Next line that is neither blank nor a comment.
bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        return true;
    }
    return false;
}

void check_genus(const TriMesh& mesh, std::vector<std::string>* warnings) {
    if (!warnings) return;
    try {
        if (genus(mesh) == 0) warnings->push_back("GenusZero: mesh has genus 0, the pipeline requires g >= 1");
    } catch (const Error& e) {
        warnings->push_back(e.what());
    }
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

MeshFormat format_from_path(const std::string& path) {
    auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "off") return MeshFormat::OFF;
    if (ext == "obj") return MeshFormat::OBJ;
    throw Error(ErrorKind::ParseError, "cannot infer mesh format from '" + path + "'");
}

TriMesh read_off(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) throw Error(ErrorKind::ParseError, "empty OFF file");
    std::istringstream header(line);
    std::string magic;
    header >> magic;
    if (magic != "OFF") throw Error(ErrorKind::ParseError, "missing OFF header");
    long nv = -1, nf = -1, ne = 0;
    // Counts may share the header line.
    if (!(header >> nv >> nf)) {
        if (!next_content_line(in, line)) throw Error(ErrorKind::ParseError, "missing OFF counts");
        std::istringstream counts(line);
        if (!(counts >> nv >> nf)) throw Error(ErrorKind::ParseError, "bad OFF counts line");
        counts >> ne;
    }
    if (nv < 0 || nf < 0) throw Error(ErrorKind::ParseError, "negative OFF counts");

    std::vector<Vec3> positions(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_content_line(in, line)) throw Error(ErrorKind::ParseError, "truncated OFF vertex list");
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z)) throw Error(ErrorKind::ParseError, "bad OFF vertex line " + std::to_string(i));
        positions[i] = Vec3(x, y, z);
    }
    std::vector<Face> faces(nf);
    for (long i = 0; i < nf; ++i) {
        if (!next_content_line(in, line)) throw Error(ErrorKind::ParseError, "truncated OFF face list");
        std::istringstream ls(line);
        int n, a, b, c;
        if (!(ls >> n)) throw Error(ErrorKind::ParseError, "bad OFF face line " + std::to_string(i));
        if (n != 3) throw Error(ErrorKind::ParseError, "face " + std::to_string(i) + " is not a triangle");
        if (!(ls >> a >> b >> c)) throw Error(ErrorKind::ParseError, "bad OFF face line " + std::to_string(i));
        faces[i] = {a, b, c};
    }
    return TriMesh(std::move(positions), std::move(faces));
}

TriMesh read_obj(std::istream& in) {
    std::vector<Vec3> positions;
    std::vector<Face> faces;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z)) throw Error(ErrorKind::ParseError, "bad OBJ vertex at line " + std::to_string(lineno));
            positions.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ls >> tok) {
                int v = 0;
                auto slash = tok.find('/');
                const std::string head = tok.substr(0, slash);
                auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), v);
                if (ec != std::errc() || ptr != head.data() + head.size())
                    throw Error(ErrorKind::ParseError, "bad OBJ face index at line " + std::to_string(lineno));
                // Negative indices count back from the latest vertex.
                idx.push_back(v > 0 ? v - 1 : static_cast<int>(positions.size()) + v);
            }
            if (idx.size() != 3)
                throw Error(ErrorKind::ParseError, "OBJ face at line " + std::to_string(lineno) + " is not a triangle");
            faces.push_back({idx[0], idx[1], idx[2]});
        }
    }
    return TriMesh(std::move(positions), std::move(faces));
}

TriMesh load_mesh(const std::string& path, MeshFormat format, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    TriMesh mesh = format == MeshFormat::OFF ? read_off(in) : read_obj(in);
    check_genus(mesh, warnings);
    return mesh;
}

TriMesh load_mesh(const std::string& path, std::vector<std::string>* warnings) {
    return load_mesh(path, format_from_path(path), warnings);
}

void write_off(const TriMesh& mesh, std::ostream& out) {
    out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << ' ' << mesh.num_edges() << '\n';
    for (const Vec3& p : mesh.positions())
        out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
    for (const Face& f : mesh.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_obj(const TriMesh& mesh, std::ostream& out) {
    for (const Vec3& p : mesh.positions())
        out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
    for (const Face& f : mesh.faces()) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void save_mesh(const TriMesh& mesh, const std::string& path, MeshFormat format) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
    if (format == MeshFormat::OFF)
        write_off(mesh, out);
    else
        write_obj(mesh, out);
}

void save_mesh(const TriMesh& mesh, const std::string& path) { save_mesh(mesh, path, format_from_path(path)); }

} // namespace sfc
