#include "sfc/error.hpp"
#include "sfc/rng.hpp"

namespace sfc {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonManifold: return "NonManifold";
    case ErrorKind::InconsistentOrientation: return "InconsistentOrientation";
    case ErrorKind::DegenerateFace: return "DegenerateFace";
    case ErrorKind::GenusZero: return "GenusZero";
    case ErrorKind::NonInteger: return "NonInteger";
    case ErrorKind::DisconnectedMesh: return "DisconnectedMesh";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::SliceFailure: return "SliceFailure";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::PathDependence: return "PathDependence";
    case ErrorKind::WrongZeroCount: return "WrongZeroCount";
    case ErrorKind::TraceEscape: return "TraceEscape";
    case ErrorKind::WrongComponentCount: return "WrongComponentCount";
    case ErrorKind::NonHorizontalSlit: return "NonHorizontalSlit";
    case ErrorKind::EndpointHit: return "EndpointHit";
    case ErrorKind::SlopeSelectionFailure: return "SlopeSelectionFailure";
    case ErrorKind::LocationMiss: return "LocationMiss";
    case ErrorKind::EmptyBelt: return "EmptyBelt";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

bool is_numerical(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::SolverFailure:
    case ErrorKind::SingularGram:
    case ErrorKind::RankDeficient:
    case ErrorKind::PathDependence:
    case ErrorKind::WrongZeroCount:
    case ErrorKind::TraceEscape:
    case ErrorKind::WrongComponentCount:
    case ErrorKind::NonHorizontalSlit:
    case ErrorKind::EndpointHit:
    case ErrorKind::SlopeSelectionFailure:
    case ErrorKind::LocationMiss:
    case ErrorKind::EmptyBelt:
    case ErrorKind::NonConvergence:
        return true;
    default:
        return false;
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

Rng Rng::substream(std::uint64_t root, std::string_view name, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(root ^ fnv1a(name)) + index));
}

} // namespace sfc
