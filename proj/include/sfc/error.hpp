#pragma once

#include <stdexcept>
#include <string>

namespace sfc {

enum class ErrorKind {
    ParseError,
    NonManifold,
    InconsistentOrientation,
    DegenerateFace,
    GenusZero,
    NonInteger,
    DisconnectedMesh,
    DisconnectedGraph,
    SliceFailure,
    RankDeficient,
    SolverFailure,
    SingularGram,
    PathDependence,
    WrongZeroCount,
    TraceEscape,
    WrongComponentCount,
    NonHorizontalSlit,
    EndpointHit,
    SlopeSelectionFailure,
    LocationMiss,
    EmptyBelt,
    NonConvergence,
    InvalidArgument,
    IoError,
};

const char* to_string(ErrorKind kind);

// Numerical failures map to CLI exit code 2, everything else to 1.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

    ErrorKind kind() const { return kind_; }
    const std::string& message() const { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

} // namespace sfc
