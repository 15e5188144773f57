#pragma once

#include <stdexcept>
#include <string>

namespace cct {

// Raised when a streaming requirement string cannot be parsed at all.
struct InvalidSpec : std::runtime_error {
    explicit InvalidSpec(const std::string& what) : std::runtime_error(what) {}
};

// Raised when the derived minimum throughput exceeds the derived maximum.
// Carries both numbers so the caller can tell the user what to revise.
struct InfeasibleRequirements : std::runtime_error {
    InfeasibleRequirements(double min_mbps, double max_mbps, const std::string& what)
        : std::runtime_error(what), min_mbps(min_mbps), max_mbps(max_mbps) {}
    double min_mbps;
    double max_mbps;
};

struct UnknownBase : std::runtime_error {
    explicit UnknownBase(const std::string& what) : std::runtime_error(what) {}
};

// A native tool (compiler, verifier) is not reachable on this host.
struct BackendUnavailable : std::runtime_error {
    explicit BackendUnavailable(const std::string& what) : std::runtime_error(what) {}
};

// Candidate carries only raw source; simulated performance checks need a
// machine-evaluable control profile.
struct MissingProfile : std::runtime_error {
    explicit MissingProfile(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyDistribution : std::runtime_error {
    explicit EmptyDistribution(const std::string& what) : std::runtime_error(what) {}
};

struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cct
