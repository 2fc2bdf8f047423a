#pragma once

#include <stdexcept>
#include <string>

namespace ruin {

// Failure modes surfaced to callers; the CLI maps these to exit code 1.
enum class ErrorCode {
    DriftNotNegative,
    MgfDiverges,
    VacuousBound,
    NetProfitViolated,
    NoRootInDomain,
    NotLattice,
};

class ModelError : public std::runtime_error {
public:
    ModelError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Malformed experiment files or flag combinations; the CLI maps these to
// exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ruin
