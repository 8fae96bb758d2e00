#pragma once

#include <stdexcept>
#include <string>

namespace lcakit {

// Exit codes used by the CLI. Library exceptions carry the code so the
// CLI can translate without a taxonomy of catch blocks.
enum class ErrorCode : int {
    Usage = 2,
    Validation = 3,
    Resolution = 4,
    Solver = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    int exit_code() const noexcept { return static_cast<int>(code_); }

private:
    ErrorCode code_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::string message)
        : Error(ErrorCode::Validation, std::move(message)) {}
};

class ResolutionError : public Error {
public:
    explicit ResolutionError(std::string message)
        : Error(ErrorCode::Resolution, std::move(message)) {}
};

class SolverError : public Error {
public:
    explicit SolverError(std::string message)
        : Error(ErrorCode::Solver, std::move(message)) {}
};

class UsageError : public Error {
public:
    explicit UsageError(std::string message)
        : Error(ErrorCode::Usage, std::move(message)) {}
};

}  // namespace lcakit
