#pragma once

#include <stdexcept>
#include <string>

namespace fanosaw {

// Exit codes of the command-line front end. Each exception type below maps to
// exactly one of them.
enum class ExitCode : int {
    success = 0,
    validation = 1,
    io = 2,
    no_solution = 3,
    oracle_convergence = 4,
};

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    [[nodiscard]] virtual ExitCode exit_code() const noexcept = 0;
};

/// Invalid input: out-of-range parameter, malformed grid, unknown name.
class ValidationError : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::validation; }
};

/// A quantity that is undefined at the requested point (e.g. Fano width at
/// exact alignment, zero substrate speed).
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A closed-form result violated a self-consistency bound; signals a bug.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::validation; }
};

class IoError : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::io; }
};

/// Root finder found no admissible solution (no sign change, negative rate,
/// complex-only roots).
class NoSolutionError : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::no_solution; }
};

class ConvergenceError : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::oracle_convergence; }
};

}  // namespace fanosaw
