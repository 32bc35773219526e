#pragma once

#include <stdexcept>
#include <string>

namespace otk {

// Error categories map 1:1 onto CLI exit codes (see exit_code()).
// Library code throws these; the CLI front end catches and translates.

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter or argument outside the physically admissible domain.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver failure: no bracket, divergence, singular system, runaway.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_config = 3,
    exit_domain = 4,
    exit_numeric = 5,
    exit_io = 6,
};

}  // namespace otk
