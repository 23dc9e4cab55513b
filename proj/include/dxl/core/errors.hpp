#pragma once
#include <stdexcept>
#include <string>

namespace dxl {

// Exit codes used by the CLI: 0 success, 2 config, 3 numerical/accuracy, 4 resource.
enum class ExitCode : int { Ok = 0, Config = 2, Numerical = 3, Resource = 4 };

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Propagation / fitting / linear-algebra accuracy failures.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// System-size or cluster-size caps.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace dxl
