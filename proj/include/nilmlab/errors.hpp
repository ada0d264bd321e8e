#pragma once

#include <stdexcept>
#include <string>

namespace nilm {

// Error taxonomy mirrored by CLI exit codes: configuration errors exit 2,
// input-data errors exit 3, numerical errors exit 4.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nilm
