#pragma once

#include <stdexcept>
#include <string>

namespace spincant {

// Error categories map one-to-one onto the CLI exit codes documented in the
// README: configuration/validation problems exit 2, numerical-health failures
// exit 3, file I/O failures exit 4.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct HealthError : std::runtime_error {
    explicit HealthError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitHealth = 3;
inline constexpr int kExitIo = 4;

}  // namespace spincant
