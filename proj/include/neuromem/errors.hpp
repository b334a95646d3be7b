#pragma once

#include <stdexcept>
#include <string>

namespace neuromem {

// Invalid parameter deck or config input.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure during integration or quadrature.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace neuromem
