#pragma once

#include <stdexcept>
#include <string>

namespace sidecat {

struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CutoffMismatch : std::runtime_error {
    explicit CutoffMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct PoleError : std::runtime_error {
    explicit PoleError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridError : std::runtime_error {
    explicit GridError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridMismatch : std::runtime_error {
    explicit GridMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct ApproximationDomain : std::runtime_error {
    explicit ApproximationDomain(const std::string& msg) : std::runtime_error(msg) {}
};

struct CalibrationMissing : std::runtime_error {
    explicit CalibrationMissing(const std::string& msg) : std::runtime_error(msg) {}
};

struct PhaseCoverage : std::runtime_error {
    explicit PhaseCoverage(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IOError : std::runtime_error {
    explicit IOError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sidecat
