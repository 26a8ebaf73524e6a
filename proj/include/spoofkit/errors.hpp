#pragma once

#include <stdexcept>
#include <string>

namespace spoofkit {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error(what) {}
};

struct SingularMatrixError : Error {
    explicit SingularMatrixError(const std::string& what) : Error(what) {}
};

// Simplex exceeded its iteration cap.
struct LpStalledError : Error {
    explicit LpStalledError(const std::string& what) : Error(what) {}
};

// No spoofing sequence can satisfy the requested separation profile.
struct InfeasibleDesignError : Error {
    explicit InfeasibleDesignError(const std::string& what) : Error(what) {}
};

// Sign enumeration would need more than the configured number of LP solves.
struct EnumerationCapError : Error {
    explicit EnumerationCapError(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace spoofkit
