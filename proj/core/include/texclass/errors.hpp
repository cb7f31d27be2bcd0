#pragma once

#include <stdexcept>
#include <string>

namespace texclass {

/// Unreadable or malformed input data (files, manifests, mismatched labels).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical degeneracy that cannot be repaired by regularization
/// (singular covariance, empty pixel populations, degenerate splits).
class DegeneracyError : public std::runtime_error {
public:
    explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace texclass
