#pragma once

#include <stdexcept>
#include <string>

namespace bary {

/// Bad arguments, malformed files, violated preconditions. CLI exit code 1.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Geometry that cannot be processed (unbounded chord, empty interior, ...).
class geometry_error : public std::runtime_error {
public:
    explicit geometry_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver ran out of budget. CLI exit code 2.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// A John certificate could not be extracted (too few touching facets).
class certification_error : public std::runtime_error {
public:
    explicit certification_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bary
