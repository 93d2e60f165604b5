#pragma once

#include <stdexcept>
#include <string>

namespace horolab {

// Thrown when an enumeration or sieve is asked to go beyond its supported
// range.  The CLI maps this to exit code 3.
class CapacityExceeded : public std::runtime_error {
public:
    explicit CapacityExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an experiment's preconditions (closeness, period bounds, ...)
// are not met.  The CLI maps this to exit code 4.
class HypothesisViolation : public std::runtime_error {
public:
    explicit HypothesisViolation(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a bounded search for group elements cannot certify its result,
// e.g. both points of a surface-distance query are too deep in the cusp.
class EnumerationExhausted : public std::runtime_error {
public:
    explicit EnumerationExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a prime window or pair sample comes back empty.
class EmptyWindow : public std::runtime_error {
public:
    explicit EmptyWindow(const std::string& what) : std::runtime_error(what) {}
};

} // namespace horolab
