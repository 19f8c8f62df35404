#pragma once

#include <stdexcept>
#include <string>

namespace ctmetric {

/// Input file could not be parsed (bad JSON, wrong shape, unknown state names).
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// A domain invariant does not hold (row sums, obs range, metric axioms, ...).
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was called with inputs that violate its stated precondition.
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctmetric
