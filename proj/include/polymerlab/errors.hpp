#pragma once

#include <stdexcept>
#include <string>

namespace polymerlab {

/// Bad parameters or configuration supplied by the caller.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation would exceed its configured resource budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A theorem hypothesis does not hold for the supplied numbers. Not a bug.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace polymerlab
