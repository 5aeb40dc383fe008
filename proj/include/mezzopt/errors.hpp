#pragma once

#include <stdexcept>
#include <string>

namespace mezzopt {

/// Caller passed arguments that violate a documented precondition.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A warehouse, generator spec or parameter file is inconsistent.
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A storage task cannot be placed in the remaining free space.
class InfeasibleTaskError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A pick list cannot be satisfied from the warehouse stock.
class InfeasibleOrderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mezzopt
