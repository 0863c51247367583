#pragma once

#include <stdexcept>
#include <string>

namespace percolab {

/// Invalid input: bad dimension, a set missing the origin, p outside its domain.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An exact enumeration would exceed its EnumerationBudget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace percolab
