#pragma once

#include <stdexcept>
#include <string>

namespace sectorflow {

/// Thrown when an input violates a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation cannot continue (NaN velocity, self-intersection, ...).
class NumericalHalt : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw InvalidInput(message);
    }
}

} // namespace sectorflow
