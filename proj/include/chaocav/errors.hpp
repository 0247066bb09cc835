#pragma once

#include <stdexcept>
#include <string>

namespace chaocav {

// Precondition or input-validity failure (bad parameters, non-Hermitian
// input, unnormalized states).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A teleportation branch whose outcome probability vanishes.
class DegenerateOutcome : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Numerical integration drifted beyond its tolerance.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chaocav
