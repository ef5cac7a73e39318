#pragma once

#include <stdexcept>
#include <string>

namespace sfac {

/// Bad input: malformed files, out-of-domain parameters, violated preconditions.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation could not produce a trustworthy number.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The request exceeds a configured resource cap (matrix size, memory).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sfac
