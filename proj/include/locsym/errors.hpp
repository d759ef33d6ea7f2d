#pragma once

#include <stdexcept>
#include <string>

namespace locsym {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input to a constructor or operation (bad slab layout, empty grid, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A physical precondition is violated, e.g. a non-positive asymptotic U.
class PhysicsError : public Error {
public:
    using Error::Error;
};

// The generalized mapping was requested for a state whose current vanishes.
class ZeroCurrentError : public Error {
public:
    using Error::Error;
};

}  // namespace locsym
