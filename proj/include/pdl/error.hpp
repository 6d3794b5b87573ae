#pragma once

#include <stdexcept>
#include <string>

namespace pdl {

// Base of every exception the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied something outside an operation's precondition
// (bad grid, missing coupling, non-finite parameter, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// The request is well-formed but the physics makes it meaningless:
// ML quantities on the balance line, asymptotic formulas outside their
// regime, a degenerate sweep angle.
class RegimeError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Potential has the wrong curvature sign for an inverted-oscillator fit.
class ModelError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// A computation produced values that violate a hard numerical invariant
// (|F| > 1, non-finite field samples, mass reaching the window edge).
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace pdl
