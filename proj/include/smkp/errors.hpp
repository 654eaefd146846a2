#pragma once

#include <stdexcept>
#include <string>

namespace smkp {

// Base class for every error raised by the library. Callers that only care
// about "something about the physics went wrong" can catch this one.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter violates one of its invariants (D_e > 0, 0 < alpha <= 1, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// alpha outside (0, 1].
class InvalidDefect : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

// Q1 < Q2^2: the vibrational ladder has no admissible level.
class NoBoundStates : public Error {
public:
    using Error::Error;
};

// Requested level lies above n_max.
class UnboundState : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation (r <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

// A Pochhammer symbol in a hypergeometric denominator vanished.
class PoleError : public Error {
public:
    using Error::Error;
};

// Eigenvalue search could not bracket the requested number of states.
class BracketFailure : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

} // namespace smkp
