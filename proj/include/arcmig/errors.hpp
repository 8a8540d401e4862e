#pragma once

#include <stdexcept>
#include <string>

namespace arcmig {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (non-finite input,
/// evaluation on a singularity).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Caller violated an operation's precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment or operation configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The boundary integral solver could not produce a trustworthy density.
class SolverError : public Error {
public:
    using Error::Error;
};

/// A numerical routine (quadrature, decomposition) failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace arcmig
