/// @file errors.hpp
/// @brief Exception hierarchy shared by every module of the laboratory.
///
/// The C API maps each exception type onto one status code, so the classes
/// below are the complete error vocabulary of the library.
#pragma once

#include <stdexcept>
#include <string>

namespace css {

/// Base class of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller
/// (wrong lengths, out-of-range parameters, incompatible grids, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// A value that must be finite (field sample, density, ...) is NaN or Inf.
class CorruptedState : public Error {
public:
    using Error::Error;
};

/// The inputs are well-formed but the requested quantity does not exist
/// (zero field has no Nehari projection, blow-up run has no scattering state).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Reading or writing an artifact failed.
class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration (field-level message).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Throws ContractViolation with @p message unless @p condition holds.
inline void require(bool condition, const std::string& message) {
    if (!condition) throw ContractViolation(message);
}

}  // namespace css
