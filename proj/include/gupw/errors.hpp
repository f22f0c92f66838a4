#pragma once

#include <stdexcept>
#include <string>

namespace gupw {

/// Bad argument combination: wrong mode count, zero coefficient, space mismatch, ...
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// A state carries too much population near the Fock cutoff for truncated
/// operators to be trusted. The message names the offending parameter.
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

/// Round-off produced something that should be impossible (complex expectation
/// of a Hermitian operator, non-PSD density matrix, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gupw
