#pragma once

#include <stdexcept>
#include <string>

namespace simquad {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A coefficient or grid entry required by the computation was not supplied.
class IncompleteInputError : public Error {
public:
  explicit IncompleteInputError(const std::string& msg) : Error(msg) {}
};

// Moment oracle requested from a system that does not provide one.
class UnsupportedOracleError : public Error {
public:
  explicit UnsupportedOracleError(const std::string& msg) : Error(msg) {}
};

// An eigenvalue could not be certified as a real simple root.
class RealityError : public Error {
public:
  explicit RealityError(const std::string& msg) : Error(msg) {}
};

// Two polished roots coincide to within the separation tolerance.
class MultiplicityError : public Error {
public:
  explicit MultiplicityError(const std::string& msg) : Error(msg) {}
};

// An eigenvector residual exceeded its certified bound.
class ResidualError : public Error {
public:
  explicit ResidualError(const std::string& msg) : Error(msg) {}
};

// <u,v> vanished to working precision while forming quadrature weights.
class InnerProductCollapseError : public Error {
public:
  explicit InnerProductCollapseError(const std::string& msg) : Error(msg) {}
};

// Coincident nodes make the Vandermonde system singular.
class SingularityError : public Error {
public:
  explicit SingularityError(const std::string& msg) : Error(msg) {}
};

// The integrand failed to evaluate at a quadrature node.
class IntegrandError : public Error {
public:
  explicit IntegrandError(const std::string& msg) : Error(msg) {}
};

}  // namespace simquad
