#pragma once

#include <stdexcept>
#include <string>

namespace roqs {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model file could not be read or parsed (bad syntax, wrong shapes).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A physical-parameter invariant is violated (Theta not antisymmetric, ...).
class InvalidParamsError : public Error {
 public:
  using Error::Error;
};

// An operation requiring a stable drift was given a non-Hurwitz matrix.
class NotHurwitzError : public Error {
 public:
  using Error::Error;
};

// The linearized Lyapunov system is numerically singular.
class SingularSolveError : public Error {
 public:
  using Error::Error;
};

// Matrix handed to a PSD square root has a genuinely negative eigenvalue.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// Requested decay rate mu is not below -spectral_abscissa(A).
class MuTooLargeError : public Error {
 public:
  using Error::Error;
};

// Risk-sensitivity parameter outside [0, mu/(4 alpha)).
class ThetaOutOfRangeError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature could not reach the requested tolerance.
class QuadratureFailureError : public Error {
 public:
  using Error::Error;
};

class NegativeEpsError : public Error {
 public:
  using Error::Error;
};

// Simulation configuration violates its invariants.
class ConfigInvalidError : public Error {
 public:
  using Error::Error;
};

// Classical exponential moment diverges at the requested theta.
class ThetaSupercriticalError : public Error {
 public:
  using Error::Error;
};

}  // namespace roqs
