// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef OSPEP_ERRORS_HPP
#define OSPEP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ospep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed numeric input: NaN, wrong dimensions, bad step size.
class InputError : public Error {
 public:
  using Error::Error;
};

// Operator class that violates its parameter invariants or is empty.
class ClassError : public Error {
 public:
  using Error::Error;
};

// A role was requested in a Gram ordering that has eliminated it, or the
// role assignment does not fit the method.
class OrderingError : public Error {
 public:
  using Error::Error;
};

// Closed-form formula evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An internal identity that must hold by construction did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// The SDP solver did not reach an optimal status.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace ospep

#endif  // OSPEP_ERRORS_HPP
