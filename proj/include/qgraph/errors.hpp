#pragma once

#include <stdexcept>
#include <string>

namespace qgraph {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: graph files, configs, out-of-range parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Spectral equation violates sum |a_i| < 1; explicit formulas are refused.
class RegularityError : public Error {
 public:
  using Error::Error;
};

// Combinatorial or memory budget exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A guarantee that should hold by construction failed (no sign change in a
// root cell, non-vanishing odd traces, ...).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Staircase requested exactly on a spectral point.
class OnRootError : public Error {
 public:
  using Error::Error;
};

class DegenerateGraphError : public Error {
 public:
  using Error::Error;
};

class AccuracyError : public Error {
 public:
  using Error::Error;
};

// Sampled Lagrange-inversion condition failed; the series may diverge.
class DivergenceRiskError : public Error {
 public:
  using Error::Error;
};

}  // namespace qgraph
