#pragma once

#include <stdexcept>
#include <string>

namespace nshyd {

// Argument outside the mathematical domain of an operation (b <= 0, lo > hi, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Valve command outside U_0, U_+ and U_-.
class RegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter combination the model does not support (e.g. regeneration with a
// closed rod-to-tank valve).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best) : std::runtime_error(what), best_(best) {}
  double best_iterate() const noexcept { return best_; }

 private:
  double best_;
};

// (v, f) pair that is not on the graph of the force map.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Brute-force solver found no consistent branch combination.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nshyd
