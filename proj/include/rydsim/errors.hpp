#pragma once

#include <stdexcept>
#include <string>

namespace rydsim {

/// Operand sizes do not agree (qubit counts, matrix dimensions).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A dense realization would exceed the desk-scale cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on operator structure was violated (non-Hermitian input,
/// wrong gate kind, non-unit phase where one is required).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid qubit geometry: index collisions, out-of-range sites, lattice
/// shapes the construction does not support.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// ODE integration failed to reach the requested tolerance.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace rydsim
