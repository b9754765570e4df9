#pragma once

// Dense state-vector backend. Units: hbar = 1, E0 = 1.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rydsim/pauli.hpp"
#include "rydsim/rng.hpp"

namespace rydsim {

using Mat2 = Eigen::Matrix2cd;

inline constexpr std::size_t kStateQubitCap = 24;
inline constexpr std::size_t kPropagatorQubitCap = 10;

class StateVector {
 public:
  /// |0...0> on n_qubits.
  explicit StateVector(std::size_t n_qubits);
  static StateVector basis(std::size_t n_qubits, std::uint64_t index);
  /// Takes ownership of amplitudes; they are renormalized. Throws on a zero vector.
  static StateVector from_amplitudes(std::size_t n_qubits, std::vector<cplx> amplitudes);
  static StateVector from_eigen(std::size_t n_qubits, const Eigen::VectorXcd& v);

  std::size_t n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amp_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amp_; }
  cplx operator[](std::size_t i) const { return amp_[i]; }

  double norm() const;
  void normalize();
  /// <this|other>
  cplx inner(const StateVector& other) const;
  Eigen::VectorXcd to_eigen() const;

  /// |psi> -> P|psi>.
  void apply(const PauliString& p);
  /// |psi> -> exp(i theta P)|psi> = (cos theta + i sin theta P)|psi>, P Hermitian.
  void apply_exp(const PauliString& p, double theta);
  void apply_1q(std::size_t qubit, const Mat2& u);
  /// Applies u to `target` on the branch where `control` equals control_value.
  void apply_controlled_1q(std::size_t control, std::size_t target, const Mat2& u, bool control_value = true);
  /// Applies a dense 2^k x 2^k unitary to `qubits` (qubits[0] is the least
  /// significant bit of the local index), optionally conditioned on a control.
  void apply_unitary(std::span<const std::size_t> qubits, const Eigen::MatrixXcd& u,
                     std::optional<std::size_t> control = std::nullopt, bool control_value = true);
  /// X on every qubit of x_mask where the control qubit is 1.
  void apply_controlled_flip(std::size_t control, std::uint64_t x_mask);

  /// Applies (I + outcome P)/2 and renormalizes; returns the branch
  /// probability. A zero-probability branch leaves the state unnormalized at
  /// zero norm and returns 0.
  double project(const PauliString& p, int outcome);

 private:
  void check_qubit(std::size_t q) const;
  void check_size(const PauliString& p) const;

  std::size_t n_;
  std::vector<cplx> amp_;
};

/// <psi|P|psi>.
cplx expectation(const StateVector& state, const PauliString& p);
/// <psi|H|psi> for Hermitian H; throws ContractError otherwise.
double expectation(const StateVector& state, const OperatorSum& h);

struct Measurement {
  int outcome;
  StateVector collapsed;
  double probability;
};

/// Projective measurement of a Hermitian Pauli string with Born sampling.
Measurement measure_projector(const StateVector& state, const PauliString& p, Rng& rng);

/// exp(factor * h) for Hermitian h via its eigen-decomposition.
Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixXcd& h, cplx factor);

/// exp(-i H t), n_qubits <= kPropagatorQubitCap.
Eigen::MatrixXcd exact_propagator(const OperatorSum& h, double t, std::size_t n_qubits);

/// Matrix of a state map: column b is the map applied to basis state b.
Eigen::MatrixXcd circuit_matrix(std::size_t n_qubits, const std::function<void(StateVector&)>& circuit);

/// Operator-norm distance between two matrices modulo a global phase.
double distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd rho);
  static DensityMatrix pure(const StateVector& state);

  std::size_t n_qubits() const noexcept { return n_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }
  double trace() const { return rho_.trace().real(); }
  double expectation(const OperatorSum& h) const;

  /// Hermitian within 1e-10, unit trace, eigenvalues >= -1e-8.
  bool is_valid(double tol = 1e-10) const;

 private:
  std::size_t n_;
  Eigen::MatrixXcd rho_;
};

}  // namespace rydsim
