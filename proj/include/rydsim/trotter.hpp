#pragma once

// Trotter compilation of Pauli Hamiltonians into gate circuits built from the
// mesoscopic-gate primitives, and their execution on a StateVector.

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rydsim/pauli.hpp"
#include "rydsim/statevec.hpp"

namespace rydsim {

/// exp(i theta P) through pauli_exponential_step.
struct PauliExpGate {
  PauliString string;
  double theta = 0.0;
};
/// exp(i angle sigma^axis) on one qubit.
struct RotationGate {
  std::size_t qubit = 0;
  Pauli axis = Pauli::Z;
  double angle = 0.0;
};
struct HadamardGate {
  std::size_t qubit = 0;
};
struct CnotNGate {
  std::size_t control = 0;
  std::vector<std::size_t> targets;
};
/// exp(i phi XXXX), qubits[0] is the control atom.
struct PlaquetteGate {
  std::array<std::size_t, 4> qubits{};
  double phi = 0.0;
};
/// exp(i phi ZZZZ).
struct StarGate {
  std::array<std::size_t, 4> qubits{};
  double phi = 0.0;
};
/// exp(i theta X_i X_j / 2) through heisenberg_xx_step.
struct XXGate {
  std::size_t i = 0;
  std::size_t j = 0;
  double theta = 0.0;
};

using GateOp = std::variant<PauliExpGate, RotationGate, HadamardGate, CnotNGate, PlaquetteGate, StarGate, XXGate>;

inline constexpr std::size_t kNoSourceTerm = static_cast<std::size_t>(-1);

struct CircuitGate {
  GateOp op;
  /// Index of the Hamiltonian term (in H.normalized() order) this gate
  /// belongs to, or kNoSourceTerm.
  std::size_t source_term = kNoSourceTerm;
  /// Sublattice color: gates of equal color within a step act on disjoint
  /// qubits. Metadata only; execution is sequential.
  std::size_t color = 0;
};

class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits = 0) : n_(n_qubits) {}

  std::size_t n_qubits() const noexcept { return n_; }
  const std::vector<CircuitGate>& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }

  /// Throws GeometryError when a qubit index is out of range.
  void add(GateOp op, std::size_t source_term = kNoSourceTerm, std::size_t color = 0);
  void append(const Circuit& other);

 private:
  std::size_t n_;
  std::vector<CircuitGate> gates_;
};

/// Qubits touched by a gate.
std::vector<std::size_t> gate_qubits(const GateOp& op);
/// One line per gate, stable across runs.
std::string to_text(const Circuit& circuit);

enum class TermKind { plaquette, star, xx, yy, zz, field, pauli };

/// XXXX -> plaquette, ZZZZ -> star, weight-2 XX/YY/ZZ, single Z -> field,
/// any other Hermitian string -> pauli.
TermKind classify(const PauliString& p);

/// Product formula for exp(-i H tau n_steps). Identity terms (global phase)
/// are dropped. Within a step terms are ordered by (kind, lowest qubit);
/// order 2 emits the symmetric palindrome with the middle factor merged.
/// Throws ContractError for non-real coefficients and order outside {1, 2}.
Circuit trotterize(const OperatorSum& h, double tau, std::size_t n_steps, int order = 1);

/// Applies the gates in sequence. Throws DimensionError on a size mismatch.
StateVector run(const Circuit& circuit, StateVector state);
void apply(const Circuit& circuit, StateVector& state);

/// Spectral-norm distance between one compiled step and exp(-i H tau).
double step_error(const OperatorSum& h, double tau, int order);

/// exp(i theta P) spelled out as basis changes, CNOT^N, control rotation,
/// CNOT^N and the inverse basis changes.
Circuit expand_pauli_exponential(const PauliString& p, double theta);

/// exp(i phi X_i X_j Z_s) followed by exp(i phi Y_i Y_j Z_s), phi = t_hop tau,
/// as explicit primitive gates. Throws GeometryError on repeated indices.
Circuit compile_hopping_term(std::size_t i, std::size_t j, std::size_t string_site, double t_hop, double tau,
                             std::size_t n_qubits);

}  // namespace rydsim
