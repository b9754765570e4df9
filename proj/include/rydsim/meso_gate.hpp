#pragma once

// Circuit-level model of the mesoscopic Rydberg gate
//
//   G = |0><0|_c (x) 1 + |1><1|_c (x) X^(x)N,
//
// its coherent error model, and the composite sequences built from it:
// plaquette/star exponentials, the two-qubit Heisenberg step, the stabilizer
// syndrome map and the controlled pump flip used for cooling.
//
// Qubit indices refer to the register of the StateVector passed in.

#include <array>
#include <span>
#include <vector>

#include "rydsim/pauli.hpp"
#include "rydsim/statevec.hpp"

namespace rydsim {

enum class GateKind { ideal, faulty };

struct GateSpec {
  std::size_t control = 0;
  std::vector<std::size_t> targets;
  GateKind kind = GateKind::ideal;
  /// Hermitian error generator, supported on targets only (faulty gates).
  OperatorSum fault_generator;
  double fault_phase = 0.0;
};

/// Throws GeometryError unless control is outside targets, targets are
/// non-empty, distinct and in range.
void validate_geometry(std::size_t n_qubits, std::size_t control, std::span<const std::size_t> targets);

// Single-qubit building blocks.
Mat2 hadamard();
/// exp(i angle sigma^axis).
Mat2 axis_rotation(Pauli axis, double angle);
/// R^y(alpha) = exp(-i alpha sigma^y / 2).
Mat2 ry(double alpha);

/// CNOT^N: flips every target on the |1> branch of the control.
void cnot_n(StateVector& state, std::size_t control, std::span<const std::size_t> targets);

/// G' = |0><0|_c (x) exp(i phi Q) + |1><1|_c (x) X^(x)N. Reduces to cnot_n for
/// Q = 0 or phi = 0.
void faulty_gate(StateVector& state, const GateSpec& spec);

/// Applies spec as ideal or faulty according to spec.kind.
void apply_gate(StateVector& state, const GateSpec& spec);

/// U_c^x(phi) = exp(i phi X_c).
void control_rotation(StateVector& state, std::size_t control, double phi);

/// exp(i phi A_p), A_p = XXXX on the plaquette, realized as G U_c^x(phi) G
/// with plaquette[0] as the control atom.
void plaquette_step(StateVector& state, const std::array<std::size_t, 4>& plaquette, double phi);
/// Same sequence with an arbitrary gate (ideal or faulty) in place of G;
/// gate.control and gate.targets define the plaquette.
void plaquette_step(StateVector& state, const GateSpec& gate, double phi);

/// exp(i phi B_s), B_s = ZZZZ: Hadamard conjugation of plaquette_step.
void star_step(StateVector& state, const std::array<std::size_t, 4>& star, double phi);

/// exp(i theta P) for any Hermitian string of weight >= 1: local basis changes
/// map every factor to X, then G U^x(theta) G with the first support qubit as
/// control (a bare rotation for weight 1).
void pauli_exponential_step(StateVector& state, const PauliString& p, double theta);

/// |0><0|_i (x) 1 + |1><1|_i (x) exp(-i theta X_j / 2).
void controlled_partial_flip(StateVector& state, std::size_t control, std::size_t target, double theta);

/// exp(i theta X_i X_j / 2) from the four-factor sequence
/// exp(-i pi Y_i/4) exp(i theta X_j/2) [|0><0| + |1><1| exp(-i theta X_j)] exp(i pi Y_i/4),
/// the bracket being controlled_partial_flip(2 theta).
void heisenberg_xx_step(StateVector& state, std::size_t i, std::size_t j, double theta);

/// S = R^y_c(pi/2)^-1 G R^y_c(pi/2) with G acting on the stabilizer support.
/// Maps |0>_c|+1,l> -> |0>_c|+1,l> and |0>_c|-1,l> -> -|1>_c|-1,l>; S^2 = 1.
void syndrome_map_S(StateVector& state, std::size_t control, std::span<const std::size_t> plaquette);

/// |0><0|_c (x) 1 + |1><1|_c (x) exp(i theta Z_i / 2).
void controlled_zflip(StateVector& state, std::size_t control, std::size_t i, double theta);

/// Probability that one cooling cycle flips an excited stabilizer.
double flip_probability(double theta);

}  // namespace rydsim
