#include "rydsim/meso_gate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rydsim/errors.hpp"

namespace rydsim {
namespace {

std::uint64_t target_mask(std::span<const std::size_t> targets) {
  std::uint64_t mask = 0;
  for (auto t : targets) mask |= std::uint64_t{1} << t;
  return mask;
}

Mat2 pauli_matrix(Pauli p) {
  Mat2 m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Restricts an operator supported on `qubits` to a local register where
// qubits[k] becomes local qubit k.
OperatorSum restrict_to(const OperatorSum& op, std::span<const std::size_t> qubits) {
  OperatorSum local(qubits.size());
  const std::uint64_t allowed = target_mask(qubits);
  for (const auto& t : op.terms()) {
    if ((t.string.x_bits() | t.string.z_bits()) & ~allowed) {
      throw GeometryError("fault generator acts outside the gate targets");
    }
    PauliString s(qubits.size());
    for (std::size_t k = 0; k < qubits.size(); ++k) s.set(k, t.string.at(qubits[k]));
    local.add(t.coeff * t.string.phase_value(), s);
  }
  return local;
}

// Basis change W with W X W^dag = p.
Mat2 to_x_basis(Pauli p) {
  switch (p) {
    case Pauli::Z: return hadamard();
    case Pauli::Y: return axis_rotation(Pauli::Z, -std::numbers::pi / 4);
    default: return Mat2::Identity();
  }
}

}  // namespace

void validate_geometry(std::size_t n_qubits, std::size_t control, std::span<const std::size_t> targets) {
  if (targets.empty()) throw GeometryError("gate needs at least one target");
  if (control >= n_qubits) throw GeometryError("control qubit out of range");
  std::vector<std::size_t> sorted(targets.begin(), targets.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw GeometryError("gate targets are not distinct");
  }
  if (sorted.back() >= n_qubits) throw GeometryError("gate target out of range");
  if (std::binary_search(sorted.begin(), sorted.end(), control)) {
    throw GeometryError("control qubit is also a target");
  }
}

Mat2 hadamard() {
  Mat2 h;
  const double r = std::numbers::sqrt2 / 2;
  h << r, r, r, -r;
  return h;
}

Mat2 axis_rotation(Pauli axis, double angle) {
  return std::cos(angle) * Mat2::Identity() + cplx(0, std::sin(angle)) * pauli_matrix(axis);
}

Mat2 ry(double alpha) { return axis_rotation(Pauli::Y, -alpha / 2); }

void cnot_n(StateVector& state, std::size_t control, std::span<const std::size_t> targets) {
  validate_geometry(state.n_qubits(), control, targets);
  state.apply_controlled_flip(control, target_mask(targets));
}

void faulty_gate(StateVector& state, const GateSpec& spec) {
  if (spec.kind != GateKind::faulty) throw ContractError("faulty_gate called with an ideal gate spec");
  validate_geometry(state.n_qubits(), spec.control, spec.targets);
  const OperatorSum local = restrict_to(spec.fault_generator, spec.targets).normalized();
  if (!local.is_hermitian()) throw ContractError("fault generator Q must be Hermitian");
  if (!local.empty() && spec.fault_phase != 0.0) {
    const Eigen::MatrixXcd u = hermitian_exp(to_matrix(local, spec.targets.size()), cplx(0, spec.fault_phase));
    state.apply_unitary(spec.targets, u, spec.control, false);
  }
  state.apply_controlled_flip(spec.control, target_mask(spec.targets));
}

void apply_gate(StateVector& state, const GateSpec& spec) {
  if (spec.kind == GateKind::faulty) {
    faulty_gate(state, spec);
  } else {
    cnot_n(state, spec.control, spec.targets);
  }
}

void control_rotation(StateVector& state, std::size_t control, double phi) {
  state.apply_1q(control, axis_rotation(Pauli::X, phi));
}

void plaquette_step(StateVector& state, const std::array<std::size_t, 4>& plaquette, double phi) {
  GateSpec g;
  g.control = plaquette[0];
  g.targets = {plaquette[1], plaquette[2], plaquette[3]};
  plaquette_step(state, g, phi);
}

void plaquette_step(StateVector& state, const GateSpec& gate, double phi) {
  apply_gate(state, gate);
  control_rotation(state, gate.control, phi);
  apply_gate(state, gate);
}

void star_step(StateVector& state, const std::array<std::size_t, 4>& star, double phi) {
  for (auto q : star) state.apply_1q(q, hadamard());
  plaquette_step(state, star, phi);
  for (auto q : star) state.apply_1q(q, hadamard());
}

void pauli_exponential_step(StateVector& state, const PauliString& p, double theta) {
  if (!p.is_hermitian()) throw ContractError("Pauli exponential needs a Hermitian string");
  if (p.n_qubits() != state.n_qubits()) throw DimensionError("Pauli string does not match the register");
  const auto support = p.support();
  if (support.empty()) throw ContractError("identity string has no gate realization");
  const double angle = p.phase() == 2 ? -theta : theta;
  if (support.size() == 1) {
    state.apply_1q(support[0], axis_rotation(p.at(support[0]), angle));
    return;
  }
  for (auto q : support) state.apply_1q(q, to_x_basis(p.at(q)).adjoint());
  const std::vector<std::size_t> targets(support.begin() + 1, support.end());
  cnot_n(state, support[0], targets);
  control_rotation(state, support[0], angle);
  cnot_n(state, support[0], targets);
  for (auto q : support) state.apply_1q(q, to_x_basis(p.at(q)));
}

void controlled_partial_flip(StateVector& state, std::size_t control, std::size_t target, double theta) {
  state.apply_controlled_1q(control, target, axis_rotation(Pauli::X, -theta / 2));
}

void heisenberg_xx_step(StateVector& state, std::size_t i, std::size_t j, double theta) {
  if (i == j) throw GeometryError("Heisenberg step needs two distinct qubits");
  const double quarter = std::numbers::pi / 4;
  state.apply_1q(i, axis_rotation(Pauli::Y, quarter));
  // The controlled factor is exp(-i theta X_j (1 - Z_i) / 2), i.e. a partial
  // flip by 2 theta on the |1> branch.
  controlled_partial_flip(state, i, j, 2 * theta);
  state.apply_1q(j, axis_rotation(Pauli::X, theta / 2));
  state.apply_1q(i, axis_rotation(Pauli::Y, -quarter));
}

void syndrome_map_S(StateVector& state, std::size_t control, std::span<const std::size_t> plaquette) {
  validate_geometry(state.n_qubits(), control, plaquette);
  state.apply_1q(control, ry(std::numbers::pi / 2));
  cnot_n(state, control, plaquette);
  state.apply_1q(control, ry(-std::numbers::pi / 2));
}

void controlled_zflip(StateVector& state, std::size_t control, std::size_t i, double theta) {
  if (control == i) throw GeometryError("controlled flip needs distinct control and target");
  state.apply_controlled_1q(control, i, axis_rotation(Pauli::Z, theta / 2));
}

double flip_probability(double theta) {
  const double s = std::sin(theta / 2);
  return s * s;
}

}  // namespace rydsim
