#include "rydsim/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include "rydsim/errors.hpp"
#include "rydsim/meso_gate.hpp"

namespace rydsim {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kQuarter = std::numbers::pi / 4;

struct OrderedTerm {
  TermKind kind;
  std::size_t lowest;
  std::size_t index;  // position in h.normalized()
  double coeff;
  PauliString string;
};

std::array<std::size_t, 4> four(const std::vector<std::size_t>& s) { return {s[0], s[1], s[2], s[3]}; }

// exp(i alpha P) for one classified term.
void emit(Circuit& c, const OrderedTerm& t, double alpha, std::size_t color) {
  const auto s = t.string.support();
  auto add = [&](GateOp op) { c.add(std::move(op), t.index, color); };
  switch (t.kind) {
    case TermKind::plaquette: add(PlaquetteGate{four(s), alpha}); break;
    case TermKind::star: add(StarGate{four(s), alpha}); break;
    case TermKind::xx: add(XXGate{s[0], s[1], 2 * alpha}); break;
    case TermKind::yy:
      for (auto q : s) add(RotationGate{q, Pauli::Z, kQuarter});
      add(XXGate{s[0], s[1], 2 * alpha});
      for (auto q : s) add(RotationGate{q, Pauli::Z, -kQuarter});
      break;
    case TermKind::zz:
      for (auto q : s) add(HadamardGate{q});
      add(XXGate{s[0], s[1], 2 * alpha});
      for (auto q : s) add(HadamardGate{q});
      break;
    case TermKind::field: add(RotationGate{s[0], Pauli::Z, alpha}); break;
    case TermKind::pauli: add(PauliExpGate{t.string, alpha}); break;
  }
}

bool uniform_axis(const PauliString& p, Pauli axis) {
  for (auto q : p.support()) {
    if (p.at(q) != axis) return false;
  }
  return true;
}

std::string axis_name(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
  }
  return "?";
}

}  // namespace

void Circuit::add(GateOp op, std::size_t source_term, std::size_t color) {
  if (const auto* pe = std::get_if<PauliExpGate>(&op); pe && pe->string.n_qubits() != n_) {
    throw DimensionError("Pauli exponential does not match the circuit register");
  }
  for (auto q : gate_qubits(op)) {
    if (q >= n_) throw GeometryError("gate qubit " + std::to_string(q) + " outside a register of " + std::to_string(n_));
  }
  gates_.push_back({std::move(op), source_term, color});
}

void Circuit::append(const Circuit& other) {
  if (other.n_qubits() != n_) throw DimensionError("cannot append circuits on different registers");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
}

std::vector<std::size_t> gate_qubits(const GateOp& op) {
  return std::visit(Overloaded{
                        [](const PauliExpGate& g) { return g.string.support(); },
                        [](const RotationGate& g) { return std::vector<std::size_t>{g.qubit}; },
                        [](const HadamardGate& g) { return std::vector<std::size_t>{g.qubit}; },
                        [](const CnotNGate& g) {
                          std::vector<std::size_t> q{g.control};
                          q.insert(q.end(), g.targets.begin(), g.targets.end());
                          return q;
                        },
                        [](const PlaquetteGate& g) { return std::vector<std::size_t>(g.qubits.begin(), g.qubits.end()); },
                        [](const StarGate& g) { return std::vector<std::size_t>(g.qubits.begin(), g.qubits.end()); },
                        [](const XXGate& g) { return std::vector<std::size_t>{g.i, g.j}; },
                    },
                    op);
}

std::string to_text(const Circuit& circuit) {
  std::ostringstream os;
  os.precision(17);
  auto list = [&](const auto& qs) {
    for (std::size_t k = 0; k < qs.size(); ++k) os << (k ? "," : "") << qs[k];
  };
  for (const auto& g : circuit.gates()) {
    std::visit(Overloaded{
                   [&](const PauliExpGate& x) { os << "pauli_exp " << x.string.word() << ' ' << x.theta; },
                   [&](const RotationGate& x) { os << "rot" << axis_name(x.axis) << ' ' << x.qubit << ' ' << x.angle; },
                   [&](const HadamardGate& x) { os << "h " << x.qubit; },
                   [&](const CnotNGate& x) {
                     os << "cnot_n " << x.control << ' ';
                     list(x.targets);
                   },
                   [&](const PlaquetteGate& x) {
                     os << "plaquette ";
                     list(x.qubits);
                     os << ' ' << x.phi;
                   },
                   [&](const StarGate& x) {
                     os << "star ";
                     list(x.qubits);
                     os << ' ' << x.phi;
                   },
                   [&](const XXGate& x) { os << "xx " << x.i << ',' << x.j << ' ' << x.theta; },
               },
               g.op);
    if (g.source_term != kNoSourceTerm) os << " term=" << g.source_term;
    os << " color=" << g.color << '\n';
  }
  return os.str();
}

TermKind classify(const PauliString& p) {
  const auto w = p.weight();
  if (w == 4 && uniform_axis(p, Pauli::X)) return TermKind::plaquette;
  if (w == 4 && uniform_axis(p, Pauli::Z)) return TermKind::star;
  if (w == 2 && uniform_axis(p, Pauli::X)) return TermKind::xx;
  if (w == 2 && uniform_axis(p, Pauli::Y)) return TermKind::yy;
  if (w == 2 && uniform_axis(p, Pauli::Z)) return TermKind::zz;
  if (w == 1 && uniform_axis(p, Pauli::Z)) return TermKind::field;
  return TermKind::pauli;
}

Circuit trotterize(const OperatorSum& h, double tau, std::size_t n_steps, int order) {
  if (order != 1 && order != 2) throw ContractError("Trotter order must be 1 or 2, got " + std::to_string(order));
  const OperatorSum hn = h.normalized();
  std::vector<OrderedTerm> terms;
  for (std::size_t k = 0; k < hn.size(); ++k) {
    const auto& t = hn.terms()[k];
    if (std::abs(t.coeff.imag()) > 1e-12 * std::max(1.0, std::abs(t.coeff))) {
      throw ContractError("unmapped term kind: " + t.string.word() + " has a non-real coefficient");
    }
    if (t.string.is_identity()) continue;
    terms.push_back({classify(t.string), t.string.support().front(), k, t.coeff.real(), t.string});
  }
  std::stable_sort(terms.begin(), terms.end(), [](const OrderedTerm& a, const OrderedTerm& b) {
    return std::tie(a.kind, a.lowest) < std::tie(b.kind, b.lowest);
  });

  // Greedy coloring: a term takes the smallest color not used by an
  // overlapping earlier term.
  std::vector<std::size_t> colors(terms.size(), 0);
  for (std::size_t a = 0; a < terms.size(); ++a) {
    std::vector<bool> taken;
    for (std::size_t b = 0; b < a; ++b) {
      bool overlap = false;
      const auto& xa = terms[a].string.x_mask();
      const auto& za = terms[a].string.z_mask();
      const auto& xb = terms[b].string.x_mask();
      const auto& zb = terms[b].string.z_mask();
      for (std::size_t w = 0; w < xa.size() && !overlap; ++w) overlap = ((xa[w] | za[w]) & (xb[w] | zb[w])) != 0;
      if (!overlap) continue;
      if (taken.size() <= colors[b]) taken.resize(colors[b] + 1, false);
      taken[colors[b]] = true;
    }
    std::size_t c = 0;
    while (c < taken.size() && taken[c]) ++c;
    colors[a] = c;
  }

  Circuit circuit(hn.n_qubits());
  for (std::size_t step = 0; step < n_steps; ++step) {
    if (order == 1) {
      for (std::size_t k = 0; k < terms.size(); ++k) emit(circuit, terms[k], -terms[k].coeff * tau, colors[k]);
      continue;
    }
    const std::size_t last = terms.size();
    for (std::size_t k = 0; k + 1 < last; ++k) emit(circuit, terms[k], -terms[k].coeff * tau / 2, colors[k]);
    if (last > 0) emit(circuit, terms[last - 1], -terms[last - 1].coeff * tau, colors[last - 1]);
    for (std::size_t k = last; k-- > 1;) emit(circuit, terms[k - 1], -terms[k - 1].coeff * tau / 2, colors[k - 1]);
  }
  return circuit;
}

void apply(const Circuit& circuit, StateVector& state) {
  if (circuit.n_qubits() != state.n_qubits()) {
    throw DimensionError("circuit acts on " + std::to_string(circuit.n_qubits()) + " qubits, state has " +
                         std::to_string(state.n_qubits()));
  }
  for (const auto& g : circuit.gates()) {
    std::visit(Overloaded{
                   [&](const PauliExpGate& x) { pauli_exponential_step(state, x.string, x.theta); },
                   [&](const RotationGate& x) { state.apply_1q(x.qubit, axis_rotation(x.axis, x.angle)); },
                   [&](const HadamardGate& x) { state.apply_1q(x.qubit, hadamard()); },
                   [&](const CnotNGate& x) { cnot_n(state, x.control, x.targets); },
                   [&](const PlaquetteGate& x) { plaquette_step(state, x.qubits, x.phi); },
                   [&](const StarGate& x) { star_step(state, x.qubits, x.phi); },
                   [&](const XXGate& x) { heisenberg_xx_step(state, x.i, x.j, x.theta); },
               },
               g.op);
  }
}

StateVector run(const Circuit& circuit, StateVector state) {
  apply(circuit, state);
  return state;
}

double step_error(const OperatorSum& h, double tau, int order) {
  const Circuit c = trotterize(h, tau, 1, order);
  const Eigen::MatrixXcd u = circuit_matrix(h.n_qubits(), [&](StateVector& s) { apply(c, s); });
  const Eigen::MatrixXcd diff = u - exact_propagator(h, tau, h.n_qubits());
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(diff).singularValues()(0);
}

Circuit expand_pauli_exponential(const PauliString& p, double theta) {
  if (!p.is_hermitian()) throw ContractError("Pauli exponential needs a Hermitian string");
  const auto support = p.support();
  if (support.empty()) throw ContractError("identity string has no gate realization");
  const double angle = p.phase() == 2 ? -theta : theta;
  Circuit c(p.n_qubits());
  if (support.size() == 1) {
    c.add(RotationGate{support[0], p.at(support[0]), angle});
    return c;
  }
  auto basis_change = [&](bool into_x) {
    for (auto q : support) {
      if (p.at(q) == Pauli::Z) c.add(HadamardGate{q});
      if (p.at(q) == Pauli::Y) c.add(RotationGate{q, Pauli::Z, into_x ? kQuarter : -kQuarter});
    }
  };
  const std::vector<std::size_t> targets(support.begin() + 1, support.end());
  basis_change(true);
  c.add(CnotNGate{support[0], targets});
  c.add(RotationGate{support[0], Pauli::X, angle});
  c.add(CnotNGate{support[0], targets});
  basis_change(false);
  return c;
}

Circuit compile_hopping_term(std::size_t i, std::size_t j, std::size_t string_site, double t_hop, double tau,
                             std::size_t n_qubits) {
  if (i == j || i == string_site || j == string_site) {
    throw GeometryError("hopping term needs three distinct qubits");
  }
  const std::size_t top = std::max({i, j, string_site});
  if (top >= n_qubits) throw GeometryError("hopping term qubit outside the register");
  Circuit c(n_qubits);
  const double phi = t_hop * tau;
  if (phi == 0.0) return c;
  for (Pauli axis : {Pauli::X, Pauli::Y}) {
    PauliString p(n_qubits);
    p.set(i, axis);
    p.set(j, axis);
    p.set(string_site, Pauli::Z);
    c.append(expand_pauli_exponential(p, phi));
  }
  return c;
}

}  // namespace rydsim
