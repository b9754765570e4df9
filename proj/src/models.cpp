#include "rydsim/models.hpp"

#include <algorithm>
#include <set>

#include "rydsim/errors.hpp"

namespace rydsim {

// ---------------------------------------------------------------------------
// Toric code

std::size_t ToricLattice::horizontal_edge(std::size_t x, std::size_t y) const {
  return (y % ly) * lx + (x % lx);
}

std::size_t ToricLattice::vertical_edge(std::size_t x, std::size_t y) const {
  return lx * ly + (y % ly) * lx + (x % lx);
}

PauliString ToricLattice::plaquette_operator(std::size_t p) const {
  PauliString s(n_edges());
  for (auto e : plaquettes.at(p)) s.set(e, Pauli::X);
  return s;
}

PauliString ToricLattice::star_operator(std::size_t s) const {
  PauliString out(n_edges());
  for (auto e : stars.at(s)) out.set(e, Pauli::Z);
  return out;
}

std::array<std::size_t, 2> ToricLattice::plaquettes_of_edge(std::size_t e) const {
  if (e >= n_edges()) throw GeometryError("edge out of range");
  const std::size_t cell = e % (lx * ly);
  const std::size_t x = cell % lx, y = cell / lx;
  if (e < lx * ly) return {y * lx + x, ((y + ly - 1) % ly) * lx + x};
  return {y * lx + x, y * lx + (x + lx - 1) % lx};
}

std::array<std::size_t, 2> ToricLattice::stars_of_edge(std::size_t e) const {
  if (e >= n_edges()) throw GeometryError("edge out of range");
  const std::size_t cell = e % (lx * ly);
  const std::size_t x = cell % lx, y = cell / lx;
  if (e < lx * ly) return {y * lx + x, y * lx + (x + 1) % lx};
  return {y * lx + x, ((y + 1) % ly) * lx + x};
}

ToricLattice make_toric_lattice(std::size_t lx, std::size_t ly) {
  if (lx < 2 || ly < 2) throw GeometryError("toric lattice needs lx, ly >= 2");
  ToricLattice lat;
  lat.lx = lx;
  lat.ly = ly;
  for (std::size_t y = 0; y < ly; ++y) {
    for (std::size_t x = 0; x < lx; ++x) {
      lat.plaquettes.push_back({lat.horizontal_edge(x, y), lat.vertical_edge(x + 1, y),
                                lat.horizontal_edge(x, y + 1), lat.vertical_edge(x, y)});
      lat.stars.push_back({lat.horizontal_edge(x, y), lat.vertical_edge(x, y),
                           lat.horizontal_edge(x + lx - 1, y), lat.vertical_edge(x, y + ly - 1)});
    }
  }
  return lat;
}

ToricModel build_toric(std::size_t lx, std::size_t ly, double e0) {
  ToricModel m{OperatorSum{}, make_toric_lattice(lx, ly)};
  m.hamiltonian = OperatorSum(m.lattice.n_edges());
  for (std::size_t p = 0; p < m.lattice.plaquettes.size(); ++p) m.hamiltonian.add(-e0, m.lattice.plaquette_operator(p));
  for (std::size_t s = 0; s < m.lattice.stars.size(); ++s) m.hamiltonian.add(-e0, m.lattice.star_operator(s));
  return m;
}

// ---------------------------------------------------------------------------
// Heisenberg model

std::vector<Bond> chain_bonds(std::size_t n_sites, bool periodic) {
  std::vector<Bond> bonds;
  for (std::size_t i = 0; i + 1 < n_sites; ++i) bonds.emplace_back(i, i + 1);
  if (periodic && n_sites > 2) bonds.emplace_back(n_sites - 1, 0);
  return bonds;
}

std::vector<Bond> square_bonds(std::size_t lx, std::size_t ly) {
  std::vector<Bond> bonds;
  for (std::size_t y = 0; y < ly; ++y) {
    for (std::size_t x = 0; x < lx; ++x) {
      const std::size_t i = y * lx + x;
      if (x + 1 < lx) bonds.emplace_back(i, i + 1);
      if (y + 1 < ly) bonds.emplace_back(i, i + lx);
    }
  }
  return bonds;
}

OperatorSum build_heisenberg(std::size_t n_sites, const std::vector<Bond>& bonds, double jx, double jy,
                             double jz, double h) {
  std::set<Bond> seen;
  OperatorSum out(n_sites);
  auto pair_term = [&](std::size_t i, std::size_t j, Pauli p) {
    PauliString s(n_sites);
    s.set(i, p);
    s.set(j, p);
    return s;
  };
  for (auto [i, j] : bonds) {
    if (i == j) throw GeometryError("self-loop on site " + std::to_string(i));
    if (i >= n_sites || j >= n_sites) throw GeometryError("bond endpoint out of range");
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second) {
      throw GeometryError("duplicate bond " + std::to_string(i) + "-" + std::to_string(j));
    }
    if (jx != 0.0) out.add(-0.5 * jx, pair_term(i, j, Pauli::X));
    if (jy != 0.0) out.add(-0.5 * jy, pair_term(i, j, Pauli::Y));
    if (jz != 0.0) out.add(-0.5 * jz, pair_term(i, j, Pauli::Z));
  }
  if (h != 0.0) {
    for (std::size_t i = 0; i < n_sites; ++i) out.add(h, PauliString::single(n_sites, i, Pauli::Z));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fermi-Hubbard model

SnakeOrder::SnakeOrder(std::size_t lx, std::size_t ly) : lx_(lx), ly_(ly) {
  for (std::size_t y = 0; y < ly; ++y) {
    for (std::size_t k = 0; k < lx; ++k) sites_.push_back({y % 2 == 0 ? k : lx - 1 - k, y});
  }
}

std::size_t SnakeOrder::index(std::size_t x, std::size_t y) const {
  if (x >= lx_ || y >= ly_) throw GeometryError("site outside the lattice");
  return y * lx_ + (y % 2 == 0 ? x : lx_ - 1 - x);
}

SnakeOrder snake_ordering(std::size_t lx, std::size_t ly) { return SnakeOrder(lx, ly); }

namespace {

void check_spec(const HubbardSpec& spec) {
  if (spec.lx < 1 || spec.ly < 1) throw GeometryError("Hubbard lattice needs lx, ly >= 1");
}

// Annihilator of mode `k` on the chain of one species.
struct SpeciesChain {
  std::vector<std::size_t> qubits;
  std::size_t n_qubits;

  OperatorSum annihilator(std::size_t k) const { return jw_annihilator(qubits, k, n_qubits); }
  OperatorSum creator(std::size_t k) const { return annihilator(k).adjoint(); }
  OperatorSum number(std::size_t k) const { return creator(k) * annihilator(k); }
  /// c+_a c_b + c+_b c_a
  OperatorSum hop(std::size_t a, std::size_t b) const {
    return (creator(a) * annihilator(b) + creator(b) * annihilator(a)).normalized();
  }
  /// (d + d^dag)(d' - d'^dag) for chain positions a, b.
  OperatorSum majorana_pair(std::size_t a, std::size_t b) const {
    return ((annihilator(a) + creator(a)) * (annihilator(b) - creator(b))).normalized();
  }
};

PauliString single_string(const OperatorSum& op) {
  const OperatorSum n = op.normalized();
  if (n.size() != 1 || std::abs(std::abs(n.terms()[0].coeff) - 1.0) > 1e-12) {
    throw std::logic_error("expected a unit-weight Pauli string");
  }
  const cplx c = n.terms()[0].coeff;
  const unsigned phase = c.real() > 0.5 ? 0 : c.imag() > 0.5 ? 1 : c.real() < -0.5 ? 2 : 3;
  return n.terms()[0].string.with_phase(phase);
}

SpeciesChain jw_chain(const HubbardSpec& spec, std::size_t spin) {
  SpeciesChain chain{{}, spec.n_modes()};
  for (std::size_t s = 0; s < spec.n_sites(); ++s) chain.qubits.push_back(hubbard_mode(spec, s, spin));
  return chain;
}

// Chain (c_0, d_0, c_1, d_1, ...): site s sits at positions 2s and 2s + 1.
SpeciesChain vc_chain(const HubbardSpec& spec, std::size_t spin) {
  SpeciesChain chain{{}, vc_qubit_count(spec)};
  for (std::size_t s = 0; s < spec.n_sites(); ++s) {
    chain.qubits.push_back(vc_qubit(spec, s, spin, false));
    chain.qubits.push_back(vc_qubit(spec, s, spin, true));
  }
  return chain;
}

std::size_t phys(std::size_t s) { return 2 * s; }
std::size_t aux(std::size_t s) { return 2 * s + 1; }

}  // namespace

std::size_t hubbard_mode(const HubbardSpec& spec, std::size_t snake_index, std::size_t spin) {
  if (snake_index >= spec.n_sites() || spin >= spec.n_species()) throw GeometryError("Hubbard mode out of range");
  return snake_index * spec.n_species() + spin;
}

std::vector<HubbardBond> hubbard_bonds(const HubbardSpec& spec) {
  check_spec(spec);
  const SnakeOrder order(spec.lx, spec.ly);
  std::vector<HubbardBond> bonds;
  for (std::size_t y = 0; y < spec.ly; ++y) {
    for (std::size_t x = 0; x + 1 < spec.lx; ++x) {
      const auto a = order.index(x, y), b = order.index(x + 1, y);
      bonds.push_back({std::min(a, b), std::max(a, b), false});
    }
  }
  for (std::size_t y = 0; y + 1 < spec.ly; ++y) {
    for (std::size_t x = 0; x < spec.lx; ++x) {
      bonds.push_back({order.index(x, y), order.index(x, y + 1), true});
    }
  }
  return bonds;
}

OperatorSum build_hubbard_jw(const HubbardSpec& spec) {
  check_spec(spec);
  OperatorSum h(spec.n_modes());
  const auto bonds = hubbard_bonds(spec);
  for (std::size_t spin = 0; spin < spec.n_species(); ++spin) {
    const SpeciesChain chain = jw_chain(spec, spin);
    for (const auto& b : bonds) h += chain.hop(b.a, b.b) * -spec.t_hop;
  }
  if (spec.spinful && spec.u != 0.0) {
    const SpeciesChain up = jw_chain(spec, 0), down = jw_chain(spec, 1);
    for (std::size_t s = 0; s < spec.n_sites(); ++s) h += (up.number(s) * down.number(s)) * spec.u;
  }
  return h.normalized();
}

std::size_t vc_qubit_count(const HubbardSpec& spec) { return 2 * spec.n_modes(); }

std::size_t vc_qubit(const HubbardSpec& spec, std::size_t snake_index, std::size_t spin, bool aux_mode) {
  return 2 * hubbard_mode(spec, snake_index, spin) + (aux_mode ? 1 : 0);
}

void check_vc_geometry(const HubbardSpec& spec) {
  if (spec.lx < 2 || spec.ly < 2 || spec.lx % 2 || spec.ly % 2) {
    throw GeometryError("auxiliary-fermion partition needs even lx, ly >= 2 (got " + std::to_string(spec.lx) +
                        "x" + std::to_string(spec.ly) + ")");
  }
}

std::vector<PauliString> aux_projectors(const HubbardSpec& spec) {
  check_vc_geometry(spec);
  const SnakeOrder order(spec.lx, spec.ly);
  std::vector<PauliString> out;
  for (std::size_t spin = 0; spin < spec.n_species(); ++spin) {
    const SpeciesChain chain = vc_chain(spec, spin);
    for (const auto& b : hubbard_bonds(spec)) {
      if (b.vertical) out.push_back(single_string(chain.majorana_pair(aux(b.a), aux(b.b))));
    }
    for (std::size_t x = 0; x < spec.lx; ++x) {
      const auto top = order.index(x, spec.ly - 1), bottom = order.index(x, 0);
      out.push_back(single_string(chain.majorana_pair(aux(top), aux(bottom))));
    }
  }
  return out;
}

std::size_t aux_pair_count(const HubbardSpec& spec) {
  check_vc_geometry(spec);
  return spec.n_species() * (spec.lx - 1) * (spec.ly - 1);
}

OperatorSum build_aux_hamiltonian(const HubbardSpec& spec) {
  check_vc_geometry(spec);
  const SnakeOrder order(spec.lx, spec.ly);
  OperatorSum h(vc_qubit_count(spec));
  for (std::size_t spin = 0; spin < spec.n_species(); ++spin) {
    const SpeciesChain chain = vc_chain(spec, spin);
    for (std::size_t y = 0; y + 1 < spec.ly; ++y) {
      for (std::size_t x = 0; x + 1 < spec.lx; ++x) {
        const auto p_left = chain.majorana_pair(aux(order.index(x, y)), aux(order.index(x, y + 1)));
        const auto p_right = chain.majorana_pair(aux(order.index(x + 1, y)), aux(order.index(x + 1, y + 1)));
        h += (p_left * p_right) * -spec.v_aux;
      }
    }
  }
  return h.normalized();
}

OperatorSum build_hubbard_vc(const HubbardSpec& spec) {
  check_vc_geometry(spec);
  OperatorSum h(vc_qubit_count(spec));
  const auto bonds = hubbard_bonds(spec);
  for (std::size_t spin = 0; spin < spec.n_species(); ++spin) {
    const SpeciesChain chain = vc_chain(spec, spin);
    for (const auto& b : bonds) {
      OperatorSum hop = chain.hop(phys(b.a), phys(b.b));
      if (b.vertical) hop = hop * chain.majorana_pair(aux(b.a), aux(b.b));
      h += hop * -spec.t_hop;
    }
  }
  if (spec.spinful && spec.u != 0.0) {
    const SpeciesChain up = vc_chain(spec, 0), down = vc_chain(spec, 1);
    for (std::size_t s = 0; s < spec.n_sites(); ++s) h += (up.number(phys(s)) * down.number(phys(s))) * spec.u;
  }
  h += build_aux_hamiltonian(spec);
  return h.normalized();
}

}  // namespace rydsim
