#pragma once

// Hamiltonian builders: Kitaev's toric code, the anisotropic Heisenberg
// model and the Fermi-Hubbard model, the latter both as a direct
// Jordan-Wigner image and in the local auxiliary-fermion form.

#include <array>
#include <utility>
#include <vector>

#include "rydsim/pauli.hpp"

namespace rydsim {

// ---------------------------------------------------------------------------
// Toric code

/// Lx x Ly torus with spins on edges. Vertex (x, y) owns the horizontal edge
/// to (x+1, y) and the vertical edge to (x, y+1).
struct ToricLattice {
  std::size_t lx = 0;
  std::size_t ly = 0;
  bool periodic = true;
  /// Edge indices per plaquette; element 0 acts as the control atom.
  std::vector<std::array<std::size_t, 4>> plaquettes;
  std::vector<std::array<std::size_t, 4>> stars;

  std::size_t n_edges() const { return 2 * lx * ly; }
  std::size_t horizontal_edge(std::size_t x, std::size_t y) const;
  std::size_t vertical_edge(std::size_t x, std::size_t y) const;

  /// A_p = XXXX on the plaquette edges.
  PauliString plaquette_operator(std::size_t p) const;
  /// B_s = ZZZZ on the star edges.
  PauliString star_operator(std::size_t s) const;

  /// The two plaquettes (stars) that contain edge e.
  std::array<std::size_t, 2> plaquettes_of_edge(std::size_t e) const;
  std::array<std::size_t, 2> stars_of_edge(std::size_t e) const;
};

/// Throws GeometryError for lx or ly below 2.
ToricLattice make_toric_lattice(std::size_t lx, std::size_t ly);

struct ToricModel {
  OperatorSum hamiltonian;
  ToricLattice lattice;
};

/// H = -E0 (sum_p A_p + sum_s B_s), plaquette terms first.
ToricModel build_toric(std::size_t lx, std::size_t ly, double e0);

// ---------------------------------------------------------------------------
// Heisenberg model

using Bond = std::pair<std::size_t, std::size_t>;

std::vector<Bond> chain_bonds(std::size_t n_sites, bool periodic = false);
/// Open square lattice, site index y * lx + x.
std::vector<Bond> square_bonds(std::size_t lx, std::size_t ly);

/// H = -1/2 sum_<ij> (Jx XX + Jy YY + Jz ZZ) + h sum_i Z, one term per bond.
OperatorSum build_heisenberg(std::size_t n_sites, const std::vector<Bond>& bonds, double jx, double jy,
                             double jz, double h);

// ---------------------------------------------------------------------------
// Fermi-Hubbard model

struct SiteCoord {
  std::size_t x = 0;
  std::size_t y = 0;
  friend bool operator==(const SiteCoord&, const SiteCoord&) = default;
};

/// Boustrophedon enumeration from the lower-left corner: row 0 left to
/// right, row 1 right to left, and so on.
class SnakeOrder {
 public:
  SnakeOrder(std::size_t lx, std::size_t ly);

  std::size_t size() const { return sites_.size(); }
  const SiteCoord& site(std::size_t index) const { return sites_.at(index); }
  std::size_t index(std::size_t x, std::size_t y) const;
  const std::vector<SiteCoord>& sites() const { return sites_; }

 private:
  std::size_t lx_, ly_;
  std::vector<SiteCoord> sites_;
};

SnakeOrder snake_ordering(std::size_t lx, std::size_t ly);

struct HubbardSpec {
  std::size_t lx = 2;
  std::size_t ly = 1;
  double t_hop = 1.0;
  double u = 0.0;
  /// Coupling of the auxiliary layer (local form only).
  double v_aux = 1.0;
  bool spinful = false;

  std::size_t n_sites() const { return lx * ly; }
  std::size_t n_species() const { return spinful ? 2 : 1; }
  /// Fermionic modes of the physical layer.
  std::size_t n_modes() const { return n_sites() * n_species(); }
};

/// Mode index of (snake site, spin); spins are interleaved per site.
std::size_t hubbard_mode(const HubbardSpec& spec, std::size_t snake_index, std::size_t spin);

/// Nearest-neighbour bonds with open boundaries as snake-index pairs (a < b).
struct HubbardBond {
  std::size_t a;
  std::size_t b;
  bool vertical;
};
std::vector<HubbardBond> hubbard_bonds(const HubbardSpec& spec);

/// H = -t sum_<ij>,s (c+_is c_js + h.c.) + U sum_i n_i,up n_i,down on
/// hubbard_modes qubits. Each spin species carries its own Jordan-Wigner
/// string along the snake order; qubit 1 means occupied.
OperatorSum build_hubbard_jw(const HubbardSpec& spec);

// Local form. Every site carries a physical and an auxiliary mode per
// species; qubit of (site s, species sp, aux a) is
// (s * n_species + sp) * 2 + a, and each species' string runs through
// (c_0, d_0, c_1, d_1, ...) in snake order.

std::size_t vc_qubit_count(const HubbardSpec& spec);
std::size_t vc_qubit(const HubbardSpec& spec, std::size_t snake_index, std::size_t spin, bool aux);

/// Throws GeometryError unless lx and ly are even and at least 2.
void check_vc_geometry(const HubbardSpec& spec);

/// Images of P_ij = (d_i + d_i^dag)(d_j - d_j^dag): one per vertical bond
/// (i below j), then one per column closing the top and bottom auxiliary
/// modes, for every species. They are Hermitian involutions, mutually
/// commute and commute with build_hubbard_vc.
std::vector<PauliString> aux_projectors(const HubbardSpec& spec);

/// Number of P P products in the auxiliary Hamiltonian.
std::size_t aux_pair_count(const HubbardSpec& spec);

/// H_aux = -V sum P_v P_v' over horizontally adjacent vertical bonds v, v'.
OperatorSum build_aux_hamiltonian(const HubbardSpec& spec);

/// Hubbard Hamiltonian with every vertical hop c+_i c_j replaced by
/// c+_i c_j P_ij, plus H_aux. All terms act on at most six qubits.
OperatorSum build_hubbard_vc(const HubbardSpec& spec);

}  // namespace rydsim
