#pragma once

// Dissipative cooling of the toric code at three levels of description:
// Lindblad integration of the density matrix, quantum trajectories with a
// reused ancilla, and a classical Monte Carlo on the stabilizer syndromes.
//
// Convention: the pump rotation is U^z(theta) = exp(i theta Z / 2), so an
// excited stabilizer is flipped with probability sin^2(theta / 2) per cycle.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rydsim/models.hpp"
#include "rydsim/pauli.hpp"
#include "rydsim/rng.hpp"
#include "rydsim/statevec.hpp"

namespace rydsim {

enum class Stabilizer { plaquette, star };

/// c_p = 1/2 Z_i (1 - A_p). Throws GeometryError unless edge i is on p.
OperatorSum jump_operator_plaquette(const ToricLattice& lattice, std::size_t p, std::size_t edge);
/// c_s = 1/2 X_i (1 - B_s).
OperatorSum jump_operator_star(const ToricLattice& lattice, std::size_t s, std::size_t edge);

inline constexpr std::size_t kDensityQubitCap = 6;

struct LindbladOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

/// Integrates d rho/dt = gamma sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho})
/// with H = 0 up to time t. gamma = 0 returns rho0 unchanged. Throws
/// ResourceError above kDensityQubitCap qubits and ContractError for
/// gamma < 0 or t < 0.
DensityMatrix lindblad_integrate(const std::vector<OperatorSum>& jumps, double gamma, const DensityMatrix& rho0,
                                 double t, const LindbladOptions& opts = {});

// ---------------------------------------------------------------------------
// Syndromes

/// Stabilizer eigenvalues (+1 / -1) of a toric-code eigenstate.
struct SyndromeConfig {
  std::vector<int> plaquette_bits;
  std::vector<int> star_bits;

  static SyndromeConfig ground(const ToricLattice& lattice);
  double energy(double e0 = 1.0) const;
  std::size_t excited_count() const;
  /// prod A_p = prod B_s = +1.
  bool satisfies_parity() const;
};

struct CoolingParams {
  double theta = 3.141592653589793;
  std::size_t n_steps = 40;
  std::size_t n_trajectories = 1000;
  /// Probability that a stabilizer starts excited, before parity repair.
  double q_init = 0.5;
  std::uint64_t seed = 1;
  double e0 = 1.0;

  /// Throws ContractError unless theta in (0, pi] and q_init in [0, 1].
  void validate() const;
};

/// Stabilizers excited i.i.d. with probability q, then one uniformly chosen
/// bit flipped for each violated parity constraint.
SyndromeConfig sample_initial_syndromes(const ToricLattice& lattice, double q_init, Rng& rng);

/// One sweep: every plaquette, then every star, each in a fresh random
/// order. An excited stabilizer moves with probability sin^2(theta/2) by
/// flipping a random one of its four edges, which toggles both stabilizers
/// sharing that edge.
void syndrome_mc_step(SyndromeConfig& config, const ToricLattice& lattice, double theta, Rng& rng);

/// Mean energy per step with its standard error; entry 0 is the initial state.
struct EnergyTrace {
  std::vector<double> mean;
  std::vector<double> stderr_of_mean;
};

EnergyTrace syndrome_mc_run(const ToricLattice& lattice, const CoolingParams& params);

// ---------------------------------------------------------------------------
// Quantum trajectories

/// Qubit budget of trajectory simulations (system edges plus one ancilla).
inline constexpr std::size_t kTrajectoryQubitCap = 20;

enum class TrajectoryInit {
  /// Syndromes from sample_initial_syndromes, realized as a stabilizer state.
  syndromes,
  /// Uniformly random computational basis state (definite star syndromes)
  /// followed by a projective readout of every plaquette. Matches the
  /// syndrome sampler at q_init = 0.5.
  random_basis_readout,
};

/// Register of n_edges system qubits and one ancilla (the last qubit) in a
/// joint stabilizer eigenstate with the given syndromes; ancilla in |0>.
StateVector prepare_syndrome_state(const ToricLattice& lattice, const SyndromeConfig& config);

/// One cooling cycle on stabilizer `index`: ancilla in |0>, S, controlled
/// U^z on a uniformly random edge of the stabilizer (X-type pump for stars),
/// S, ancilla measured in Z and reset. Returns whether the ancilla read 1,
/// i.e. whether the stabilizer was flipped.
bool cooling_cycle_trajectory(StateVector& state, const ToricLattice& lattice, Stabilizer type, std::size_t index,
                              double theta, Rng& rng);

/// H = -E0 (sum A_p + sum B_s) on the system qubits of a register with ancilla.
OperatorSum toric_energy_operator(const ToricLattice& lattice, double e0, std::size_t n_qubits);

EnergyTrace trajectory_run(const ToricLattice& lattice, const CoolingParams& params,
                           TrajectoryInit init = TrajectoryInit::syndromes);

struct EquivalenceReport {
  EnergyTrace syndrome;
  EnergyTrace trajectory;
  /// Per-step |difference| / combined standard error (0 where both are exact
  /// and equal, infinity where both are exact and differ).
  std::vector<double> z_scores;
  double max_z = 0.0;
  bool agree = false;
};

/// Runs both engines with the same parameters (trajectories start from
/// random_basis_readout) and compares the traces at 3 sigma.
EquivalenceReport equivalence_check(const ToricLattice& lattice, const CoolingParams& params, double z_limit = 3.0);

// ---------------------------------------------------------------------------
// Exact averaged cycle

/// Kraus operators of one cooling cycle on an isolated stabilizer given by
/// `support` in an n_system register, averaged over the pump edge and with
/// the ancilla traced out (weights included).
std::vector<Eigen::MatrixXcd> cooling_kraus(std::size_t n_system, const std::vector<std::size_t>& support,
                                            Stabilizer type, double theta);

/// rho -> sum_k K rho K^dag.
DensityMatrix apply_channel(const std::vector<Eigen::MatrixXcd>& kraus, const DensityMatrix& rho);

}  // namespace rydsim
