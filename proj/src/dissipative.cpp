#include "rydsim/dissipative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/numeric/odeint.hpp>

#include "rydsim/errors.hpp"
#include "rydsim/meso_gate.hpp"
#include "rydsim/parallel.hpp"

namespace rydsim {
namespace {

namespace odeint = boost::numeric::odeint;

const std::array<std::size_t, 4>& stabilizer_edges(const ToricLattice& lat, Stabilizer type, std::size_t index) {
  const auto& list = type == Stabilizer::plaquette ? lat.plaquettes : lat.stars;
  if (index >= list.size()) throw GeometryError("stabilizer index out of range");
  return list[index];
}

PauliString stabilizer_string(const ToricLattice& lat, Stabilizer type, std::size_t index, std::size_t n_qubits) {
  PauliString s(n_qubits);
  for (auto e : stabilizer_edges(lat, type, index)) s.set(e, type == Stabilizer::plaquette ? Pauli::X : Pauli::Z);
  return s;
}

OperatorSum jump_operator(const ToricLattice& lat, Stabilizer type, std::size_t index, std::size_t edge) {
  const auto& edges = stabilizer_edges(lat, type, index);
  if (std::find(edges.begin(), edges.end(), edge) == edges.end()) {
    throw GeometryError("edge " + std::to_string(edge) + " is not part of the stabilizer");
  }
  const std::size_t n = lat.n_edges();
  const OperatorSum pump(PauliString::single(n, edge, type == Stabilizer::plaquette ? Pauli::Z : Pauli::X));
  const OperatorSum excited = (OperatorSum::identity(n) - OperatorSum(stabilizer_string(lat, type, index, n))) * 0.5;
  return pump * excited;
}

void check_torus_register(const ToricLattice& lat, const StateVector& state) {
  if (state.n_qubits() != lat.n_edges() + 1) {
    throw GeometryError("cooling needs " + std::to_string(lat.n_edges()) + " system qubits plus one ancilla, got " +
                        std::to_string(state.n_qubits()) + " qubits");
  }
}

EnergyTrace reduce(const std::vector<std::vector<double>>& samples, std::size_t n_points) {
  EnergyTrace out;
  const double n = static_cast<double>(samples.size());
  for (std::size_t k = 0; k < n_points; ++k) {
    double sum = 0.0;
    for (const auto& s : samples) sum += s[k];
    const double mean = sum / n;
    double var = 0.0;
    for (const auto& s : samples) var += (s[k] - mean) * (s[k] - mean);
    var = samples.size() > 1 ? var / (n - 1.0) : 0.0;
    out.mean.push_back(mean);
    out.stderr_of_mean.push_back(std::sqrt(var / n));
  }
  return out;
}

std::vector<std::size_t> shuffled(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

std::size_t uniform_index(std::size_t n, Rng& rng) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

void repair_parity(std::vector<int>& bits, Rng& rng) {
  const auto excited = std::count(bits.begin(), bits.end(), -1);
  if (excited % 2 == 1) {
    auto& b = bits[uniform_index(bits.size(), rng)];
    b = -b;
  }
}

}  // namespace

OperatorSum jump_operator_plaquette(const ToricLattice& lattice, std::size_t p, std::size_t edge) {
  return jump_operator(lattice, Stabilizer::plaquette, p, edge);
}

OperatorSum jump_operator_star(const ToricLattice& lattice, std::size_t s, std::size_t edge) {
  return jump_operator(lattice, Stabilizer::star, s, edge);
}

DensityMatrix lindblad_integrate(const std::vector<OperatorSum>& jumps, double gamma, const DensityMatrix& rho0,
                                 double t, const LindbladOptions& opts) {
  const std::size_t n = rho0.n_qubits();
  if (n > kDensityQubitCap) {
    throw ResourceError("Lindblad integration limited to " + std::to_string(kDensityQubitCap) + " qubits, got " +
                        std::to_string(n));
  }
  if (!(gamma >= 0.0)) throw ContractError("dissipation rate gamma must be non-negative");
  if (!(t >= 0.0)) throw ContractError("integration time must be non-negative");
  for (const auto& j : jumps) {
    if (j.n_qubits() != n) throw DimensionError("jump operator does not match the density matrix");
  }
  if (gamma == 0.0 || t == 0.0 || jumps.empty()) return rho0;

  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  std::vector<Eigen::MatrixXcd> ls;
  Eigen::MatrixXcd decay = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& j : jumps) {
    ls.push_back(to_matrix(j, n));
    decay += ls.back().adjoint() * ls.back();
  }
  decay *= 0.5;

  using State = std::vector<cplx>;
  auto rhs = [&](const State& x, State& dxdt, double) {
    const Eigen::Map<const Eigen::MatrixXcd> rho(x.data(), d, d);
    Eigen::Map<Eigen::MatrixXcd> out(dxdt.data(), d, d);
    out = -(decay * rho + rho * decay);
    for (const auto& l : ls) out.noalias() += l * rho * l.adjoint();
    out *= gamma;
  };
  State x(rho0.matrix().data(), rho0.matrix().data() + d * d);
  try {
    auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, rhs, x, 0.0, t, std::min(t, 0.01 / gamma));
  } catch (const odeint::odeint_error& e) {
    throw IntegrationError(std::string("Lindblad integration failed: ") + e.what(), opts.rel_tol);
  }
  Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(x.data(), d, d);
  const double drift = std::abs(rho.trace().real() - rho0.trace());
  if (drift > 1e-8) throw IntegrationError("Lindblad integration lost trace beyond 1e-8", drift);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(rho);
}

// ---------------------------------------------------------------------------

SyndromeConfig SyndromeConfig::ground(const ToricLattice& lattice) {
  return {std::vector<int>(lattice.plaquettes.size(), 1), std::vector<int>(lattice.stars.size(), 1)};
}

double SyndromeConfig::energy(double e0) const {
  const auto sum = std::accumulate(plaquette_bits.begin(), plaquette_bits.end(), 0) +
                   std::accumulate(star_bits.begin(), star_bits.end(), 0);
  return -e0 * sum;
}

std::size_t SyndromeConfig::excited_count() const {
  return static_cast<std::size_t>(std::count(plaquette_bits.begin(), plaquette_bits.end(), -1) +
                                  std::count(star_bits.begin(), star_bits.end(), -1));
}

bool SyndromeConfig::satisfies_parity() const {
  return std::count(plaquette_bits.begin(), plaquette_bits.end(), -1) % 2 == 0 &&
         std::count(star_bits.begin(), star_bits.end(), -1) % 2 == 0;
}

void CoolingParams::validate() const {
  if (!(theta > 0.0 && theta <= std::numbers::pi + 1e-12)) throw ContractError("theta must lie in (0, pi]");
  if (!(q_init >= 0.0 && q_init <= 1.0)) throw ContractError("q_init must lie in [0, 1]");
  if (n_trajectories == 0) throw ContractError("at least one trajectory is required");
}

SyndromeConfig sample_initial_syndromes(const ToricLattice& lattice, double q_init, Rng& rng) {
  SyndromeConfig c = SyndromeConfig::ground(lattice);
  for (auto& b : c.plaquette_bits) b = uniform01(rng) < q_init ? -1 : 1;
  for (auto& b : c.star_bits) b = uniform01(rng) < q_init ? -1 : 1;
  repair_parity(c.plaquette_bits, rng);
  repair_parity(c.star_bits, rng);
  return c;
}

void syndrome_mc_step(SyndromeConfig& config, const ToricLattice& lattice, double theta, Rng& rng) {
  const double p_flip = flip_probability(theta);
  auto sweep = [&](std::vector<int>& bits, Stabilizer type) {
    for (auto idx : shuffled(bits.size(), rng)) {
      const auto& edges = stabilizer_edges(lattice, type, idx);
      const std::size_t edge = edges[uniform_index(4, rng)];
      if (bits[idx] == 1 || uniform01(rng) >= p_flip) continue;
      const auto neighbours =
          type == Stabilizer::plaquette ? lattice.plaquettes_of_edge(edge) : lattice.stars_of_edge(edge);
      for (auto nb : neighbours) bits[nb] = -bits[nb];
    }
  };
  sweep(config.plaquette_bits, Stabilizer::plaquette);
  sweep(config.star_bits, Stabilizer::star);
}

EnergyTrace syndrome_mc_run(const ToricLattice& lattice, const CoolingParams& params) {
  params.validate();
  std::vector<std::vector<double>> samples(params.n_trajectories);
  parallel_for(params.n_trajectories, [&](std::size_t t) {
    Rng rng = make_stream(params.seed, t);
    SyndromeConfig c = sample_initial_syndromes(lattice, params.q_init, rng);
    auto& e = samples[t];
    e.push_back(c.energy(params.e0));
    for (std::size_t step = 0; step < params.n_steps; ++step) {
      syndrome_mc_step(c, lattice, params.theta, rng);
      e.push_back(c.energy(params.e0));
    }
  });
  return reduce(samples, params.n_steps + 1);
}

// ---------------------------------------------------------------------------

StateVector prepare_syndrome_state(const ToricLattice& lattice, const SyndromeConfig& config) {
  if (!config.satisfies_parity()) throw ContractError("syndrome configuration violates the parity constraints");
  if (config.plaquette_bits.size() != lattice.plaquettes.size() || config.star_bits.size() != lattice.stars.size()) {
    throw DimensionError("syndrome configuration does not match the lattice");
  }
  const std::size_t n = lattice.n_edges() + 1;
  if (n > kTrajectoryQubitCap) throw ResourceError("lattice too large for state-vector trajectories");

  // Star syndromes are diagonal: pair up excited stars and flip the edges of
  // a path between each pair.
  std::uint64_t bits = 0;
  std::vector<std::size_t> excited;
  for (std::size_t s = 0; s < config.star_bits.size(); ++s) {
    if (config.star_bits[s] == -1) excited.push_back(s);
  }
  for (std::size_t k = 0; k + 1 < excited.size(); k += 2) {
    std::size_t x = excited[k] % lattice.lx, y = excited[k] / lattice.lx;
    const std::size_t tx = excited[k + 1] % lattice.lx, ty = excited[k + 1] / lattice.lx;
    for (; x != tx; x = (x + 1) % lattice.lx) bits ^= std::uint64_t{1} << lattice.horizontal_edge(x, y);
    for (; y != ty; y = (y + 1) % lattice.ly) bits ^= std::uint64_t{1} << lattice.vertical_edge(x, y);
  }
  StateVector state = StateVector::basis(n, bits);
  for (std::size_t p = 0; p < config.plaquette_bits.size(); ++p) {
    if (state.project(stabilizer_string(lattice, Stabilizer::plaquette, p, n), config.plaquette_bits[p]) <= 0.0) {
      throw std::logic_error("plaquette projection annihilated the state");
    }
  }
  return state;
}

bool cooling_cycle_trajectory(StateVector& state, const ToricLattice& lattice, Stabilizer type, std::size_t index,
                              double theta, Rng& rng) {
  check_torus_register(lattice, state);
  const auto& edges = stabilizer_edges(lattice, type, index);
  const std::size_t ancilla = lattice.n_edges();
  const std::size_t pump = edges[uniform_index(4, rng)];
  const bool star = type == Stabilizer::star;
  if (star) {
    for (auto e : edges) state.apply_1q(e, hadamard());
  }
  syndrome_map_S(state, ancilla, edges);
  controlled_zflip(state, ancilla, pump, theta);
  syndrome_map_S(state, ancilla, edges);
  if (star) {
    for (auto e : edges) state.apply_1q(e, hadamard());
  }
  Measurement m = measure_projector(state, PauliString::single(state.n_qubits(), ancilla, Pauli::Z), rng);
  state = std::move(m.collapsed);
  const bool flipped = m.outcome == -1;
  if (flipped) state.apply(PauliString::single(state.n_qubits(), ancilla, Pauli::X));
  return flipped;
}

OperatorSum toric_energy_operator(const ToricLattice& lattice, double e0, std::size_t n_qubits) {
  if (n_qubits < lattice.n_edges()) throw DimensionError("register smaller than the lattice");
  OperatorSum h(n_qubits);
  for (std::size_t p = 0; p < lattice.plaquettes.size(); ++p) {
    h.add(-e0, stabilizer_string(lattice, Stabilizer::plaquette, p, n_qubits));
  }
  for (std::size_t s = 0; s < lattice.stars.size(); ++s) {
    h.add(-e0, stabilizer_string(lattice, Stabilizer::star, s, n_qubits));
  }
  return h;
}

EnergyTrace trajectory_run(const ToricLattice& lattice, const CoolingParams& params, TrajectoryInit init) {
  params.validate();
  const std::size_t n = lattice.n_edges() + 1;
  if (n > kTrajectoryQubitCap) {
    throw ResourceError("trajectory simulation of " + std::to_string(n) + " qubits exceeds the cap of " +
                        std::to_string(kTrajectoryQubitCap));
  }
  const OperatorSum energy = toric_energy_operator(lattice, params.e0, n);
  std::vector<std::vector<double>> samples(params.n_trajectories);
  parallel_for(params.n_trajectories, [&](std::size_t t) {
    Rng rng = make_stream(params.seed, t);
    StateVector state(n);
    if (init == TrajectoryInit::syndromes) {
      state = prepare_syndrome_state(lattice, sample_initial_syndromes(lattice, params.q_init, rng));
    } else {
      const std::uint64_t bits = rng() & ((std::uint64_t{1} << lattice.n_edges()) - 1);
      state = StateVector::basis(n, bits);
      for (std::size_t p = 0; p < lattice.plaquettes.size(); ++p) {
        state = measure_projector(state, stabilizer_string(lattice, Stabilizer::plaquette, p, n), rng).collapsed;
      }
    }
    auto& e = samples[t];
    e.push_back(expectation(state, energy));
    for (std::size_t step = 0; step < params.n_steps; ++step) {
      for (auto p : shuffled(lattice.plaquettes.size(), rng)) {
        cooling_cycle_trajectory(state, lattice, Stabilizer::plaquette, p, params.theta, rng);
      }
      for (auto s : shuffled(lattice.stars.size(), rng)) {
        cooling_cycle_trajectory(state, lattice, Stabilizer::star, s, params.theta, rng);
      }
      e.push_back(expectation(state, energy));
    }
  });
  return reduce(samples, params.n_steps + 1);
}

EquivalenceReport equivalence_check(const ToricLattice& lattice, const CoolingParams& params, double z_limit) {
  EquivalenceReport r;
  r.syndrome = syndrome_mc_run(lattice, params);
  CoolingParams traj = params;
  traj.seed = params.seed ^ 0x9e3779b97f4a7c15ULL;
  // The readout initialization samples the q_init = 0.5 distribution; other
  // values go through the syndrome sampler.
  r.trajectory = trajectory_run(lattice, traj,
                                params.q_init == 0.5 ? TrajectoryInit::random_basis_readout : TrajectoryInit::syndromes);
  for (std::size_t k = 0; k < r.syndrome.mean.size(); ++k) {
    const double diff = std::abs(r.syndrome.mean[k] - r.trajectory.mean[k]);
    const double se = std::hypot(r.syndrome.stderr_of_mean[k], r.trajectory.stderr_of_mean[k]);
    double z;
    if (se > 0.0) {
      z = diff / se;
    } else {
      z = diff < 1e-9 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    r.z_scores.push_back(z);
    r.max_z = std::max(r.max_z, z);
  }
  r.agree = r.max_z <= z_limit;
  return r;
}

// ---------------------------------------------------------------------------

std::vector<Eigen::MatrixXcd> cooling_kraus(std::size_t n_system, const std::vector<std::size_t>& support,
                                            Stabilizer type, double theta) {
  if (support.size() != 4) throw GeometryError("a stabilizer acts on four qubits");
  const std::size_t n = n_system + 1;
  if (n > kPropagatorQubitCap) throw ResourceError("cooling channel register too large");
  validate_geometry(n, n_system, support);
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_system);
  std::vector<Eigen::MatrixXcd> kraus;
  for (auto pump : support) {
    const Eigen::MatrixXcd u = circuit_matrix(n, [&](StateVector& s) {
      if (type == Stabilizer::star) {
        for (auto e : support) s.apply_1q(e, hadamard());
      }
      syndrome_map_S(s, n_system, support);
      controlled_zflip(s, n_system, pump, theta);
      syndrome_map_S(s, n_system, support);
      if (type == Stabilizer::star) {
        for (auto e : support) s.apply_1q(e, hadamard());
      }
    });
    // Ancilla is the most significant qubit; it starts in |0>.
    for (Eigen::Index m = 0; m < 2; ++m) kraus.push_back(0.5 * u.block(m * d, 0, d, d));
  }
  return kraus;
}

DensityMatrix apply_channel(const std::vector<Eigen::MatrixXcd>& kraus, const DensityMatrix& rho) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& k : kraus) {
    if (k.cols() != rho.matrix().rows()) throw DimensionError("Kraus operator does not match the density matrix");
    out += k * rho.matrix() * k.adjoint();
  }
  return DensityMatrix(out);
}

}  // namespace rydsim
