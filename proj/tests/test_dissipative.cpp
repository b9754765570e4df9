#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "rydsim/dissipative.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/fit.hpp"
#include "rydsim/meso_gate.hpp"

using namespace rydsim;

namespace {

constexpr double kPi = std::numbers::pi;

// 1/2 Z_edge (1 - XXXX) on four qubits.
OperatorSum plaquette_jump(std::size_t edge) {
  const PauliString z = PauliString::single(4, edge, Pauli::Z);
  OperatorSum c(4);
  c.add(0.5, z);
  c.add(-0.5, z * PauliString::from_word("XXXX"));
  return c;
}

// Density matrix of the product state |-+++> (A_p = -1).
DensityMatrix excited_plaquette() {
  StateVector s = StateVector::basis(4, 0b0001);
  for (std::size_t q = 0; q < 4; ++q) s.apply_1q(q, hadamard());
  return DensityMatrix::pure(s);
}

double excited_population(const DensityMatrix& rho) {
  const Eigen::MatrixXcd pm = 0.5 * (Eigen::MatrixXcd::Identity(16, 16) - oracle::word_matrix("XXXX"));
  return (pm * rho.matrix()).trace().real();
}

}  // namespace

TEST(Jumps, PlaquetteJumpMatchesDefinition) {
  const ToricLattice lat = make_toric_lattice(2, 2);
  const auto& edges = lat.plaquettes[1];
  const OperatorSum c = jump_operator_plaquette(lat, 1, edges[2]);
  OperatorSum want(lat.n_edges());
  const PauliString z = PauliString::single(lat.n_edges(), edges[2], Pauli::Z);
  want.add(0.5, z);
  want.add(-0.5, z * lat.plaquette_operator(1));
  EXPECT_TRUE(approx_equal(c, want));
  std::size_t off = 0;
  while (std::find(edges.begin(), edges.end(), off) != edges.end()) ++off;
  EXPECT_THROW(jump_operator_plaquette(lat, 1, off), GeometryError);
  const OperatorSum cs = jump_operator_star(lat, 0, lat.stars[0][0]);
  EXPECT_EQ(cs.size(), 2u);
}

TEST(Lindblad, SingleJumpDecaysExponentially) {
  const DensityMatrix rho0 = excited_plaquette();
  const double gamma = 0.7;
  for (double t : {0.5, 1.0, 3.0}) {
    const DensityMatrix rho = lindblad_integrate({plaquette_jump(0)}, gamma, rho0, t);
    EXPECT_NEAR(excited_population(rho), std::exp(-gamma * t), 1e-6);
    EXPECT_TRUE(rho.is_valid(1e-8));
  }
}

TEST(Lindblad, FourJumpsAddRates) {
  std::vector<OperatorSum> jumps;
  for (std::size_t e = 0; e < 4; ++e) jumps.push_back(plaquette_jump(e));
  const DensityMatrix rho = lindblad_integrate(jumps, 0.25, excited_plaquette(), 2.0);
  EXPECT_NEAR(excited_population(rho), std::exp(-2.0), 1e-6);
}

TEST(Lindblad, EdgeCases) {
  const DensityMatrix rho0 = excited_plaquette();
  EXPECT_LT((lindblad_integrate({plaquette_jump(0)}, 0.0, rho0, 5.0).matrix() - rho0.matrix()).norm(), 1e-15);
  EXPECT_THROW(lindblad_integrate({plaquette_jump(0)}, -1.0, rho0, 1.0), ContractError);
  EXPECT_THROW(lindblad_integrate({plaquette_jump(0)}, 1.0, rho0, -1.0), ContractError);
  const DensityMatrix big(Eigen::MatrixXcd::Identity(128, 128) / 128.0);
  EXPECT_THROW(lindblad_integrate({OperatorSum(7)}, 1.0, big, 1.0), ResourceError);
}

TEST(Syndromes, GroundAndEnergy) {
  const ToricLattice lat = make_toric_lattice(3, 3);
  SyndromeConfig g = SyndromeConfig::ground(lat);
  EXPECT_EQ(g.excited_count(), 0u);
  EXPECT_DOUBLE_EQ(g.energy(2.0), -36.0);
  g.plaquette_bits[0] = -1;
  EXPECT_FALSE(g.satisfies_parity());
  g.plaquette_bits[4] = -1;
  EXPECT_TRUE(g.satisfies_parity());
  EXPECT_DOUBLE_EQ(g.energy(), -14.0);
}

TEST(Syndromes, InitialSamplerRespectsParity) {
  const ToricLattice lat = make_toric_lattice(4, 4);
  Rng rng = make_stream(3, 0);
  for (int rep = 0; rep < 200; ++rep) {
    EXPECT_TRUE(sample_initial_syndromes(lat, 0.5, rng).satisfies_parity());
  }
  EXPECT_EQ(sample_initial_syndromes(lat, 0.0, rng).excited_count(), 0u);
}

TEST(Syndromes, SweepsNeverCreateExcitations) {
  const ToricLattice lat = make_toric_lattice(4, 4);
  Rng rng = make_stream(4, 0);
  for (int rep = 0; rep < 50; ++rep) {
    SyndromeConfig c = sample_initial_syndromes(lat, 0.5, rng);
    for (int step = 0; step < 10; ++step) {
      const std::size_t before = c.excited_count();
      syndrome_mc_step(c, lat, kPi / 3, rng);
      EXPECT_LE(c.excited_count(), before);
      EXPECT_TRUE(c.satisfies_parity());
    }
  }
}

TEST(Syndromes, RunIsDeterministicAndCoolsToGround) {
  const ToricLattice lat = make_toric_lattice(4, 4);
  CoolingParams params;
  params.n_trajectories = 200;
  params.seed = 11;
  const EnergyTrace a = syndrome_mc_run(lat, params);
  const EnergyTrace b = syndrome_mc_run(lat, params);
  EXPECT_EQ(a.mean, b.mean);
  ASSERT_EQ(a.mean.size(), params.n_steps + 1);
  EXPECT_GT(a.mean.front(), -20.0);
  EXPECT_LT(a.mean.back(), -31.5);
  params.theta = 0.0;
  EXPECT_THROW(params.validate(), ContractError);
}

TEST(Trajectory, GroundStateIsDarkForEveryCycle) {
  const ToricLattice lat = make_toric_lattice(2, 2);
  const StateVector ground = prepare_syndrome_state(lat, SyndromeConfig::ground(lat));
  Rng rng = make_stream(5, 0);
  for (auto type : {Stabilizer::plaquette, Stabilizer::star}) {
    for (std::size_t k = 0; k < 4; ++k) {
      for (int rep = 0; rep < 4; ++rep) {
        StateVector s = ground;
        EXPECT_FALSE(cooling_cycle_trajectory(s, lat, type, k, kPi / 2, rng));
        EXPECT_LT(1.0 - std::norm(ground.inner(s)), 1e-10);
      }
    }
  }
}

TEST(Trajectory, PreparedStateHasRequestedSyndromes) {
  const ToricLattice lat = make_toric_lattice(2, 2);
  SyndromeConfig c = SyndromeConfig::ground(lat);
  c.plaquette_bits[0] = c.plaquette_bits[3] = -1;
  c.star_bits[1] = c.star_bits[2] = -1;
  const StateVector s = prepare_syndrome_state(lat, c);
  const std::size_t n = lat.n_edges() + 1;
  EXPECT_NEAR(expectation(s, toric_energy_operator(lat, 1.0, n)), c.energy(), 1e-12);
  for (std::size_t p = 0; p < 4; ++p) {
    PauliString a(n);
    for (auto e : lat.plaquettes[p]) a.set(e, Pauli::X);
    EXPECT_NEAR(expectation(s, a).real(), c.plaquette_bits[p], 1e-12);
  }
}

TEST(Trajectory, FullPumpFlipsWithCertainty) {
  const ToricLattice lat = make_toric_lattice(2, 2);
  SyndromeConfig c = SyndromeConfig::ground(lat);
  c.plaquette_bits[0] = c.plaquette_bits[1] = -1;
  Rng rng = make_stream(6, 0);
  StateVector s = prepare_syndrome_state(lat, c);
  EXPECT_TRUE(cooling_cycle_trajectory(s, lat, Stabilizer::plaquette, 0, kPi, rng));
  const double e = expectation(s, toric_energy_operator(lat, 1.0, lat.n_edges() + 1));
  // The pair annihilates or hops; the energy cannot rise.
  EXPECT_LE(e, c.energy() + 1e-12);
}

TEST(Trajectory, FlipFrequencyMatchesSinSquared) {
  const ToricLattice lat = make_toric_lattice(2, 2);
  SyndromeConfig c = SyndromeConfig::ground(lat);
  c.star_bits[0] = c.star_bits[3] = -1;
  const StateVector excited = prepare_syndrome_state(lat, c);
  const double theta = kPi / 3;
  Rng rng = make_stream(7, 0);
  const int cycles = 10000;
  int flips = 0;
  for (int k = 0; k < cycles; ++k) {
    StateVector s = excited;
    if (cooling_cycle_trajectory(s, lat, Stabilizer::star, 0, theta, rng)) ++flips;
  }
  const double p = flip_probability(theta);
  EXPECT_NEAR(flips / double(cycles), p, 4 * std::sqrt(p * (1 - p) / cycles));
}

TEST(Channel, KrausIsTracePreservingAndRateScalesAsThetaSquared) {
  const std::vector<std::size_t> support{0, 1, 2, 3};
  std::vector<double> thetas, rates;
  for (double theta : {0.02, 0.05, 0.1, 0.2}) {
    const auto kraus = cooling_kraus(4, support, Stabilizer::plaquette, theta);
    ASSERT_EQ(kraus.size(), 8u);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(16, 16);
    for (const auto& k : kraus) sum += k.adjoint() * k;
    EXPECT_LT((sum - Eigen::MatrixXcd::Identity(16, 16)).norm(), 1e-12);
    DensityMatrix rho = excited_plaquette();
    const int cycles = 20;
    for (int n = 0; n < cycles; ++n) rho = apply_channel(kraus, rho);
    EXPECT_NEAR(excited_population(rho), std::pow(1.0 - flip_probability(theta), cycles), 1e-12);
    thetas.push_back(theta);
    rates.push_back(-std::log(excited_population(rho)) / cycles);
  }
  EXPECT_NEAR(loglog_slope(thetas, rates), 2.0, 0.2);
}

TEST(Equivalence, EnginesAgreeOnSmallTorus) {
  const ToricLattice lat = make_toric_lattice(2, 2);
  CoolingParams params;
  params.n_trajectories = 200;
  params.n_steps = 8;
  params.seed = 21;
  params.theta = kPi / 2;
  const EquivalenceReport r = equivalence_check(lat, params);
  EXPECT_EQ(r.z_scores.size(), params.n_steps + 1);
  EXPECT_TRUE(r.agree) << r.max_z;
}
