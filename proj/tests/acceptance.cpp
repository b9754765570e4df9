// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit status on
// any failure. Reference values come from the oracles in oracles.hpp, the
// Fock-space diagonalization or closed forms.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "rydsim/dissipative.hpp"
#include "rydsim/fermion_oracle.hpp"
#include "rydsim/fit.hpp"
#include "rydsim/meso_gate.hpp"
#include "rydsim/models.hpp"
#include "rydsim/pulse.hpp"
#include "rydsim/trotter.hpp"

using namespace rydsim;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated: " << what << "] ";
    }
  }
};

bool run_criterion(int id, const std::string& name, double max_seconds, const std::function<void(Outcome&)>& body) {
  Outcome o;
  o.detail.precision(4);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "exception: " << e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds > max_seconds) {
    o.pass = false;
    o.detail << "[runtime above " << max_seconds << " s]";
  }
  std::printf("[%s] %d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), seconds, o.detail.str().c_str());
  std::fflush(stdout);
  return o.pass;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  return circuit_matrix(c.n_qubits(), [&](StateVector& s) { apply(c, s); });
}

void plaquette_identity(Outcome& o) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  const Eigen::MatrixXcd a = oracle::word_matrix("XXXX");
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const double phi = u(rng);
    const Eigen::MatrixXcd m = circuit_matrix(4, [&](StateVector& s) { plaquette_step(s, {0, 1, 2, 3}, phi); });
    worst = std::max(worst, oracle::spectral_norm(m - oracle::expm(a, cplx(0, phi))));
  }
  o.detail << "max ||G U G - exp(i phi A)|| = " << worst;
  o.require(worst < 1e-10, "error < 1e-10");
}

void toric_exactness(Outcome& o) {
  const ToricModel m = build_toric(2, 2, 1.0);
  std::mt19937_64 rng(202);
  double worst = 0;
  for (double tau : {0.1, 1.0, 10.0}) {
    const Circuit c = trotterize(m.hamiltonian, tau, 1);
    const Eigen::MatrixXcd exact = exact_propagator(m.hamiltonian, tau, 8);
    for (int k = 0; k < 20; ++k) {
      const Eigen::VectorXcd v = oracle::random_state(8, rng);
      const StateVector out = run(c, StateVector::from_eigen(8, v));
      worst = std::max(worst, (out.to_eigen() - exact * v).norm());
    }
  }
  o.detail << "max state distance = " << worst;
  o.require(worst < 1e-9, "distance < 1e-9");
}

void heisenberg_step(Outcome& o) {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const double theta = u(rng);
    const Eigen::MatrixXcd m = circuit_matrix(2, [&](StateVector& s) { heisenberg_xx_step(s, 0, 1, theta); });
    worst = std::max(worst, oracle::spectral_norm(m - oracle::expm(oracle::word_matrix("XX"), cplx(0, theta / 2))));
  }
  const OperatorSum h = build_heisenberg(4, chain_bonds(4), 1.0, 0.7, 0.4, 0.3);
  const std::vector<double> taus{0.01, 0.02, 0.04, 0.08, 0.16};
  std::vector<double> e1, e2;
  for (double tau : taus) {
    e1.push_back(step_error(h, tau, 1));
    e2.push_back(step_error(h, tau, 2));
  }
  const double s1 = loglog_slope(taus, e1), s2 = loglog_slope(taus, e2);
  o.detail << "XX circuit error = " << worst << ", slope order1 = " << s1 << ", order2 = " << s2;
  o.require(worst < 1e-10, "XX error < 1e-10");
  o.require(std::abs(s1 - 2.0) <= 0.2, "order-1 slope 2.0 +- 0.2");
  o.require(std::abs(s2 - 3.0) <= 0.3, "order-2 slope 3.0 +- 0.3");
}

double worst_sector(const HubbardSpec& spec, Encoding enc) {
  double worst = 0;
  for (const auto& cmp : compare_spectra(spec, enc)) worst = std::max(worst, cmp.max_abs_diff);
  return worst;
}

void jw_certification(Outcome& o) {
  double car = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::MatrixXcd ci = to_matrix(jw_annihilator(i, n), n);
      for (std::size_t j = 0; j < n; ++j) {
        const Eigen::MatrixXcd cj = to_matrix(jw_annihilator(j, n), n);
        const Eigen::MatrixXcd delta =
            i == j ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(dim, dim)) : Eigen::MatrixXcd::Zero(dim, dim);
        car = std::max(car, (ci * cj.adjoint() + cj.adjoint() * ci - delta).norm());
        car = std::max(car, (ci * cj + cj * ci).norm());
      }
    }
  }
  HubbardSpec dimer;
  dimer.lx = 2;
  dimer.ly = 1;
  dimer.spinful = true;
  dimer.t_hop = 1.0;
  dimer.u = 4.0;
  HubbardSpec square;
  square.lx = 2;
  square.ly = 2;
  square.t_hop = 1.0;
  const double d1 = worst_sector(dimer, Encoding::jw), d2 = worst_sector(square, Encoding::jw);
  o.detail << "CAR defect = " << car << ", spinful dimer = " << d1 << ", 2x2 spinless = " << d2;
  o.require(car < 1e-12, "CAR at machine precision");
  o.require(d1 < 1e-8 && d2 < 1e-8, "sector spectra within 1e-8");
}

void vc_locality(Outcome& o) {
  std::size_t weight = 0;
  for (std::size_t l : {2, 4}) {
    HubbardSpec spec;
    spec.lx = l;
    spec.ly = l;
    weight = std::max(weight, build_hubbard_vc(spec).max_weight());
  }
  HubbardSpec spec;
  spec.lx = 2;
  spec.ly = 2;
  spec.t_hop = 1.0;
  spec.v_aux = 1.0;
  const double diff = worst_sector(spec, Encoding::vc);
  o.detail << "max term weight = " << weight << ", P=+1 sector spectrum diff = " << diff;
  o.require(weight == 6, "max weight 6");
  o.require(diff < 1e-8, "spectrum within 1e-8");
}

void gate_error_model(Outcome& o) {
  static const char kLetters[] = "IXYZ";
  std::mt19937_64 rng(606);
  std::normal_distribution<double> g;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(16, 16);
  const Eigen::MatrixXcd p0 = 0.5 * (id + oracle::word_matrix("ZIII"));
  const Eigen::MatrixXcd a = oracle::word_matrix("XXXX");
  double lo = 10, hi = -10;
  for (int rep = 0; rep < 5; ++rep) {
    GateSpec spec;
    spec.control = 0;
    spec.targets = {1, 2, 3};
    spec.kind = GateKind::faulty;
    OperatorSum q(4);
    for (int k = 0; k < 6; ++k) {
      std::string w = "I";
      for (int s = 0; s < 3; ++s) w += kLetters[rng() % 4];
      q.add(g(rng), PauliString::from_word(w));
    }
    spec.fault_generator = q.normalized();
    const Eigen::MatrixXcd qm = to_matrix(spec.fault_generator, 4);
    std::vector<double> phis, residuals;
    for (int k = 0; k <= 8; ++k) {
      const double phi = 1e-3 * std::pow(10.0, k / 4.0);
      spec.fault_phase = phi;
      const Eigen::MatrixXcd m = circuit_matrix(4, [&](StateVector& s) { plaquette_step(s, spec, phi); });
      const Eigen::MatrixXcd first = id + cplx(0, 2 * phi) * qm * p0 + cplx(0, phi) * a;
      phis.push_back(phi);
      residuals.push_back(oracle::spectral_norm(m - first));
    }
    const double slope = loglog_slope(phis, residuals);
    lo = std::min(lo, slope);
    hi = std::max(hi, slope);
  }
  o.detail << "residual exponents in [" << lo << ", " << hi << "]";
  o.require(std::abs(lo - 2.0) <= 0.1 && std::abs(hi - 2.0) <= 0.1, "exponent 2.0 +- 0.1");
}

void cooling_fixed_points(Outcome& o) {
  // Dark states: the toric ground state is left invariant by every cycle.
  const ToricLattice lat = make_toric_lattice(2, 2);
  const StateVector ground = prepare_syndrome_state(lat, SyndromeConfig::ground(lat));
  Rng rng = make_stream(707, 0);
  double defect = 0;
  for (double theta : {kPi / 4, kPi / 2, kPi}) {
    for (auto type : {Stabilizer::plaquette, Stabilizer::star}) {
      for (std::size_t k = 0; k < 4; ++k) {
        for (int rep = 0; rep < 4; ++rep) {
          StateVector s = ground;
          cooling_cycle_trajectory(s, lat, type, k, theta, rng);
          defect = std::max(defect, 1.0 - std::norm(ground.inner(s)));
        }
      }
    }
  }

  // Decay rate of one excited plaquette under repeated exact cycles.
  const std::vector<std::size_t> support{0, 1, 2, 3};
  StateVector excited = StateVector::basis(4, 0b0001);
  for (std::size_t q = 0; q < 4; ++q) excited.apply_1q(q, hadamard());
  const Eigen::MatrixXcd minus = 0.5 * (Eigen::MatrixXcd::Identity(16, 16) - oracle::word_matrix("XXXX"));
  std::vector<double> thetas, rates;
  for (double theta : {0.02, 0.04, 0.08, 0.16}) {
    const auto kraus = cooling_kraus(4, support, Stabilizer::plaquette, theta);
    DensityMatrix rho = DensityMatrix::pure(excited);
    std::vector<double> cycles, logpop;
    for (int n = 1; n <= 30; ++n) {
      rho = apply_channel(kraus, rho);
      cycles.push_back(n);
      logpop.push_back(std::log((minus * rho.matrix()).trace().real()));
    }
    // Least-squares slope of log population against cycle count.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < cycles.size(); ++k) {
      sx += cycles[k];
      sy += logpop[k];
      sxx += cycles[k] * cycles[k];
      sxy += cycles[k] * logpop[k];
    }
    const double n = static_cast<double>(cycles.size());
    thetas.push_back(theta);
    rates.push_back(-(n * sxy - sx * sy) / (n * sxx - sx * sx));
  }
  const double exponent = loglog_slope(thetas, rates);

  // Lindblad against exp(-gamma t) for a single jump operator.
  const PauliString z = PauliString::single(4, 0, Pauli::Z);
  OperatorSum c(4);
  c.add(0.5, z);
  c.add(-0.5, z * PauliString::from_word("XXXX"));
  double lind = 0;
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const DensityMatrix rho = lindblad_integrate({c}, 0.8, DensityMatrix::pure(excited), t);
    lind = std::max(lind, std::abs((minus * rho.matrix()).trace().real() - std::exp(-0.8 * t)));
  }
  o.detail << "dark-state defect = " << defect << ", rate exponent = " << exponent << ", Lindblad error = " << lind;
  o.require(defect < 1e-10, "defect < 1e-10");
  o.require(std::abs(exponent - 2.0) <= 0.2, "rate exponent 2.0 +- 0.2");
  o.require(lind < 1e-6, "Lindblad within 1e-6");
}

void cooling_curves(Outcome& o) {
  const ToricLattice lat = make_toric_lattice(4, 4);
  CoolingParams params;
  params.n_trajectories = 1000;
  params.n_steps = 40;
  params.seed = 808;
  std::vector<EnergyTrace> traces;
  for (double theta : {kPi, kPi / 2, kPi / 4}) {
    params.theta = theta;
    traces.push_back(syndrome_mc_run(lat, params));
  }
  const double final_pi = traces[0].mean[40];
  auto gap = [&](std::size_t a, std::size_t b) {
    const double se = std::hypot(traces[a].stderr_of_mean[10], traces[b].stderr_of_mean[10]);
    return (traces[b].mean[10] - traces[a].mean[10]) / se;
  };
  const double z1 = gap(0, 1), z2 = gap(1, 2);
  o.detail << "E40(pi) = " << final_pi << ", E10 = " << traces[0].mean[10] << " < " << traces[1].mean[10] << " < "
           << traces[2].mean[10] << " (separations " << z1 << ", " << z2 << " sigma)";
  o.require(std::abs(final_pi + 32.0) <= 0.5, "E40(pi) within 0.5 of -32");
  o.require(z1 >= 3.0 && z2 >= 3.0, "3 sigma ordering at step 10");
}

void engine_equivalence(Outcome& o) {
  const ToricLattice lat = make_toric_lattice(2, 2);
  CoolingParams params;
  params.n_trajectories = 500;
  params.n_steps = 20;
  params.seed = 909;
  bool ok = true;
  for (double theta : {kPi, kPi / 2}) {
    params.theta = theta;
    const EquivalenceReport r = equivalence_check(lat, params);
    o.detail << "theta=" << theta << " max z = " << r.max_z << "; ";
    ok = ok && r.agree;
  }
  o.require(ok, "agreement within 3 sigma at every step");
}

void pulse_gate(Outcome& o) {
  const PulseProfile adiabatic = calibrate_area(sin2_pulse(kPi / (0.2 * 0.2 * 3.0 / 8.0), 0.2), kPi);
  const GateFidelity f = gate_fidelity(adiabatic);
  o.detail << "x_max = " << adiabatic.x_max << ", f_rydberg = " << f.f_rydberg << ", f_zero = " << f.f_zero
           << "; sweep f_zero:";
  o.detail.precision(6);
  bool monotone = true;
  double previous = 2.0;
  for (double duration : {200.0, 100.0, 50.0, 25.0, 12.5}) {
    const GateFidelity g = gate_fidelity(calibrate_area(sin2_pulse(duration, 0.2), kPi));
    o.detail << ' ' << g.f_zero;
    monotone = monotone && g.f_zero < previous;
    previous = g.f_zero;
  }
  o.require(f.f_rydberg >= 0.999, "f_rydberg >= 0.999");
  o.require(f.f_zero >= 0.99, "f_zero >= 0.99");
  o.require(monotone, "f_zero decreasing with shorter pulses");
}

}  // namespace

int main() {
  int failures = 0;
  auto check = [&](int id, const std::string& name, double limit, void (*body)(Outcome&)) {
    if (!run_criterion(id, name, limit, body)) ++failures;
  };
  check(1, "plaquette-decomposition", 1.0, plaquette_identity);
  check(2, "toric-exactness", 30.0, toric_exactness);
  check(3, "heisenberg-step", 10.0, heisenberg_step);
  check(4, "jordan-wigner", 30.0, jw_certification);
  check(5, "local-fermion-encoding", 60.0, vc_locality);
  check(6, "gate-error-model", 10.0, gate_error_model);
  check(7, "cooling-fixed-points-and-rate", 30.0, cooling_fixed_points);
  check(8, "cooling-curves-4x4", 10.0, cooling_curves);
  check(9, "engine-equivalence", 300.0, engine_equivalence);
  check(10, "pulse-level-gate", 30.0, pulse_gate);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
