#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/fit.hpp"
#include "rydsim/pulse.hpp"

using namespace rydsim;

namespace {

constexpr double kPi = std::numbers::pi;

PulseProfile rectangular(double duration, double x_max, double blockade = kInfiniteBlockade) {
  PulseProfile p;
  p.duration = duration;
  p.x_max = x_max;
  p.shape = PulseShape::rectangular;
  p.blockade = blockade;
  return p;
}

// Constant-x propagator exp(-i T heff) in the {|+>, |->, |R>} basis.
Eigen::MatrixXcd rect_oracle(const PulseProfile& p, double blockade) {
  const Eigen::MatrixXcd h = heff(p.x_max, blockade, p.omega_c, p.delta);
  return oracle::expm(h, oracle::cplx(0, -p.duration));
}

}  // namespace

TEST(Pulse, ProfileValidation) {
  EXPECT_THROW(sin2_pulse(-1.0, 0.1), ContractError);
  EXPECT_THROW(sin2_pulse(1.0, -0.1), ContractError);
  EXPECT_THROW(sin2_pulse(1.0, 0.1, 2.0, 0.0), ContractError);
  PulseProfile p = sin2_pulse(4.0, 0.3);
  EXPECT_DOUBLE_EQ(p.x(0.0), 0.0);
  EXPECT_NEAR(p.x(4.0), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(p.x(2.0), 0.3);
  EXPECT_DOUBLE_EQ(p.energy_scale(), 1.0);
}

TEST(Pulse, RamanAreaOfSin2IsThreeEighths) {
  const PulseProfile p = sin2_pulse(10.0, 0.4, 3.0, 1.5);
  const double want = p.energy_scale() * 0.16 * 3.0 * 10.0 / 8.0;
  EXPECT_NEAR(raman_area(p), want, 1e-12);
  EXPECT_NEAR(raman_area(calibrate_area(p, kPi)), kPi, 1e-12);
  EXPECT_THROW(calibrate_area(sin2_pulse(10.0, 0.0), kPi), ContractError);
}

TEST(Pulse, RectangularZeroBranchMatchesMatrixExponential) {
  for (double x : {0.1, 0.5, 1.3}) {
    const PulseProfile p = rectangular(7.0, x);
    const PulseEvolution ev = evolve_pulse(p, Branch::zero);
    const Eigen::MatrixXcd u = rect_oracle(p, 0.0);
    EXPECT_LT(std::abs(ev.map_pm(0, 0) - u(0, 0)), 1e-8) << x;
    EXPECT_LT(std::abs(ev.map_pm(1, 1) - 1.0), 1e-8);
    EXPECT_LT(std::abs(ev.map_pm(0, 1)), 1e-12);
    EXPECT_NEAR(ev.leak_r, std::norm(u(2, 0)), 1e-8);
    EXPECT_LT(ev.norm_defect, 1e-8);
  }
}

TEST(Pulse, RectangularFiniteBlockadeMatchesMatrixExponential) {
  const PulseProfile p = rectangular(5.0, 0.6, 4.0);
  const PulseEvolution ev = evolve_pulse(p, Branch::rydberg);
  const Eigen::MatrixXcd u = rect_oracle(p, 4.0);
  EXPECT_LT(std::abs(ev.map_pm(0, 0) - u(0, 0)), 1e-8);
}

TEST(Pulse, InfiniteBlockadeGivesPurePhaseOnPlus) {
  const PulseProfile p = rectangular(3.0, 0.7);
  const PulseEvolution ev = evolve_pulse(p, Branch::rydberg);
  const double phase = p.energy_scale() * 0.49 * 3.0;
  EXPECT_LT(std::abs(ev.map_pm(0, 0) - std::polar(1.0, -phase)), 1e-8);
  EXPECT_LT(std::abs(ev.map_pm(1, 1) - 1.0), 1e-8);
}

TEST(Pulse, FixedStepRk4ConvergesAtFourthOrder) {
  const PulseProfile p = sin2_pulse(6.0, 0.9);
  IntegratorOptions ref;
  ref.rel_tol = 1e-13;
  ref.abs_tol = 1e-14;
  const Eigen::Matrix2cd exact = evolve_pulse(p, Branch::zero, ref).map;
  std::vector<double> steps, errors;
  for (std::size_t n : {40, 80, 160, 320}) {
    IntegratorOptions o;
    o.fixed_steps = n;
    steps.push_back(static_cast<double>(n));
    errors.push_back((evolve_pulse(p, Branch::zero, o).map - exact).norm());
  }
  EXPECT_NEAR(loglog_slope(steps, errors), -4.0, 0.3);
}

TEST(Pulse, CalibratedGateReachesTargetFidelities) {
  // Duration at which x_max = 0.2 already gives area pi.
  const PulseProfile p = calibrate_area(sin2_pulse(kPi / (0.2 * 0.2 * 3.0 / 8.0), 0.2), kPi);
  EXPECT_NEAR(p.x_max, 0.2, 1e-9);
  const GateFidelity f = gate_fidelity(p);
  EXPECT_GE(f.f_rydberg, 0.999);
  EXPECT_GE(f.f_zero, 0.99);
}

TEST(Pulse, ZeroBranchFidelityDegradesWithShorterPulses) {
  double previous = 2.0;
  for (double duration : {200.0, 100.0, 50.0, 25.0, 12.5}) {
    const PulseProfile p = calibrate_area(sin2_pulse(duration, 0.2), kPi);
    const GateFidelity f = gate_fidelity(p);
    EXPECT_LT(f.f_zero, previous) << duration;
    EXPECT_GE(f.f_rydberg, 0.999) << duration;
    previous = f.f_zero;
  }
}

TEST(Pulse, EnsemblePhaseEstimate) {
  const PulseProfile p = sin2_pulse(10.0, 0.2);
  EXPECT_NEAR(ensemble_phase_error(5, p), 5 * 1.0 * 10.0 * 0.04, 1e-12);
  EXPECT_THROW(ensemble_phase_error(1, p), ContractError);
}
