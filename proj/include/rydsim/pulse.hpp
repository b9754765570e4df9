#pragma once

// Single ensemble atom under the Raman pulse of the mesoscopic gate, after
// adiabatic elimination of the intermediate level. Basis order {|+>, |->, |R>}
// with |+-> = (|A> +- |B>)/sqrt(2). hbar = 1.

#include <cstddef>
#include <limits>

#include <Eigen/Dense>

namespace rydsim {

enum class PulseShape {
  sin2,         ///< x(t) = x_max sin^2(pi t / T); starts and ends at zero.
  rectangular,  ///< x(t) = x_max on [0, T]; hard-edged analytic test case.
};

inline constexpr double kInfiniteBlockade = std::numeric_limits<double>::infinity();

struct PulseProfile {
  double duration = 0.0;
  double x_max = 0.0;
  PulseShape shape = PulseShape::sin2;
  double omega_c = 2.0;
  double delta = 1.0;
  /// Blockade shift V seen on the Rydberg branch; infinity drops |R>.
  double blockade = kInfiniteBlockade;

  /// Relative probe strength x = sqrt(2) Omega_p / Omega_c at time t.
  double x(double t) const;
  /// Omega_c^2 / (4 Delta), the prefactor of the effective Hamiltonian.
  double energy_scale() const { return omega_c * omega_c / (4.0 * delta); }
  /// Throws ContractError on negative duration/amplitude/blockade or zero detuning.
  void validate() const;
};

PulseProfile sin2_pulse(double duration, double x_max, double omega_c = 2.0, double delta = 1.0);

/// Omega_c^2/(4 Delta) [x^2 |+><+| + (1+V)|R><R| + x(|+><R| + h.c.)].
Eigen::Matrix3cd heff(double x, double blockade, double omega_c, double delta);

enum class Branch {
  zero,     ///< control in |0>: V = 0, two-photon resonance
  rydberg,  ///< control in |r>: V = profile.blockade
};

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// 0 selects the adaptive Dormand-Prince scheme; otherwise classical RK4
  /// with this many equal steps.
  std::size_t fixed_steps = 0;
};

struct PulseEvolution {
  /// Map on {|A>, |B>} (column j = image of basis state j), projected out of |R>.
  Eigen::Matrix2cd map;
  /// Same map in the {|+>, |->} basis.
  Eigen::Matrix2cd map_pm;
  /// Population left in |R> from an initial |+>.
  double leak_r = 0.0;
  /// Largest |norm - 1| of the evolved 3-level columns.
  double norm_defect = 0.0;
};

PulseEvolution evolve_pulse(const PulseProfile& profile, Branch branch, const IntegratorOptions& opts = {});

/// Integral of Omega_c^2/(4 Delta) x(t)^2 over the pulse.
double raman_area(const PulseProfile& profile);

/// Rescales the amplitude so that raman_area equals target.
PulseProfile calibrate_area(PulseProfile profile, double target);

struct GateFidelity {
  double f_zero = 0.0;
  double f_rydberg = 0.0;
  double leak_r = 0.0;
};

/// |tr(U_ideal^dag M)/2|^2 for both branches: identity on the zero branch,
/// |A> -> -|B>, |B> -> -|A> on the Rydberg branch. Global phase drops out.
GateFidelity gate_fidelity(const PulseProfile& profile, const IntegratorOptions& opts = {});

/// Dynamical phase estimate N * Omega_c^2/(4 Delta) * T * x_max^2 for an
/// ensemble of N interacting atoms.
double ensemble_phase_error(std::size_t n_atoms, const PulseProfile& profile);

}  // namespace rydsim
