#include "rydsim/pulse.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "rydsim/errors.hpp"

namespace rydsim {
namespace {

namespace odeint = boost::numeric::odeint;
using cplx = std::complex<double>;
// Two 3-level columns, evolved from |+> and |->.
using OdeState = std::vector<cplx>;

constexpr std::size_t kPlus = 0, kMinus = 1, kRyd = 2;

struct Schroedinger {
  const PulseProfile& profile;
  double blockade;  // infinite: |R> is dropped

  void operator()(const OdeState& psi, OdeState& dpsi, double t) const {
    const double x = profile.x(t);
    const double k = profile.energy_scale();
    for (std::size_t col = 0; col < 2; ++col) {
      const cplx p = psi[3 * col + kPlus];
      const cplx r = psi[3 * col + kRyd];
      cplx hp, hr;
      if (std::isinf(blockade)) {
        hp = k * x * x * p;
        hr = 0.0;
      } else {
        hp = k * (x * x * p + x * r);
        hr = k * (x * p + (1.0 + blockade) * r);
      }
      dpsi[3 * col + kPlus] = cplx(0, -1) * hp;
      dpsi[3 * col + kMinus] = 0.0;
      dpsi[3 * col + kRyd] = cplx(0, -1) * hr;
    }
  }
};

Eigen::Matrix2cd ab_from_pm() {
  Eigen::Matrix2cd w;
  const double r = std::numbers::sqrt2 / 2;
  w << r, r, r, -r;
  return w;
}

}  // namespace

double PulseProfile::x(double t) const {
  if (t < 0.0 || t > duration || duration <= 0.0) return 0.0;
  switch (shape) {
    case PulseShape::rectangular: return x_max;
    case PulseShape::sin2: {
      const double s = std::sin(std::numbers::pi * t / duration);
      return x_max * s * s;
    }
  }
  return 0.0;
}

void PulseProfile::validate() const {
  if (!(duration >= 0.0)) throw ContractError("pulse duration must be non-negative");
  if (!(x_max >= 0.0)) throw ContractError("pulse amplitude x_max must be non-negative");
  if (delta == 0.0) throw ContractError("zero detuning: the intermediate level cannot be eliminated");
  if (!(blockade >= 0.0)) throw ContractError("blockade shift must be non-negative");
}

PulseProfile sin2_pulse(double duration, double x_max, double omega_c, double delta) {
  PulseProfile p;
  p.duration = duration;
  p.x_max = x_max;
  p.shape = PulseShape::sin2;
  p.omega_c = omega_c;
  p.delta = delta;
  p.validate();
  return p;
}

Eigen::Matrix3cd heff(double x, double blockade, double omega_c, double delta) {
  if (delta == 0.0) throw ContractError("zero detuning: the intermediate level cannot be eliminated");
  if (!std::isfinite(blockade)) throw ContractError("heff needs a finite blockade shift");
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(kPlus, kPlus) = x * x;
  h(kRyd, kRyd) = 1.0 + blockade;
  h(kPlus, kRyd) = x;
  h(kRyd, kPlus) = x;
  return (omega_c * omega_c / (4.0 * delta)) * h;
}

PulseEvolution evolve_pulse(const PulseProfile& profile, Branch branch, const IntegratorOptions& opts) {
  profile.validate();
  const double blockade = branch == Branch::zero ? 0.0 : profile.blockade;
  OdeState psi(6, cplx{});
  psi[kPlus] = 1.0;
  psi[3 + kMinus] = 1.0;

  if (profile.duration > 0.0) {
    const Schroedinger rhs{profile, blockade};
    // Resolve the fastest local frequency: the |R> energy or the x^2 shift.
    const double scale = std::abs(profile.energy_scale()) *
                         (1.0 + profile.x_max * profile.x_max + (std::isinf(blockade) ? 0.0 : blockade));
    const double dt0 = std::min(profile.duration, 0.1 / std::max(scale, 1e-300));
    try {
      if (opts.fixed_steps > 0) {
        const double h = profile.duration / static_cast<double>(opts.fixed_steps);
        odeint::integrate_n_steps(odeint::runge_kutta4<OdeState>(), rhs, psi, 0.0, h, opts.fixed_steps);
      } else {
        auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<OdeState>());
        odeint::integrate_adaptive(stepper, rhs, psi, 0.0, profile.duration, dt0);
      }
    } catch (const odeint::odeint_error& e) {
      throw IntegrationError(std::string("pulse integration failed: ") + e.what(), opts.rel_tol);
    }
  }

  PulseEvolution out;
  for (std::size_t col = 0; col < 2; ++col) {
    double n2 = 0.0;
    for (std::size_t k = 0; k < 3; ++k) n2 += std::norm(psi[3 * col + k]);
    out.norm_defect = std::max(out.norm_defect, std::abs(std::sqrt(n2) - 1.0));
    out.map_pm(0, static_cast<Eigen::Index>(col)) = psi[3 * col + kPlus];
    out.map_pm(1, static_cast<Eigen::Index>(col)) = psi[3 * col + kMinus];
  }
  out.leak_r = std::norm(psi[kRyd]);
  const Eigen::Matrix2cd w = ab_from_pm();
  out.map = w.adjoint() * out.map_pm * w;
  if (opts.fixed_steps == 0 && out.norm_defect > 1e-8) {
    throw IntegrationError("pulse integration lost norm beyond 1e-8", out.norm_defect);
  }
  return out;
}

double raman_area(const PulseProfile& profile) {
  profile.validate();
  if (profile.duration == 0.0 || profile.x_max == 0.0) return 0.0;
  auto integrand = [&](double t) {
    const double x = profile.x(t);
    return x * x;
  };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, profile.duration, 20, 1e-13);
  return profile.energy_scale() * integral;
}

PulseProfile calibrate_area(PulseProfile profile, double target) {
  const double area = raman_area(profile);
  if (area == 0.0) throw ContractError("cannot calibrate a pulse with zero Raman area");
  if (target / area < 0.0) throw ContractError("target area has the wrong sign for this detuning");
  profile.x_max *= std::sqrt(target / area);
  return profile;
}

GateFidelity gate_fidelity(const PulseProfile& profile, const IntegratorOptions& opts) {
  const PulseEvolution zero = evolve_pulse(profile, Branch::zero, opts);
  const PulseEvolution ryd = evolve_pulse(profile, Branch::rydberg, opts);
  Eigen::Matrix2cd swap;
  swap << 0, -1, -1, 0;
  GateFidelity f;
  f.f_zero = std::norm(zero.map.trace() / 2.0);
  f.f_rydberg = std::norm((swap.adjoint() * ryd.map).trace() / 2.0);
  f.leak_r = zero.leak_r;
  return f;
}

double ensemble_phase_error(std::size_t n_atoms, const PulseProfile& profile) {
  if (n_atoms < 2) throw ContractError("the ensemble phase estimate needs at least two atoms");
  profile.validate();
  return static_cast<double>(n_atoms) * profile.energy_scale() * profile.duration * profile.x_max * profile.x_max;
}

}  // namespace rydsim
