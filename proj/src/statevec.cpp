#include "rydsim/statevec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "rydsim/errors.hpp"

namespace rydsim {
namespace {

std::size_t checked_dim(std::size_t n) {
  if (n > kStateQubitCap) {
    throw ResourceError("state vector of " + std::to_string(n) + " qubits exceeds the cap of " +
                        std::to_string(kStateQubitCap));
  }
  return std::size_t{1} << n;
}

// i^k * (-1)^popcount(b & z) for the action P|b> = phase |b ^ x>.
struct PauliAction {
  std::uint64_t x;
  std::uint64_t z;
  cplx base;

  explicit PauliAction(const PauliString& p)
      : x(p.x_bits()), z(p.z_bits()), base(p.with_phase((p.phase() + std::popcount(x & z)) % 4).phase_value()) {}

  cplx sign(std::uint64_t b) const { return (std::popcount(b & z) % 2) ? -base : base; }
};

}  // namespace

StateVector::StateVector(std::size_t n_qubits) : n_(n_qubits), amp_(checked_dim(n_qubits), cplx{}) {
  amp_[0] = 1.0;
}

StateVector StateVector::basis(std::size_t n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw GeometryError("basis index out of range");
  s.amp_[0] = 0.0;
  s.amp_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::size_t n_qubits, std::vector<cplx> amplitudes) {
  StateVector s(n_qubits);
  if (amplitudes.size() != s.dim()) {
    throw DimensionError("expected " + std::to_string(s.dim()) + " amplitudes, got " +
                         std::to_string(amplitudes.size()));
  }
  s.amp_ = std::move(amplitudes);
  if (s.norm() == 0.0) throw ContractError("cannot normalize the zero vector");
  s.normalize();
  return s;
}

StateVector StateVector::from_eigen(std::size_t n_qubits, const Eigen::VectorXcd& v) {
  return from_amplitudes(n_qubits, std::vector<cplx>(v.data(), v.data() + v.size()));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) return;
  for (auto& a : amp_) a /= nrm;
}

cplx StateVector::inner(const StateVector& other) const {
  if (other.n_ != n_) throw DimensionError("inner product of states with different sizes");
  cplx s{};
  for (std::size_t i = 0; i < amp_.size(); ++i) s += std::conj(amp_[i]) * other.amp_[i];
  return s;
}

Eigen::VectorXcd StateVector::to_eigen() const {
  return Eigen::Map<const Eigen::VectorXcd>(amp_.data(), static_cast<Eigen::Index>(amp_.size()));
}

void StateVector::check_qubit(std::size_t q) const {
  if (q >= n_) throw GeometryError("qubit " + std::to_string(q) + " out of range for " + std::to_string(n_));
}

void StateVector::check_size(const PauliString& p) const {
  if (p.n_qubits() != n_) {
    throw DimensionError("string on " + std::to_string(p.n_qubits()) + " qubits applied to a " +
                         std::to_string(n_) + "-qubit state");
  }
}

void StateVector::apply(const PauliString& p) {
  check_size(p);
  const PauliAction act(p);
  std::vector<cplx> out(amp_.size());
  for (std::uint64_t b = 0; b < amp_.size(); ++b) out[b ^ act.x] = act.sign(b) * amp_[b];
  amp_.swap(out);
}

void StateVector::apply_exp(const PauliString& p, double theta) {
  check_size(p);
  if (!p.is_hermitian()) throw ContractError("exp(i theta P) needs a Hermitian string, got phase i^" +
                                             std::to_string(p.phase()));
  const PauliAction act(p);
  const double c = std::cos(theta);
  const cplx is{0.0, std::sin(theta)};
  if (act.x == 0) {
    for (std::uint64_t b = 0; b < amp_.size(); ++b) amp_[b] *= c + is * act.sign(b);
    return;
  }
  // Pairs (b, b^x) mix among themselves.
  for (std::uint64_t b = 0; b < amp_.size(); ++b) {
    const std::uint64_t partner = b ^ act.x;
    if (partner < b) continue;
    const cplx a0 = amp_[b];
    const cplx a1 = amp_[partner];
    // (P psi)[partner] = sign(b) psi[b]; (P psi)[b] = sign(partner) psi[partner].
    amp_[b] = c * a0 + is * act.sign(partner) * a1;
    amp_[partner] = c * a1 + is * act.sign(b) * a0;
  }
}

void StateVector::apply_1q(std::size_t qubit, const Mat2& u) {
  check_qubit(qubit);
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  for (std::uint64_t b = 0; b < amp_.size(); ++b) {
    if (b & bit) continue;
    const cplx a0 = amp_[b];
    const cplx a1 = amp_[b | bit];
    amp_[b] = u(0, 0) * a0 + u(0, 1) * a1;
    amp_[b | bit] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void StateVector::apply_controlled_1q(std::size_t control, std::size_t target, const Mat2& u,
                                      bool control_value) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw GeometryError("control and target coincide");
  const std::uint64_t cbit = std::uint64_t{1} << control;
  const std::uint64_t tbit = std::uint64_t{1} << target;
  for (std::uint64_t b = 0; b < amp_.size(); ++b) {
    if ((b & tbit) || (static_cast<bool>(b & cbit) != control_value)) continue;
    const cplx a0 = amp_[b];
    const cplx a1 = amp_[b | tbit];
    amp_[b] = u(0, 0) * a0 + u(0, 1) * a1;
    amp_[b | tbit] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void StateVector::apply_unitary(std::span<const std::size_t> qubits, const Eigen::MatrixXcd& u,
                                std::optional<std::size_t> control, bool control_value) {
  const std::size_t k = qubits.size();
  const std::size_t local = std::size_t{1} << k;
  if (static_cast<std::size_t>(u.rows()) != local || static_cast<std::size_t>(u.cols()) != local) {
    throw DimensionError("unitary dimension does not match " + std::to_string(k) + " qubits");
  }
  std::uint64_t mask = 0;
  for (auto q : qubits) {
    check_qubit(q);
    const std::uint64_t bit = std::uint64_t{1} << q;
    if (mask & bit) throw GeometryError("repeated qubit in unitary support");
    mask |= bit;
  }
  std::uint64_t cbit = 0;
  if (control) {
    check_qubit(*control);
    cbit = std::uint64_t{1} << *control;
    if (mask & cbit) throw GeometryError("control qubit inside unitary support");
  }
  std::vector<std::uint64_t> offsets(local, 0);
  for (std::size_t l = 0; l < local; ++l) {
    for (std::size_t j = 0; j < k; ++j) {
      if (l & (std::size_t{1} << j)) offsets[l] |= std::uint64_t{1} << qubits[j];
    }
  }
  Eigen::VectorXcd in(local);
  for (std::uint64_t b = 0; b < amp_.size(); ++b) {
    if (b & mask) continue;
    if (control && (static_cast<bool>(b & cbit) != control_value)) continue;
    for (std::size_t l = 0; l < local; ++l) in(l) = amp_[b | offsets[l]];
    const Eigen::VectorXcd out = u * in;
    for (std::size_t l = 0; l < local; ++l) amp_[b | offsets[l]] = out(l);
  }
}

void StateVector::apply_controlled_flip(std::size_t control, std::uint64_t x_mask) {
  check_qubit(control);
  const std::uint64_t cbit = std::uint64_t{1} << control;
  if (x_mask & cbit) throw GeometryError("control qubit among flip targets");
  if (x_mask >> n_) throw GeometryError("flip target out of range");
  for (std::uint64_t b = 0; b < amp_.size(); ++b) {
    if (!(b & cbit)) continue;
    const std::uint64_t partner = b ^ x_mask;
    if (partner < b) continue;
    std::swap(amp_[b], amp_[partner]);
  }
}

double StateVector::project(const PauliString& p, int outcome) {
  check_size(p);
  if (!p.is_hermitian()) throw ContractError("projective measurement needs a Hermitian string");
  if (outcome != 1 && outcome != -1) throw ContractError("outcome must be +1 or -1");
  const PauliAction act(p);
  std::vector<cplx> out(amp_.size());
  for (std::uint64_t b = 0; b < amp_.size(); ++b) out[b] += 0.5 * amp_[b];
  for (std::uint64_t b = 0; b < amp_.size(); ++b) out[b ^ act.x] += 0.5 * outcome * act.sign(b) * amp_[b];
  amp_.swap(out);
  const double nrm = norm();
  const double prob = nrm * nrm;
  if (prob > 0.0) normalize();
  return prob;
}

// ---------------------------------------------------------------------------

cplx expectation(const StateVector& state, const PauliString& p) {
  if (p.n_qubits() != state.n_qubits()) throw DimensionError("expectation size mismatch");
  const PauliAction act(p);
  const auto amp = state.amplitudes();
  cplx s{};
  for (std::uint64_t b = 0; b < amp.size(); ++b) s += std::conj(amp[b ^ act.x]) * act.sign(b) * amp[b];
  return s;
}

double expectation(const StateVector& state, const OperatorSum& h) {
  if (!h.is_hermitian()) throw ContractError("expectation value requested for a non-Hermitian operator");
  cplx s{};
  for (const auto& t : h.terms()) s += t.coeff * expectation(state, t.string);
  return s.real();
}

Measurement measure_projector(const StateVector& state, const PauliString& p, Rng& rng) {
  if (!p.is_hermitian()) throw ContractError("projective measurement needs a Hermitian string");
  const double p_plus = std::clamp(0.5 * (1.0 + expectation(state, p).real()), 0.0, 1.0);
  const int outcome = uniform01(rng) < p_plus ? 1 : -1;
  StateVector collapsed = state;
  collapsed.project(p, outcome);
  return {outcome, std::move(collapsed), outcome == 1 ? p_plus : 1.0 - p_plus};
}

Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixXcd& h, cplx factor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigen-decomposition failed");
  const Eigen::VectorXcd phases = (factor * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd exact_propagator(const OperatorSum& h, double t, std::size_t n_qubits) {
  if (n_qubits > kPropagatorQubitCap) {
    throw ResourceError("exact propagator of " + std::to_string(n_qubits) + " qubits exceeds the cap of " +
                        std::to_string(kPropagatorQubitCap));
  }
  if (h.empty()) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    return Eigen::MatrixXcd::Identity(dim, dim);
  }
  return hermitian_exp(to_matrix(h, n_qubits), cplx{0.0, -t});
}

Eigen::MatrixXcd circuit_matrix(std::size_t n_qubits, const std::function<void(StateVector&)>& circuit) {
  if (n_qubits > kMatrixQubitCap) throw ResourceError("circuit matrix exceeds the dense cap");
  const std::size_t dim = std::size_t{1} << n_qubits;
  Eigen::MatrixXcd m(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    StateVector s = StateVector::basis(n_qubits, b);
    circuit(s);
    m.col(static_cast<Eigen::Index>(b)) = s.to_eigen();
  }
  return m;
}

double distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0};
  const Eigen::MatrixXcd diff = a - phase * b;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(diff).singularValues()(0);
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
  const auto dim = static_cast<std::size_t>(rho_.rows());
  if (rho_.rows() != rho_.cols() || dim == 0 || !std::has_single_bit(dim)) {
    throw DimensionError("density matrix must be square with power-of-two dimension");
  }
  n_ = static_cast<std::size_t>(std::countr_zero(dim));
}

DensityMatrix DensityMatrix::pure(const StateVector& state) {
  const Eigen::VectorXcd v = state.to_eigen();
  return DensityMatrix(v * v.adjoint());
}

double DensityMatrix::expectation(const OperatorSum& h) const {
  return (to_matrix(h, n_) * rho_).trace().real();
}

bool DensityMatrix::is_valid(double tol) const {
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(trace() - 1.0) > tol) return false;
  const Eigen::MatrixXcd herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -1e-8;
}

}  // namespace rydsim
