#include "rydsim/pauli.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <limits>
#include <sstream>

#include "rydsim/errors.hpp"

namespace rydsim {
namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

void check_same_size(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw DimensionError("Pauli strings act on " + std::to_string(a.n_qubits()) +
                         " and " + std::to_string(b.n_qubits()) + " qubits");
  }
}

cplx quarter_turn(unsigned k) {
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Multiplying by i^k only swaps and negates components, so this is exact.
cplx rotate(cplx c, unsigned k) {
  switch (k % 4) {
    case 0: return c;
    case 1: return {-c.imag(), c.real()};
    case 2: return -c;
    default: return {c.imag(), -c.real()};
  }
}

bool mask_less(const PauliString& a, const PauliString& b) {
  if (a.x_mask() != b.x_mask()) return a.x_mask() < b.x_mask();
  return a.z_mask() < b.z_mask();
}

}  // namespace

PauliString::PauliString(std::size_t n_qubits)
    : n_(n_qubits), x_(word_count(n_qubits), 0), z_(word_count(n_qubits), 0) {}

PauliString PauliString::single(std::size_t n_qubits, std::size_t qubit, Pauli p) {
  PauliString s(n_qubits);
  s.set(qubit, p);
  return s;
}

PauliString PauliString::from_word(std::string_view word) {
  PauliString s(word.size());
  for (std::size_t k = 0; k < word.size(); ++k) {
    switch (word[k]) {
      case 'I': break;
      case 'X': s.set(k, Pauli::X); break;
      case 'Y': s.set(k, Pauli::Y); break;
      case 'Z': s.set(k, Pauli::Z); break;
      default:
        throw std::invalid_argument("invalid Pauli letter '" + std::string(1, word[k]) +
                                    "' in word " + std::string(word));
    }
  }
  return s;
}

Pauli PauliString::at(std::size_t qubit) const {
  if (qubit >= n_) throw GeometryError("qubit " + std::to_string(qubit) + " out of range");
  const std::uint64_t bit = std::uint64_t{1} << (qubit % kWordBits);
  const bool x = x_[qubit / kWordBits] & bit;
  const bool z = z_[qubit / kWordBits] & bit;
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

void PauliString::set(std::size_t qubit, Pauli p) {
  if (qubit >= n_) throw GeometryError("qubit " + std::to_string(qubit) + " out of range");
  const std::uint64_t bit = std::uint64_t{1} << (qubit % kWordBits);
  auto& xw = x_[qubit / kWordBits];
  auto& zw = z_[qubit / kWordBits];
  xw &= ~bit;
  zw &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) xw |= bit;
  if (p == Pauli::Z || p == Pauli::Y) zw |= bit;
}

cplx PauliString::phase_value() const noexcept { return quarter_turn(phase_); }

PauliString PauliString::with_phase(unsigned quarter_turns) const {
  PauliString s = *this;
  s.phase_ = quarter_turns % 4;
  return s;
}

bool PauliString::is_identity() const noexcept {
  return std::all_of(x_.begin(), x_.end(), [](auto w) { return w == 0; }) &&
         std::all_of(z_.begin(), z_.end(), [](auto w) { return w == 0; });
}

std::size_t PauliString::weight() const noexcept {
  std::size_t w = 0;
  for (std::size_t i = 0; i < x_.size(); ++i) w += std::popcount(x_[i] | z_[i]);
  return w;
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < n_; ++q) {
    if (at(q) != Pauli::I) out.push_back(q);
  }
  return out;
}

PauliString PauliString::adjoint() const { return with_phase((4 - phase_) % 4); }

std::string PauliString::word() const {
  std::string w(n_, 'I');
  for (std::size_t q = 0; q < n_; ++q) w[q] = "IXYZ"[static_cast<int>(at(q))];
  return w;
}

std::uint64_t PauliString::x_bits() const {
  if (n_ > kWordBits) throw ResourceError("packed masks need n_qubits <= 64");
  return x_.empty() ? 0 : x_[0];
}

std::uint64_t PauliString::z_bits() const {
  if (n_ > kWordBits) throw ResourceError("packed masks need n_qubits <= 64");
  return z_.empty() ? 0 : z_[0];
}

bool PauliString::same_operator(const PauliString& other) const noexcept {
  return n_ == other.n_ && x_ == other.x_ && z_ == other.z_;
}

PauliString operator*(const PauliString& a, const PauliString& b) {
  check_same_size(a, b);
  PauliString out(a.n_);
  // Per site, P_a P_b = i^g P_c. The +1 cases are XY, YZ, ZX and the -1 cases
  // are YX, ZY, XZ; all others contribute nothing.
  int g = 0;
  for (std::size_t i = 0; i < a.x_.size(); ++i) {
    const std::uint64_t x1 = a.x_[i], z1 = a.z_[i], x2 = b.x_[i], z2 = b.z_[i];
    const std::uint64_t ax = x1 & ~z1, ay = x1 & z1, az = ~x1 & z1;
    const std::uint64_t bx = x2 & ~z2, by = x2 & z2, bz = ~x2 & z2;
    const std::uint64_t plus = (ax & by) | (ay & bz) | (az & bx);
    const std::uint64_t minus = (ay & bx) | (az & by) | (ax & bz);
    g += std::popcount(plus) - std::popcount(minus);
    out.x_[i] = x1 ^ x2;
    out.z_[i] = z1 ^ z2;
  }
  out.phase_ = static_cast<unsigned>(((static_cast<int>(a.phase_ + b.phase_) + g) % 4 + 4) % 4);
  return out;
}

bool commutes(const PauliString& a, const PauliString& b) {
  check_same_size(a, b);
  unsigned parity = 0;
  for (std::size_t i = 0; i < a.x_mask().size(); ++i) {
    parity += std::popcount((a.x_mask()[i] & b.z_mask()[i]) ^ (a.z_mask()[i] & b.x_mask()[i]));
  }
  return parity % 2 == 0;
}

// ---------------------------------------------------------------------------

OperatorSum::OperatorSum(PauliString string, cplx coeff) : n_(string.n_qubits()) {
  terms_.push_back({coeff, std::move(string)});
}

OperatorSum OperatorSum::identity(std::size_t n_qubits, cplx coeff) {
  return OperatorSum(PauliString(n_qubits), coeff);
}

void OperatorSum::add(cplx coeff, const PauliString& string) {
  if (terms_.empty() && n_ == 0) n_ = string.n_qubits();
  if (string.n_qubits() != n_) {
    throw DimensionError("term acts on " + std::to_string(string.n_qubits()) +
                         " qubits, sum on " + std::to_string(n_));
  }
  terms_.push_back({coeff, string});
}

OperatorSum OperatorSum::normalized(double zero_threshold) const {
  std::vector<PauliTerm> folded;
  folded.reserve(terms_.size());
  for (const auto& t : terms_) {
    folded.push_back({rotate(t.coeff, t.string.phase()), t.string.with_phase(0)});
  }
  std::stable_sort(folded.begin(), folded.end(),
                   [](const PauliTerm& a, const PauliTerm& b) { return mask_less(a.string, b.string); });
  OperatorSum out(n_);
  for (auto& t : folded) {
    if (!out.terms_.empty() && out.terms_.back().string.same_operator(t.string)) {
      out.terms_.back().coeff += t.coeff;
    } else {
      out.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(out.terms_, [&](const PauliTerm& t) { return std::abs(t.coeff) < zero_threshold; });
  return out;
}

OperatorSum OperatorSum::adjoint() const {
  OperatorSum out(n_);
  for (const auto& t : terms_) out.terms_.push_back({std::conj(t.coeff), t.string.adjoint()});
  return out;
}

bool OperatorSum::is_hermitian(double tol) const { return approx_equal(*this, adjoint(), tol); }

std::size_t OperatorSum::max_weight() const noexcept {
  std::size_t w = 0;
  for (const auto& t : terms_) w = std::max(w, t.string.weight());
  return w;
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
  if (terms_.empty() && n_ == 0) n_ = other.n_;
  if (other.n_ != n_ && !other.terms_.empty()) {
    throw DimensionError("operator sums act on " + std::to_string(n_) + " and " +
                         std::to_string(other.n_) + " qubits");
  }
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

OperatorSum& OperatorSum::operator-=(const OperatorSum& other) { return *this += other * -1.0; }

OperatorSum& OperatorSum::operator*=(cplx scalar) {
  for (auto& t : terms_) t.coeff *= scalar;
  return *this;
}

OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
  if (a.n_ != b.n_) {
    throw DimensionError("operator sums act on " + std::to_string(a.n_) + " and " +
                         std::to_string(b.n_) + " qubits");
  }
  OperatorSum out(a.n_);
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) out.terms_.push_back({ta.coeff * tb.coeff, ta.string * tb.string});
  }
  return out.normalized();
}

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b) {
  return (a * b - b * a).normalized();
}

OperatorSum anticommutator(const OperatorSum& a, const OperatorSum& b) {
  return (a * b + b * a).normalized();
}

bool approx_equal(const OperatorSum& a, const OperatorSum& b, double tol) {
  // Zero-threshold at tol so near-cancelled terms do not count as structure.
  const auto diff = (a - b).normalized(tol);
  return diff.empty();
}

// ---------------------------------------------------------------------------

Eigen::MatrixXcd to_matrix(const PauliString& p) {
  return to_matrix(OperatorSum(p), p.n_qubits());
}

Eigen::MatrixXcd to_matrix(const OperatorSum& op, std::size_t n_qubits) {
  if (n_qubits > kMatrixQubitCap) {
    throw ResourceError("dense matrix of " + std::to_string(n_qubits) + " qubits exceeds the cap of " +
                        std::to_string(kMatrixQubitCap));
  }
  if (!op.empty() && op.n_qubits() != n_qubits) {
    throw DimensionError("operator acts on " + std::to_string(op.n_qubits()) + " qubits, requested " +
                         std::to_string(n_qubits));
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : op.terms()) {
    const std::uint64_t x = t.string.x_bits();
    const std::uint64_t z = t.string.z_bits();
    // P|b> = i^(phase + #Y) (-1)^popcount(b & z) |b ^ x>.
    const cplx base = rotate(t.coeff, t.string.phase() + std::popcount(x & z));
    for (std::uint64_t b = 0; b < dim; ++b) {
      m(b ^ x, b) += (std::popcount(b & z) % 2) ? -base : base;
    }
  }
  return m;
}

std::string to_text(const OperatorSum& op) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& t : op.terms()) {
    const cplx c = rotate(t.coeff, t.string.phase());
    os << c.real() << ' ' << c.imag() << ' ' << t.string.word() << '\n';
  }
  return os.str();
}

OperatorSum parse_text(std::string_view text) {
  OperatorSum out;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double re = 0, im = 0;
    std::string word;
    if (!(ls >> re >> im >> word)) {
      throw std::invalid_argument("malformed operator line " + std::to_string(line_no) + ": " + line);
    }
    out.add({re, im}, PauliString::from_word(word));
  }
  return out;
}

// ---------------------------------------------------------------------------

OperatorSum jw_annihilator(std::span<const std::size_t> chain, std::size_t k, std::size_t n_qubits) {
  if (k >= chain.size()) {
    throw GeometryError("mode " + std::to_string(k) + " outside a chain of " +
                        std::to_string(chain.size()) + " modes");
  }
  PauliString zs(n_qubits);
  for (std::size_t j = 0; j < k; ++j) zs.set(chain[j], Pauli::Z);
  PauliString xs = zs;
  PauliString ys = zs;
  xs.set(chain[k], Pauli::X);
  ys.set(chain[k], Pauli::Y);
  OperatorSum out(n_qubits);
  out.add(0.5, xs);
  out.add(cplx{0.0, 0.5}, ys);
  return out;
}

OperatorSum jw_annihilator(std::size_t mode, std::size_t n_modes) {
  if (mode >= n_modes) {
    throw GeometryError("mode " + std::to_string(mode) + " out of range for " + std::to_string(n_modes) +
                        " modes");
  }
  std::vector<std::size_t> chain(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i) chain[i] = i;
  return jw_annihilator(chain, mode, n_modes);
}

OperatorSum jw_creator(std::size_t mode, std::size_t n_modes) {
  return jw_annihilator(mode, n_modes).adjoint();
}

OperatorSum jw_number(std::size_t mode, std::size_t n_modes) {
  if (mode >= n_modes) {
    throw GeometryError("mode " + std::to_string(mode) + " out of range for " + std::to_string(n_modes) +
                        " modes");
  }
  OperatorSum out = OperatorSum::identity(n_modes, 0.5);
  out.add(-0.5, PauliString::single(n_modes, mode, Pauli::Z));
  return out;
}

}  // namespace rydsim
