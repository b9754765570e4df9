#pragma once

// Pauli strings and weighted sums of them, plus the Jordan-Wigner images of
// fermionic mode operators.
//
// Qubit k of a string corresponds to bit k of a computational basis index
// (little-endian), and to character k of a Pauli word such as "XIZY".

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rydsim {

using cplx = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Signed tensor product i^k * P_0 (x) P_1 (x) ... (x) P_{n-1}.
///
/// Each site is stored as an (x, z) bit pair: X = (1,0), Z = (0,1),
/// Y = (1,1). Y is the Hermitian Pauli-Y, not the product XZ, so the phase
/// of a string is exactly the quarter-turn counter.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_qubits);

  static PauliString single(std::size_t n_qubits, std::size_t qubit, Pauli p);
  /// Parses "IXYZ"-style words; qubit k is character k.
  static PauliString from_word(std::string_view word);

  std::size_t n_qubits() const noexcept { return n_; }
  Pauli at(std::size_t qubit) const;
  void set(std::size_t qubit, Pauli p);

  /// Phase as quarter turns: the string carries the factor i^phase().
  unsigned phase() const noexcept { return phase_; }
  cplx phase_value() const noexcept;
  PauliString with_phase(unsigned quarter_turns) const;

  bool is_hermitian() const noexcept { return phase_ % 2 == 0; }
  bool is_identity() const noexcept;
  std::size_t weight() const noexcept;
  std::vector<std::size_t> support() const;
  PauliString adjoint() const;

  /// Pauli word without the phase.
  std::string word() const;

  const std::vector<std::uint64_t>& x_mask() const noexcept { return x_; }
  const std::vector<std::uint64_t>& z_mask() const noexcept { return z_; }
  /// Masks packed into one word; only valid for n_qubits <= 64.
  std::uint64_t x_bits() const;
  std::uint64_t z_bits() const;

  /// True when both strings have the same masks (phase ignored).
  bool same_operator(const PauliString& other) const noexcept;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend PauliString operator*(const PauliString& a, const PauliString& b);

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
  unsigned phase_ = 0;
};

/// ab == ba, decided from the symplectic overlap parity of the masks.
bool commutes(const PauliString& a, const PauliString& b);

struct PauliTerm {
  cplx coeff;
  PauliString string;
};

/// Weighted list of Pauli strings over a fixed number of qubits.
class OperatorSum {
 public:
  OperatorSum() = default;
  explicit OperatorSum(std::size_t n_qubits) : n_(n_qubits) {}
  OperatorSum(PauliString string, cplx coeff = 1.0);

  static OperatorSum identity(std::size_t n_qubits, cplx coeff = 1.0);

  std::size_t n_qubits() const noexcept { return n_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  void add(cplx coeff, const PauliString& string);

  /// Folds string phases into coefficients, merges terms with equal masks,
  /// drops coefficients below zero_threshold and sorts by mask.
  OperatorSum normalized(double zero_threshold = 1e-12) const;
  OperatorSum adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;
  std::size_t max_weight() const noexcept;

  OperatorSum& operator+=(const OperatorSum& other);
  OperatorSum& operator-=(const OperatorSum& other);
  OperatorSum& operator*=(cplx scalar);

  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
  friend OperatorSum operator*(OperatorSum a, cplx s) { return a *= s; }
  friend OperatorSum operator*(cplx s, OperatorSum a) { return a *= s; }
  /// Operator product, normalized.
  friend OperatorSum operator*(const OperatorSum& a, const OperatorSum& b);

 private:
  std::size_t n_ = 0;
  std::vector<PauliTerm> terms_;
};

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b);
OperatorSum anticommutator(const OperatorSum& a, const OperatorSum& b);

/// Term-by-term comparison after normalization.
bool approx_equal(const OperatorSum& a, const OperatorSum& b, double tol = 1e-12);

inline constexpr std::size_t kMatrixQubitCap = 12;

Eigen::MatrixXcd to_matrix(const PauliString& p);
/// Dense 2^n x 2^n realization. Throws ResourceError above kMatrixQubitCap.
Eigen::MatrixXcd to_matrix(const OperatorSum& op, std::size_t n_qubits);

/// One term per line: "<re> <im> <pauli-word>", printed with enough digits
/// to round-trip exactly.
std::string to_text(const OperatorSum& op);
OperatorSum parse_text(std::string_view text);

// Jordan-Wigner images. The annihilator is Z...Z (X + iY)/2, which maps the
// occupied qubit state |1> to |0>, so that c^dag c = (I - Z)/2.

/// Annihilator of mode `mode` on a contiguous chain of n_modes qubits.
OperatorSum jw_annihilator(std::size_t mode, std::size_t n_modes);
OperatorSum jw_creator(std::size_t mode, std::size_t n_modes);
OperatorSum jw_number(std::size_t mode, std::size_t n_modes);

/// Annihilator for the k-th mode of an ordered chain embedded in a larger
/// register: Z on chain[0..k-1], (X + iY)/2 on chain[k].
OperatorSum jw_annihilator(std::span<const std::size_t> chain, std::size_t k,
                           std::size_t n_qubits);

}  // namespace rydsim
