#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/pauli.hpp"

using namespace rydsim;

namespace {

std::string random_word(std::size_t n, std::mt19937_64& rng) {
  static const char kLetters[] = "IXYZ";
  std::string w(n, 'I');
  for (auto& c : w) c = kLetters[rng() % 4];
  return w;
}

// <b'| i^phase P |b> evaluated qubit by qubit from 2x2 matrices.
std::pair<std::uint64_t, cplx> apply_local(const PauliString& p, std::uint64_t b) {
  cplx amp = p.phase_value();
  const std::string w = p.word();
  std::uint64_t out = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const auto [bit, a] = oracle::act(w[k], static_cast<int>((b >> k) & 1U));
    amp *= a;
    out |= static_cast<std::uint64_t>(bit) << k;
  }
  return {out, amp};
}

}  // namespace

TEST(PauliString, SingleQubitProductTable) {
  const char letters[] = "IXYZ";
  for (char a : std::string(letters, 4)) {
    for (char b : std::string(letters, 4)) {
      const PauliString prod = PauliString::from_word(std::string(1, a)) * PauliString::from_word(std::string(1, b));
      const Eigen::MatrixXcd expect = oracle::pauli(a) * oracle::pauli(b);
      EXPECT_LT((to_matrix(prod) - expect).norm(), 1e-14) << a << b;
    }
  }
}

TEST(PauliString, WordRoundTripAndAccessors) {
  const PauliString p = PauliString::from_word("XIZY");
  EXPECT_EQ(p.word(), "XIZY");
  EXPECT_EQ(p.n_qubits(), 4u);
  EXPECT_EQ(p.at(3), Pauli::Y);
  EXPECT_EQ(p.weight(), 3u);
  EXPECT_EQ(p.support(), (std::vector<std::size_t>{0, 2, 3}));
  EXPECT_TRUE(p.is_hermitian());
  EXPECT_FALSE(p.with_phase(1).is_hermitian());
  EXPECT_TRUE(PauliString(5).is_identity());
  EXPECT_THROW(PauliString::from_word("XQ"), std::invalid_argument);
}

TEST(PauliString, MatrixMatchesKroneckerOracle) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const std::string w = random_word(1 + rng() % 5, rng);
    EXPECT_LT((to_matrix(PauliString::from_word(w)) - oracle::word_matrix(w)).norm(), 1e-14) << w;
  }
}

// Closure of the product on up to 16 qubits, checked through the action on
// random basis states.
TEST(PauliString, ProductClosureRandomPairs) {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t n = 1 + rng() % 16;
    const PauliString a = PauliString::from_word(random_word(n, rng)).with_phase(rng() % 4);
    const PauliString b = PauliString::from_word(random_word(n, rng)).with_phase(rng() % 4);
    const PauliString ab = a * b;
    for (int s = 0; s < 4; ++s) {
      const std::uint64_t basis = rng() & ((std::uint64_t{1} << n) - 1);
      const auto [mid, amp_b] = apply_local(b, basis);
      const auto [end, amp_a] = apply_local(a, mid);
      const auto [direct, amp_ab] = apply_local(ab, basis);
      ASSERT_EQ(direct, end);
      ASSERT_LT(std::abs(amp_ab - amp_a * amp_b), 1e-12) << a.word() << " * " << b.word();
    }
  }
}

TEST(PauliString, CommutesAgreesWithMatrices) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 1 + rng() % 6;
    const PauliString a = PauliString::from_word(random_word(n, rng));
    const PauliString b = PauliString::from_word(random_word(n, rng));
    const Eigen::MatrixXcd ma = to_matrix(a), mb = to_matrix(b);
    const bool matrix_commute = (ma * mb - mb * ma).norm() < 1e-12;
    ASSERT_EQ(commutes(a, b), matrix_commute) << a.word() << " " << b.word();
  }
}

TEST(PauliString, AdjointConjugatesPhase) {
  const PauliString p = PauliString::from_word("XYZ").with_phase(1);
  EXPECT_LT((to_matrix(p.adjoint()) - to_matrix(p).adjoint()).norm(), 1e-14);
}

TEST(OperatorSum, NormalizationMergesAndDrops) {
  OperatorSum s(2);
  s.add(1.0, PauliString::from_word("XZ"));
  s.add(0.5, PauliString::from_word("XZ"));
  s.add(1.0, PauliString::from_word("ZZ").with_phase(2));
  s.add(1.0, PauliString::from_word("ZZ"));
  const OperatorSum n = s.normalized();
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n.terms()[0].string.word(), "XZ");
  EXPECT_NEAR(n.terms()[0].coeff.real(), 1.5, 1e-15);
}

TEST(OperatorSum, ProductMatchesMatrixProduct) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 30; ++rep) {
    OperatorSum a(3), b(3);
    for (int k = 0; k < 3; ++k) {
      a.add(cplx(rng() % 7 - 3.0, rng() % 5 - 2.0), PauliString::from_word(random_word(3, rng)));
      b.add(cplx(rng() % 7 - 3.0, 0.5), PauliString::from_word(random_word(3, rng)));
    }
    EXPECT_LT((to_matrix(a * b, 3) - to_matrix(a, 3) * to_matrix(b, 3)).norm(), 1e-12);
    EXPECT_LT((to_matrix(commutator(a, b), 3) -
               (to_matrix(a, 3) * to_matrix(b, 3) - to_matrix(b, 3) * to_matrix(a, 3)))
                  .norm(),
              1e-12);
  }
}

TEST(OperatorSum, HermiticityAndAdjoint) {
  OperatorSum s(2);
  s.add(cplx(0, 1), PauliString::from_word("XY"));
  EXPECT_FALSE(s.is_hermitian());
  EXPECT_TRUE((s + s.adjoint()).normalized().empty());
  OperatorSum h(2);
  h.add(2.0, PauliString::from_word("ZI"));
  h.add(1.0, PauliString::from_word("XY").with_phase(2));
  EXPECT_TRUE(h.is_hermitian());
  EXPECT_EQ(h.max_weight(), 2u);
}

TEST(OperatorSum, TextRoundTripIsExact) {
  std::mt19937_64 rng(3);
  OperatorSum s(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 20; ++k) s.add(cplx(u(rng), u(rng)), PauliString::from_word(random_word(5, rng)));
  const OperatorSum norm = s.normalized();
  const OperatorSum back = parse_text(to_text(norm));
  ASSERT_EQ(back.size(), norm.size());
  for (std::size_t k = 0; k < norm.size(); ++k) {
    EXPECT_EQ(back.terms()[k].coeff, norm.terms()[k].coeff);
    EXPECT_EQ(back.terms()[k].string, norm.terms()[k].string);
  }
}

TEST(OperatorSum, MatrixCapsAndSizeChecks) {
  EXPECT_THROW(to_matrix(OperatorSum::identity(13), 13), ResourceError);
  EXPECT_THROW(to_matrix(OperatorSum::identity(3), 4), DimensionError);
  OperatorSum a(PauliString::from_word("XX")), b(PauliString::from_word("ZZZ"));
  EXPECT_THROW(a += b, DimensionError);
  EXPECT_THROW(a.add(1.0, PauliString(3)), DimensionError);
}

TEST(JordanWigner, NumberOperatorIsHalfOneMinusZ) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t m = 0; m < n; ++m) {
      OperatorSum expect(n);
      expect.add(0.5, PauliString(n));
      expect.add(-0.5, PauliString::single(n, m, Pauli::Z));
      EXPECT_TRUE(approx_equal(jw_number(m, n), expect));
      EXPECT_TRUE(approx_equal(jw_creator(m, n) * jw_annihilator(m, n), expect));
    }
  }
}

TEST(JordanWigner, AnnihilatorEmptiesOccupiedQubit) {
  // c_0 on one qubit is |0><1|.
  const Eigen::MatrixXcd c = to_matrix(jw_annihilator(0, 1), 1);
  EXPECT_NEAR(std::abs(c(0, 1) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(c.norm(), 1.0, 1e-15);
}

TEST(JordanWigner, CanonicalAnticommutationUpToSixModes) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const OperatorSum ci = jw_annihilator(i, n), cj = jw_annihilator(j, n);
        const OperatorSum cdj = jw_creator(j, n);
        EXPECT_TRUE(anticommutator(ci, cj).normalized().empty());
        const OperatorSum expect = i == j ? OperatorSum::identity(n) : OperatorSum(n);
        EXPECT_TRUE(approx_equal(anticommutator(ci, cdj), expect)) << n << " " << i << " " << j;
        const Eigen::MatrixXcd mi = to_matrix(ci, n), mj = to_matrix(cdj, n);
        const auto dim = mi.rows();
        const Eigen::MatrixXcd want =
            i == j ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(dim, dim)) : Eigen::MatrixXcd::Zero(dim, dim);
        EXPECT_LT((mi * mj + mj * mi - want).norm(), 1e-14);
      }
    }
  }
}

TEST(JordanWigner, EmbeddedChainAnticommutes) {
  const std::vector<std::size_t> chain{4, 1, 3};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const OperatorSum ac = anticommutator(jw_annihilator(chain, i, 5), jw_annihilator(chain, j, 5).adjoint());
      EXPECT_TRUE(approx_equal(ac, i == j ? OperatorSum::identity(5) : OperatorSum(5)));
    }
  }
}
