#include <gtest/gtest.h>

#include <random>

#include "encdec/theory/annealed.hpp"
#include "encdec/theory/weingarten.hpp"

using namespace encdec;
using namespace encdec::theory;

TEST(SymmetricGroup, CharactersAndDimensions) {
  // Sum of squared irrep dimensions is n!, and column orthogonality at the identity.
  for (int n = 1; n <= 6; ++n) {
    std::int64_t total = 0;
    for (const auto& l : partitions(n)) total += irrep_dimension(l) * irrep_dimension(l);
    EXPECT_EQ(BigInt(total), factorial(n));
  }
  // S_3: chi_(2,1) on (transposition, 3-cycle) = (0, -1); sign rep on 3-cycle = 1.
  EXPECT_EQ(character({2, 1}, {2, 1}), 0);
  EXPECT_EQ(character({2, 1}, {3}), -1);
  EXPECT_EQ(character({1, 1, 1}, {3}), 1);
  EXPECT_EQ(character({1, 1, 1}, {2, 1}), -1);
  EXPECT_EQ(irrep_dimension({3, 2, 1}), 16);
  EXPECT_EQ(irrep_dimension({2, 2}), 2);
}

TEST(SymmetricGroup, CharacterRowOrthogonality) {
  // sum_g chi_a(g) chi_b(g) = n! delta_ab, summed over all group elements.
  const int n = 5;
  const auto perms = all_permutations(n);
  const auto parts = partitions(n);
  for (const auto& a : parts)
    for (const auto& b : parts) {
      std::int64_t s = 0;
      for (const auto& p : perms) s += character(a, cycle_type(p)) * character(b, cycle_type(p));
      EXPECT_EQ(s, a == b ? 120 : 0);
    }
}

TEST(Weingarten, TwoReplicaEntriesAtD4) {
  const auto t = WeingartenTable::for_qubits(2, 2);
  EXPECT_EQ(t.weingarten(0, 0), Rational(1, 15));
  EXPECT_EQ(t.weingarten(0, 1), Rational(-1, 60));
  EXPECT_EQ(t.weingarten(1, 1), Rational(1, 15));
}

TEST(Weingarten, InverseTimesGramIsIdentity) {
  for (int reps : {2, 4})
    for (int nq = (reps == 4 ? 2 : 1); nq <= 6; ++nq) {
      const auto t = WeingartenTable::for_qubits(reps, nq);
      for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j) {
          Rational acc = 0;
          for (std::size_t m = 0; m < t.size(); ++m) acc += t.weingarten(i, m) * t.gram(m, j);
          ASSERT_EQ(acc, Rational(i == j ? 1 : 0)) << reps << " " << nq;
        }
    }
}

TEST(Weingarten, CharacterFormulaEqualsGramInverse) {
  for (int reps : {2, 4})
    for (int nq = (reps == 4 ? 2 : 1); nq <= 8; ++nq) {
      const auto a = WeingartenTable::for_qubits(reps, nq, WeingartenMethod::gram_inverse);
      const auto b = WeingartenTable::for_qubits(reps, nq, WeingartenMethod::characters);
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) ASSERT_EQ(a.weingarten(i, j), b.weingarten(i, j));
    }
}

TEST(Weingarten, SixReplicaRowsInvertGram) {
  // Full 720 x 720 product is costly in rationals; check a spread of rows.
  for (int nq : {3, 4}) {
    const auto t = WeingartenTable::for_qubits(6, nq, WeingartenMethod::characters);
    for (std::size_t i : {std::size_t{0}, std::size_t{7}, std::size_t{133}, std::size_t{719}})
      for (std::size_t j : {std::size_t{0}, std::size_t{1}, i, std::size_t{500}}) {
        Rational acc = 0;
        for (std::size_t m = 0; m < t.size(); ++m) acc += t.weingarten(i, m) * t.gram(m, j);
        EXPECT_EQ(acc, Rational(i == j ? 1 : 0)) << i << "," << j;
      }
  }
}

TEST(Weingarten, ConjugationSymmetry) {
  const auto t = WeingartenTable::for_qubits(4, 3);
  const auto& perms = t.permutations();
  for (const auto& g : {Permutation{1, 0, 2, 3}, Permutation{1, 2, 3, 0}, Permutation{2, 0, 1, 3}})
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = 0; j < t.size(); ++j) {
        const auto gi = t.index_of(compose(compose(g, perms[i]), inverse(g)));
        const auto gj = t.index_of(compose(compose(g, perms[j]), inverse(g)));
        ASSERT_EQ(t.weingarten(i, j), t.weingarten(gi, gj));
      }
}

TEST(Weingarten, UnsupportedReplicaCount) {
  EXPECT_THROW(WeingartenTable::for_qubits(3, 2), InvalidArgument);
  EXPECT_THROW(WeingartenTable::for_qubits(6, 3, WeingartenMethod::gram_inverse), InvalidArgument);
}

TEST(WeingartenOracle, HandValue) {
  EXPECT_NEAR(weingarten_fidelity_oracle(2, 1, ErrorModel::coherent(std::numbers::pi / 2)), 2.0 / 3.0, 1e-15);
}

TEST(WeingartenOracle, EqualsClosedFormsOnRandomStrengths) {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> ua(0, std::numbers::pi / 2), ul(0, 1);
  for (int n = 1; n <= 8; ++n)
    for (int k = 1; k <= n; ++k)
      for (int s = 0; s < 20; ++s) {
        ErrorModel coh = ErrorModel::coherent_disordered(1.0);
        ErrorModel dep = ErrorModel::depolarizing_disordered(1.0);
        for (int i = 0; i < n; ++i) {
          coh.site_strengths.push_back(ua(rng));
          dep.site_strengths.push_back(ul(rng));
        }
        ASSERT_NEAR(weingarten_fidelity_oracle(n, k, coh), annealed_fidelity_coherent(n, k, coh.site_strengths), 1e-12);
        ASSERT_NEAR(weingarten_fidelity_oracle(n, k, dep), annealed_fidelity_depolarizing(n, k, dep.site_strengths), 1e-12);
      }
}

TEST(WeingartenOracle, IndependentOfLogicalState) {
  // Haar invariance: any normalized logical state gives the same annealed value.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Vector psi(8);
  for (auto& x : psi) x = Complex(g(rng), g(rng));
  const auto m = ErrorModel::depolarizing(0.3);
  EXPECT_NEAR(weingarten_fidelity_oracle(6, 3, m, psi), annealed_fidelity_depolarizing(6, 3, 0.3), 1e-12);
}
