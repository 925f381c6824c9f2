#include "gtest/gtest.h"

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace entcheck;
using namespace entcheck::testing;

TEST(unfold, matrices) {
  const CoeffTensor t = mat({{1.0, 2.0}, {3.0, 4.0i}});
  ComplexMatrix m(2, 2);
  m << 1.0, 2.0, 3.0, Complex(0.0, 4.0);
  EXPECT_EQ(unfold(t, 0), m);
  EXPECT_EQ(unfold(t, 1), ComplexMatrix(m.transpose()));
  EXPECT_THROW(unfold(t, 2), std::out_of_range);
}

TEST(unfold, ghz_first_party) {
  ComplexMatrix want = ComplexMatrix::Zero(2, 4);
  want(0, 0) = 1.0;
  want(1, 3) = 1.0;
  EXPECT_EQ(unfold(ghz3(), 0), want);
}

TEST(unfold, column_order_is_row_major_over_remaining_parties) {
  std::vector<Complex> e(24);
  for (std::size_t n = 0; n < 24; ++n) e[n] = static_cast<double>(n + 1);
  const CoeffTensor t({2, 3, 4}, e);
  const ComplexMatrix u = unfold(t, 1);
  ASSERT_EQ(u.rows(), 3);
  ASSERT_EQ(u.cols(), 8);
  // column (j0, j2) = j0 * 4 + j2
  EXPECT_EQ(u(2, 1 * 4 + 3), t.at(Index{1, 2, 3}));
}

TEST(numeric_rank, examples) {
  EXPECT_EQ(numeric_rank(unfold(worked_product(), 0)), 1u);
  EXPECT_EQ(numeric_rank(unfold(diagonal({1.0, 1.0}), 0)), 2u);
  EXPECT_EQ(numeric_rank(unfold(degenerate_entangled(), 0)), 2u);
  EXPECT_THROW(numeric_rank(ComplexMatrix::Zero(2, 2)), std::invalid_argument);
}

TEST(numeric_rank, cutoff_is_relative) {
  const CoeffTensor big = diagonal({1e6, 1e-3});
  EXPECT_EQ(numeric_rank(unfold(big, 0)), 2u);
  const CoeffTensor lopsided = diagonal({1.0, 1e-12});
  EXPECT_EQ(numeric_rank(unfold(lopsided, 0)), 1u);
}

TEST(oracle_factorized, examples) {
  EXPECT_TRUE(oracle_factorized(worked_product()));
  EXPECT_FALSE(oracle_factorized(ghz3()));
  std::mt19937_64 rng(61);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto dims = random_dims(rng, 2 + seed % 3, 1, 4);
    EXPECT_TRUE(oracle_factorized(gen_product_state(dims, seed, false)));
  }
}

TEST(schmidt, worked_product_single_value) {
  const SchmidtForm s = schmidt(worked_product());
  ASSERT_EQ(s.schmidt_rank(), 1u);
  EXPECT_NEAR(s.values[0], std::sqrt(700.0), 1e-12);
}

TEST(schmidt, diagonal_and_degenerate) {
  const SchmidtForm d = schmidt(diagonal({3.0, 4.0}));
  ASSERT_EQ(d.schmidt_rank(), 2u);
  EXPECT_NEAR(d.values[0], 4.0, 1e-12);
  EXPECT_NEAR(d.values[1], 3.0, 1e-12);

  const SchmidtForm e = schmidt(degenerate_product());
  ASSERT_EQ(e.schmidt_rank(), 1u);
  EXPECT_NEAR(e.values[0], 2.0, 1e-12);

  EXPECT_THROW(schmidt(ghz3()), std::invalid_argument);
}

TEST(schmidt, reconstruction_orthonormality_and_rank_consistency) {
  std::mt19937_64 rng(67);
  const double eps = 1e-9;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto dims = random_dims(rng, 2, 1, 8);
    const CoeffTensor t = seed % 3 == 0 ? gen_product_state(dims, seed, false) : gen_random_state(dims, seed);
    const SchmidtForm s = schmidt(t);
    const ComplexMatrix back = reconstruct(s);
    for (std::size_t i = 0; i < dims[0]; ++i)
      for (std::size_t j = 0; j < dims[1]; ++j)
        ASSERT_LT(std::abs(back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - t(i, j)), 100 * eps);
    for (std::size_t a = 0; a < s.schmidt_rank(); ++a) {
      for (std::size_t b = 0; b < s.schmidt_rank(); ++b) {
        Complex l = 0.0, r = 0.0;
        for (std::size_t i = 0; i < dims[0]; ++i) l += std::conj(s.left_vectors[a][i]) * s.left_vectors[b][i];
        for (std::size_t j = 0; j < dims[1]; ++j) r += std::conj(s.right_vectors[a][j]) * s.right_vectors[b][j];
        ASSERT_LT(std::abs(l - (a == b ? 1.0 : 0.0)), eps);
        ASSERT_LT(std::abs(r - (a == b ? 1.0 : 0.0)), eps);
      }
    }
    for (std::size_t k = 1; k < s.values.size(); ++k) ASSERT_GE(s.values[k - 1], s.values[k]);
    ASSERT_EQ(s.schmidt_rank(), numeric_rank(unfold(t, 0))) << "seed " << seed;
  }
}

TEST(generators, deterministic_and_contracted) {
  EXPECT_EQ(gen_product_state({2, 3}, 99, true), gen_product_state({2, 3}, 99, true));
  EXPECT_EQ(gen_random_state({3, 3}, 99), gen_random_state({3, 3}, 99));
  EXPECT_NE(gen_random_state({3, 3}, 99), gen_random_state({3, 3}, 100));

  const LocalFactors f = gen_product_factors({4, 5, 3}, 5, true);
  for (const auto& v : f.factors)
    for (const Complex& x : v) {
      EXPECT_GE(std::abs(x), 0.1);
      EXPECT_LE(std::abs(x), 1.0);
    }
  EXPECT_GE(std::abs(total_sum(reconstruct(f))), 1e-6);

  EXPECT_EQ(unfolding_ranks(gen_product_state({2, 2, 2}, 4, false)), (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_TRUE(oracle_factorized(gen_random_state({1, 1}, 4)));
  for (const Complex& x : gen_random_state({4, 4}, 8, 0.1).entries()) EXPECT_GE(std::abs(x), 0.1);
}

TEST(generators, random_states_are_almost_surely_entangled) {
  std::mt19937_64 rng(71);
  int entangled = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto dims = random_dims(rng, 2, 2, 6);
    if (numeric_rank(unfold(gen_random_state(dims, seed), 0)) >= 2) ++entangled;
  }
  EXPECT_GE(entangled, 999);
  EXPECT_GE(numeric_rank(unfold(gen_random_state({3, 3}, 1), 0)), 2u);
}

TEST(oracle_factors, rebuild_rank_one_tensors) {
  std::mt19937_64 rng(73);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto dims = random_dims(rng, 2 + seed % 3, 1, 4);
    const CoeffTensor t = gen_product_state(dims, seed, false);
    ASSERT_LT(reconstruction_residual(oracle_factors(t), t), 1e-12);
  }
}
