#include "gtest/gtest.h"

#include <numbers>
#include <random>

#include "test_support.hpp"

using namespace entcheck;
using namespace entcheck::testing;

TEST(circular_distance, examples) {
  EXPECT_NEAR(circular_distance(0.1, kTwoPi - 0.1), 0.2, 1e-12);
  EXPECT_EQ(circular_distance(std::numbers::pi, std::numbers::pi), 0.0);
  EXPECT_NEAR(circular_distance(0.0, std::numbers::pi), std::numbers::pi, 1e-15);
  EXPECT_NEAR(circular_distance(-0.1, 4 * std::numbers::pi + 0.1), 0.2, 1e-12);
}

TEST(modulus_phase, degenerate_product_is_factorized) {
  const Verdict v = check_modulus_phase(degenerate_product());
  ASSERT_TRUE(v.factorized());
  EXPECT_EQ(v.decided_by, Criterion::modulus_phase);
  ASSERT_TRUE(v.phase.has_value());
  EXPECT_EQ(v.phase->d, 2u);
  EXPECT_LT(circular_distance(v.phase->c, 0.0), 1e-12);
  EXPECT_TRUE(rescaling_between(*v.factors, pair({1.0, -1.0}, {1.0, -1.0})).has_value());
}

TEST(modulus_phase, degenerate_entangled_fails_on_moduli) {
  const Verdict v = check_modulus_phase(degenerate_entangled());
  ASSERT_TRUE(v.entangled());
  EXPECT_EQ(v.witness->index, (Index{0, 0}));
  EXPECT_DOUBLE_EQ(v.witness->residual, 2.0);  // 1 * 4 vs 2 * 1
}

TEST(modulus_phase, worked_product_phase_constant) {
  const Verdict v = check_modulus_phase(worked_product());
  ASSERT_TRUE(v.factorized());
  EXPECT_EQ(v.phase->ref_row, 2u);
  EXPECT_EQ(v.phase->ref_col, 2u);
  EXPECT_NEAR(v.phase->c, std::numbers::pi / 2, 1e-12);
  EXPECT_TRUE(rescaling_between(*v.factors, pair({1.0, -2.0, 3.0}, {4.0, -3.0i, 5.0})).has_value());
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(v.phase->mags_a[i] * v.phase->mags_b[j], std::abs(worked_product()(i, j)), 1e-12);
      EXPECT_LT(circular_distance(v.phase->alpha[i] + v.phase->beta[j], phase_angle(worked_product()(i, j))), 1e-12);
    }
  }
}

TEST(modulus_phase, shared_constant_alias_is_rejected) {
  // Unit moduli and a 2pi/3 phase on the diagonal: the shared-constant
  // condition holds with c = 4pi/3 at every entry, yet the rank is 3.
  const Complex w = std::polar(1.0, kTwoPi / 3);
  const CoeffTensor t = mat({{w, 1.0, 1.0}, {1.0, w, 1.0}, {1.0, 1.0, w}});
  const Verdict v = check_modulus_phase(t);
  ASSERT_TRUE(v.entangled());
  ASSERT_FALSE(oracle_factorized(t));
  EXPECT_NE(v.witness->note.find("alias"), std::string::npos);
}

TEST(modulus_phase, non_square_and_zero_patterns) {
  EXPECT_TRUE(check_modulus_phase(mat({{1.0, 1.0i}})).factorized());
  EXPECT_TRUE(check_modulus_phase(mat({{1.0}, {-1.0i}, {2.0}})).factorized());
  // Zero row and zero column inside a product.
  const CoeffTensor t = reconstruct(pair({1.0, 0.0, 2.0i}, {0.0, 3.0, -1.0, 1.0i}));
  const Verdict v = check_modulus_phase(t);
  ASSERT_TRUE(v.factorized());
  EXPECT_LT(reconstruction_residual(*v.factors, t), 1e-12);
  EXPECT_TRUE(check_modulus_phase(diagonal({1.0, 2.0})).entangled());
}

TEST(modulus_phase, wrong_arity) { EXPECT_THROW(check_modulus_phase(ghz3()), std::invalid_argument); }

TEST(modulus_phase, agrees_with_oracle_on_nonzero_matrices) {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto dims = random_dims(rng, 2, 1, 6);
    const CoeffTensor t = seed % 2 ? gen_random_state(dims, seed, 0.1) : gen_product_state(dims, seed, true);
    const Verdict v = check_modulus_phase(t);
    ASSERT_TRUE(v.conclusive());
    ASSERT_EQ(v.factorized(), oracle_factorized(t)) << "seed " << seed;
    ASSERT_EQ(v.factorized(), rank1_by_minors(t)) << "seed " << seed;
  }
}

TEST(modulus_phase, random_products_without_zero_avoidance) {
  std::mt19937_64 rng(37);
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto dims = random_dims(rng, 2, 1, 8);
    const CoeffTensor t = gen_product_state(dims, seed, false);
    const Verdict v = check_modulus_phase(t);
    if (!v.factorized() || reconstruction_residual(*v.factors, t) > 10 * 1e-9 * t.max_magnitude()) {
      ++failures;
      ADD_FAILURE() << "seed " << seed << " dims " << dims[0] << "x" << dims[1];
    }
  }
  EXPECT_EQ(failures, 0);
}

TEST(modulus_phase, phase_constant_is_well_defined) {
  std::mt19937_64 rng(41);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto dims = random_dims(rng, 2, 1, 6);
    const Verdict v = check_modulus_phase(gen_product_state(dims, seed, false));
    ASSERT_TRUE(v.factorized());
    const PhaseSolution& s = *v.phase;
    for (std::size_t i = 0; i < dims[0]; ++i)
      for (std::size_t j = 0; j < dims[1]; ++j)
        if (s.significant[i * s.d + j]) {
          ASSERT_LT(circular_distance(phase_constant_at(s, i, j), s.c), 1e-9);
        }
  }
}

TEST(modulus_phase, global_phase_and_padding_invariance) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto dims = random_dims(rng, 2, 1, 5);
    const CoeffTensor t = seed % 2 ? gen_random_state(dims, seed) : gen_product_state(dims, seed, false);
    const Outcome base = check_modulus_phase(t).outcome;

    const Complex phase = std::polar(1.0, angle(rng));
    EXPECT_EQ(check_modulus_phase(t.map([&](std::size_t, Complex c) { return c * phase; })).outcome, base);

    const std::size_t d = std::max(dims[0], dims[1]);
    std::vector<Complex> padded(d * d, 0.0);
    for (std::size_t i = 0; i < dims[0]; ++i)
      for (std::size_t j = 0; j < dims[1]; ++j) padded[i * d + j] = t(i, j);
    EXPECT_EQ(check_modulus_phase(CoeffTensor::matrix(d, d, padded)).outcome, base);
  }
}

TEST(modulus_phase, arguments_near_the_branch_cut) {
  // Entries straddling arg = 0 must not be split by the 2pi wrap.
  const double e = 1e-13;
  const CoeffTensor t = reconstruct(pair({std::polar(1.0, e), std::polar(2.0, -e)}, {std::polar(1.0, -e), 3.0}));
  EXPECT_TRUE(check_modulus_phase(t).factorized());
}
