#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "entcheck/entcheck.hpp"

namespace entcheck::testing {

using namespace std::complex_literals;

inline CoeffTensor mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  std::vector<Complex> e;
  std::size_t cols = rows.begin()->size();
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("ragged test matrix");
    e.insert(e.end(), r.begin(), r.end());
  }
  return CoeffTensor::matrix(rows.size(), cols, std::move(e));
}

inline CoeffTensor worked_product() {
  return mat({{4.0, -3.0i, 5.0}, {-8.0, 6.0i, -10.0}, {12.0, -9.0i, 15.0}});
}
inline CoeffTensor degenerate_product() { return mat({{1.0, -1.0}, {-1.0, 1.0}}); }
inline CoeffTensor degenerate_entangled() { return mat({{1.0, -1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, -1.0}}); }

inline CoeffTensor ghz3() {
  std::vector<Complex> e(8, 0.0);
  e[0] = 1.0;
  e[7] = 1.0;
  return CoeffTensor({2, 2, 2}, e);
}

inline CoeffTensor diagonal(const std::vector<double>& lambdas) {
  const std::size_t k = lambdas.size();
  std::vector<Complex> e(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) e[i * k + i] = lambdas[i];
  return CoeffTensor::matrix(k, k, e);
}

inline LocalFactors pair(std::vector<Complex> a, std::vector<Complex> b) {
  return LocalFactors{{std::move(a), std::move(b)}};
}

/// Rank-one test for a matrix via all 2x2 minors, relative to max|c|^2.
/// Shares nothing with the library's elimination or SVD code.
inline bool rank1_by_minors(const CoeffTensor& t, double rel = 1e-9) {
  const double s = t.max_magnitude();
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t k = i + 1; k < t.rows(); ++k)
      for (std::size_t j = 0; j < t.cols(); ++j)
        for (std::size_t l = j + 1; l < t.cols(); ++l)
          if (std::abs(t(i, j) * t(k, l) - t(i, l) * t(k, j)) > rel * s * s) return false;
  return true;
}

inline double max_abs_diff(const CoeffTensor& a, const CoeffTensor& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

/// Seeded dims in [lo, hi] per party.
inline std::vector<std::size_t> random_dims(std::mt19937_64& rng, std::size_t parties, std::size_t lo,
                                            std::size_t hi) {
  std::uniform_int_distribution<std::size_t> u(lo, hi);
  std::vector<std::size_t> d(parties);
  for (auto& x : d) x = u(rng);
  return d;
}

}  // namespace entcheck::testing
