#pragma once

// Rank-based ground truth. Nothing here uses the sum criteria: a tensor is a
// full product iff every mode unfolding has rank one. Rank comes from
// complete-pivot elimination; the bipartite Schmidt form from an SVD.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "entcheck/tensor.hpp"
#include "entcheck/verdict.hpp"

namespace entcheck {

using ComplexMatrix = Eigen::MatrixXcd;

/// Mode-k unfolding: d_k rows; columns run row-major over the other parties.
inline ComplexMatrix unfold(const CoeffTensor& t, std::size_t party) {
  if (party >= t.party_count()) throw std::out_of_range("party out of range");
  const std::size_t rows = t.dim(party);
  const std::size_t cols = t.size() / rows;
  ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t n = 0; n < t.size(); ++n) {
    const Index idx = t.multi_index(n);
    std::size_t col = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k == party) continue;
      col = col * t.dim(k) + idx[k];
    }
    out(static_cast<Eigen::Index>(idx[party]), static_cast<Eigen::Index>(col)) = t[n];
  }
  return out;
}

/// Magnitudes of the pivots kept by complete-pivot elimination, largest first.
inline std::vector<double> pivot_profile(ComplexMatrix a, const Tolerances& tol = {}) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  std::vector<double> pivots;
  double first = 0.0;
  for (Eigen::Index step = 0; step < std::min(rows, cols); ++step) {
    Eigen::Index pr = step, pc = step;
    double best = -1.0;
    for (Eigen::Index i = step; i < rows; ++i)
      for (Eigen::Index j = step; j < cols; ++j)
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pr = i;
          pc = j;
        }
    if (step == 0) {
      if (best == 0.0) throw std::invalid_argument("rank of the zero matrix is undefined here");
      first = best;
    } else if (best <= tol.eps_rank * first) {
      break;
    }
    a.row(step).swap(a.row(pr));
    a.col(step).swap(a.col(pc));
    pivots.push_back(best);
    const std::complex<double> piv = a(step, step);
    for (Eigen::Index i = step + 1; i < rows; ++i) {
      const std::complex<double> f = a(i, step) / piv;
      if (f == std::complex<double>{0.0, 0.0}) continue;
      for (Eigen::Index j = step; j < cols; ++j) a(i, j) -= f * a(step, j);
    }
  }
  return pivots;
}

inline std::size_t numeric_rank(const ComplexMatrix& a, const Tolerances& tol = {}) {
  return pivot_profile(a, tol).size();
}

inline std::vector<std::size_t> unfolding_ranks(const CoeffTensor& t, const Tolerances& tol = {}) {
  std::vector<std::size_t> ranks;
  for (std::size_t k = 0; k < t.party_count(); ++k) ranks.push_back(numeric_rank(unfold(t, k), tol));
  return ranks;
}

inline bool oracle_factorized(const CoeffTensor& t, const Tolerances& tol = {}) {
  for (std::size_t r : unfolding_ranks(t, tol))
    if (r != 1) return false;
  return true;
}

struct SchmidtForm {
  std::vector<double> values;                      // descending, all above the cutoff
  std::vector<std::vector<Complex>> left_vectors;  // in H_1
  std::vector<std::vector<Complex>> right_vectors; // in H_2

  [[nodiscard]] std::size_t schmidt_rank() const { return values.size(); }
};

/// psi = sum_k lambda_k phi_k (x) chi_k via the SVD C = U S V^H, chi_k = conj(v_k).
inline SchmidtForm schmidt(const CoeffTensor& t, const Tolerances& tol = {}) {
  if (t.party_count() != 2) throw std::invalid_argument("Schmidt form needs exactly two parties");
  const ComplexMatrix c = unfold(t, 0);
  Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  SchmidtForm out;
  const double cutoff = tol.eps_rank * sv(0);
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= cutoff) break;
    out.values.push_back(sv(k));
    std::vector<Complex> u(static_cast<std::size_t>(c.rows())), v(static_cast<std::size_t>(c.cols()));
    for (Eigen::Index i = 0; i < c.rows(); ++i) u[static_cast<std::size_t>(i)] = svd.matrixU()(i, k);
    for (Eigen::Index j = 0; j < c.cols(); ++j) v[static_cast<std::size_t>(j)] = std::conj(svd.matrixV()(j, k));
    out.left_vectors.push_back(std::move(u));
    out.right_vectors.push_back(std::move(v));
  }
  return out;
}

inline ComplexMatrix reconstruct(const SchmidtForm& s) {
  if (s.values.empty()) throw std::invalid_argument("empty Schmidt form");
  const auto m = static_cast<Eigen::Index>(s.left_vectors[0].size());
  const auto n = static_cast<Eigen::Index>(s.right_vectors[0].size());
  ComplexMatrix out = ComplexMatrix::Zero(m, n);
  for (std::size_t k = 0; k < s.values.size(); ++k)
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        out(i, j) += s.values[k] * s.left_vectors[k][static_cast<std::size_t>(i)] *
                     s.right_vectors[k][static_cast<std::size_t>(j)];
  return out;
}

/**
 * Factors of a tensor the oracle judged rank one: for each party the
 * largest-norm column of its unfolding, with the overall scalar folded into
 * the first factor by projection.
 */
inline LocalFactors oracle_factors(const CoeffTensor& t) {
  LocalFactors f;
  for (std::size_t k = 0; k < t.party_count(); ++k) {
    const ComplexMatrix u = unfold(t, k);
    Eigen::Index best = 0;
    u.colwise().norm().maxCoeff(&best);
    std::vector<Complex> v(static_cast<std::size_t>(u.rows()));
    for (Eigen::Index i = 0; i < u.rows(); ++i) v[static_cast<std::size_t>(i)] = u(i, best);
    f.factors.push_back(std::move(v));
  }
  const CoeffTensor shape = reconstruct(f);
  Complex num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t n = 0; n < t.size(); ++n) {
    num += std::conj(shape[n]) * t[n];
    den += std::norm(shape[n]);
  }
  for (Complex& x : f.factors[0]) x *= num / den;
  return f;
}

// Generators for property tests. Deterministic in (dims, seed) for a given
// standard library.

namespace detail {

inline Complex unit_disk_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double radius = std::sqrt(u(rng));
  const double angle = kTwoPi * u(rng);
  return std::polar(radius, angle);
}

}  // namespace detail

/// Random factors on the complex unit disk. With zero_avoidance, entries under
/// 0.1 in modulus are redrawn and factor sets are redrawn until |sum| >= 1e-6.
inline LocalFactors gen_product_factors(const std::vector<std::size_t>& dims, std::uint64_t seed,
                                        bool zero_avoidance) {
  if (dims.size() < 2) throw std::invalid_argument("need at least two parties");
  std::mt19937_64 rng(seed);
  while (true) {
    LocalFactors f;
    for (std::size_t d : dims) {
      if (d == 0) throw std::invalid_argument("dimensions must be positive");
      std::vector<Complex> v(d);
      for (Complex& x : v) {
        do {
          x = detail::unit_disk_sample(rng);
        } while ((zero_avoidance && std::abs(x) < 0.1) || x == Complex{0.0, 0.0});
      }
      f.factors.push_back(std::move(v));
    }
    if (!zero_avoidance) return f;
    Complex total{1.0, 0.0};
    for (const auto& v : f.factors) {
      Complex s{0.0, 0.0};
      for (const Complex& x : v) s += x;
      total *= s;
    }
    if (std::abs(total) >= 1e-6) return f;
  }
}

inline CoeffTensor gen_product_state(const std::vector<std::size_t>& dims, std::uint64_t seed,
                                     bool zero_avoidance) {
  return reconstruct(gen_product_factors(dims, seed, zero_avoidance));
}

/// I.i.d. entries on the complex unit disk, redrawn while below min_magnitude.
inline CoeffTensor gen_random_state(const std::vector<std::size_t>& dims, std::uint64_t seed,
                                    double min_magnitude = 0.0) {
  std::mt19937_64 rng(seed);
  std::size_t count = 1;
  for (std::size_t d : dims) count *= d;
  std::vector<Complex> entries(count);
  for (Complex& x : entries) {
    do {
      x = detail::unit_disk_sample(rng);
    } while (std::abs(x) < min_magnitude || x == Complex{0.0, 0.0});
  }
  return CoeffTensor(dims, std::move(entries));
}

}  // namespace entcheck
