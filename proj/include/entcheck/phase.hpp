#pragma once

// Modulus/phase test for bipartite states, valid for any total sum.
//
// The matrix is padded to d x d, d = max(m, n). A product a (x) b must have
//   (1) |c_ij| * S = R_i * C_j on the moduli (S, R, C the sums of |c|), and
//   (2) sum_j arg c_ij + sum_i arg c_ij = d * arg c_ij + c  (mod 2pi)
//       for one real constant c.
// Given both, angles alpha_i = (sum_j arg c_ij - c) / d and
// beta_j = (sum_i arg c_ij) / d rebuild the phases, up to one d-th root of
// unity per row and column, which is resolved against a reference entry.
// Condition (2) alone does not rule out grids that differ from a product by
// multiples of 2pi/d, so the resolved angles are always checked against every
// entry before a product is reported.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "entcheck/tensor.hpp"
#include "entcheck/verdict.hpp"

namespace entcheck {

/// Distance on the circle, in [0, pi].
inline double circular_distance(double x, double y) {
  const double delta = wrap_angle(x - y);
  return std::min(delta, kTwoPi - delta);
}

/// c = sum_j theta(i,j) + sum_i theta(i,j) - d * theta(i,j), reduced to [0, 2pi).
inline double phase_constant_at(const PhaseSolution& s, std::size_t i, std::size_t j) {
  return wrap_angle(s.theta_row_sums[i] + s.theta_col_sums[j] -
                    static_cast<double>(s.d) * s.theta[i * s.d + j]);
}

namespace detail {

struct PaddedModuli {
  std::size_t d;
  std::vector<double> mag;  // d x d
  std::vector<double> rows, cols;
  double total = 0.0;
};

inline PaddedModuli padded_moduli(const CoeffTensor& t) {
  PaddedModuli p;
  p.d = std::max(t.rows(), t.cols());
  p.mag.assign(p.d * p.d, 0.0);
  p.rows.assign(p.d, 0.0);
  p.cols.assign(p.d, 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const double m = std::abs(t(i, j));
      p.mag[i * p.d + j] = m;
      p.rows[i] += m;
      p.cols[j] += m;
      p.total += m;
    }
  }
  return p;
}

// Cells with no usable argument (zero, or padding) get the argument a product
// would give them: a free row copies the reference row's phase, a free column
// the reference column's. Real entries keep their own argument.
inline void fill_phase_grid(const CoeffTensor& t, PhaseSolution& s, double cutoff) {
  const std::size_t d = s.d;
  s.theta.assign(d * d, 0.0);
  s.significant.assign(d * d, false);
  auto real = [&](std::size_t i, std::size_t j) {
    return i < t.rows() && j < t.cols() && std::abs(t(i, j)) > cutoff;
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (real(i, j)) {
        s.significant[i * d + j] = true;
        s.theta[i * d + j] = phase_angle(t(i, j));
      }
  const std::size_t ri = s.ref_row, rj = s.ref_col;
  const double ref = s.theta[ri * d + rj];
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (s.significant[i * d + j]) continue;
      const bool row_known = s.significant[i * d + rj];
      const bool col_known = s.significant[ri * d + j];
      double v = ref;
      if (row_known && col_known) {
        v = s.theta[i * d + rj] + s.theta[ri * d + j] - ref;
      } else if (row_known) {
        v = s.theta[i * d + rj];
      } else if (col_known) {
        v = s.theta[ri * d + j];
      }
      s.theta[i * d + j] = wrap_angle(v);
    }
  }
  s.theta_row_sums.assign(d, 0.0);
  s.theta_col_sums.assign(d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      s.theta_row_sums[i] += s.theta[i * d + j];
      s.theta_col_sums[j] += s.theta[i * d + j];
    }
}

// Snap `angle` by a multiple of 2pi/d so it lands on `target` mod 2pi.
inline double resolve_root(double angle, double target, std::size_t d) {
  const double step = kTwoPi / static_cast<double>(d);
  const double k = std::round(wrap_angle(target - angle) / step);
  return wrap_angle(angle + k * step);
}

}  // namespace detail

/**
 * Modulus/phase factorization test. Always conclusive for a valid tensor.
 *
 * Zero entries (|c_ij| <= eps_rank * max|c|) take no part in the phase
 * condition; entries within 10x of that cutoff are compared with a 10x wider
 * angular tolerance.
 */
inline Verdict check_modulus_phase(const CoeffTensor& t, const Tolerances& tol = {}) {
  if (t.party_count() != 2) throw std::invalid_argument("modulus/phase test needs exactly two parties");
  const std::size_t m = t.rows(), n = t.cols();
  const auto p = detail::padded_moduli(t);
  const std::size_t d = p.d;
  const double scale = t.max_magnitude();
  const double norm = scale * scale;

  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double lhs = p.mag[i * d + j] * p.total;
      const double rhs = p.rows[i] * p.cols[j];
      if (!approx_eq(lhs / norm, rhs / norm, tol)) {
        return Verdict::make_entangled(
            Criterion::modulus_phase,
            Witness{{i, j}, std::abs(lhs - rhs), std::abs(lhs - rhs) / norm, "moduli are not a product"});
      }
    }
  }

  PhaseSolution s;
  s.d = d;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(t(i, j)) > std::abs(t(s.ref_row, s.ref_col))) {
        s.ref_row = i;
        s.ref_col = j;
      }
  const double cutoff = tol.eps_rank * scale;
  detail::fill_phase_grid(t, s, cutoff);
  s.c = phase_constant_at(s, s.ref_row, s.ref_col);

  auto angular_tol = [&](std::size_t i, std::size_t j) {
    return std::abs(t(i, j)) < 10.0 * cutoff ? 10.0 * tol.eps_ang : tol.eps_ang;
  };

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!s.significant[i * d + j]) continue;
      const double lhs = s.theta_row_sums[i] + s.theta_col_sums[j];
      const double rhs = static_cast<double>(d) * s.theta[i * d + j] + s.c;
      const double dist = circular_distance(lhs, rhs);
      if (dist > angular_tol(i, j)) {
        return Verdict::make_entangled(Criterion::modulus_phase,
                                       Witness{{i, j}, dist, dist, "no shared phase constant"});
      }
    }
  }

  const double dd = static_cast<double>(d);
  std::vector<double> alpha(d), beta(d);
  for (std::size_t i = 0; i < d; ++i) alpha[i] = wrap_angle((s.theta_row_sums[i] - s.c) / dd);
  for (std::size_t j = 0; j < d; ++j) beta[j] = wrap_angle(s.theta_col_sums[j] / dd);
  const std::size_t ri = s.ref_row, rj = s.ref_col;
  for (std::size_t j = 0; j < d; ++j) beta[j] = detail::resolve_root(alpha[ri] + beta[j], s.theta[ri * d + j], d) - alpha[ri];
  for (std::size_t i = 0; i < d; ++i) alpha[i] = detail::resolve_root(alpha[i] + beta[rj], s.theta[i * d + rj], d) - beta[rj];

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!s.significant[i * d + j]) continue;
      const double dist = circular_distance(alpha[i] + beta[j], s.theta[i * d + j]);
      if (dist > angular_tol(i, j)) {
        // The shared-constant condition held, but only up to a 2pi/d alias.
        return Verdict::make_entangled(Criterion::modulus_phase,
                                       Witness{{i, j}, dist, dist, "phases differ from a product by a 2pi/d alias"});
      }
    }
  }

  LocalFactors f;
  f.factors.resize(2);
  for (std::size_t i = 0; i < m; ++i) {
    const double mag = p.rows[i] / p.total;
    s.mags_a.push_back(mag);
    s.alpha.push_back(wrap_angle(alpha[i]));
    f.factors[0].push_back(std::polar(mag, alpha[i]));
  }
  for (std::size_t j = 0; j < n; ++j) {
    s.mags_b.push_back(p.cols[j]);
    s.beta.push_back(wrap_angle(beta[j]));
    f.factors[1].push_back(std::polar(p.cols[j], beta[j]));
  }

  const CoeffTensor rebuilt = reconstruct(f, t.dims());
  std::size_t worst = 0;
  for (std::size_t k = 1; k < t.size(); ++k)
    if (std::abs(rebuilt[k] - t[k]) > std::abs(rebuilt[worst] - t[worst])) worst = k;
  const double residual = std::abs(rebuilt[worst] - t[worst]);
  if (residual > 10.0 * tol.eps_mag * scale) {
    Verdict v = Verdict::make_entangled(
        Criterion::modulus_phase,
        Witness{t.multi_index(worst), residual, residual / scale, "rebuilt factors do not reproduce the input"});
    v.phase = std::move(s);
    return v;
  }
  Verdict v = Verdict::make_factorized(Criterion::modulus_phase, std::move(f));
  v.phase = std::move(s);
  return v;
}

}  // namespace entcheck
