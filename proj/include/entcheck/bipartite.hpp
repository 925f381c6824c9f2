#pragma once

// Coefficient-sum criteria for bipartite states.
//
// With c = sum_ij c_ij, R_i = sum_j c_ij and C_j = sum_i c_ij, a matrix with
// c != 0 is a product a (x) b exactly when c_ij * c == R_i * C_j everywhere,
// and then a_i = R_i / c, b_j = C_j. When c == 0 the identity cannot certify
// a product, but any nonzero R_i * C_j still proves entanglement. When both
// vanish nothing can be concluded from the sums alone.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "entcheck/tensor.hpp"
#include "entcheck/verdict.hpp"

namespace entcheck {

namespace detail {

inline void require_bipartite(const CoeffTensor& t) {
  if (t.party_count() != 2) {
    throw std::invalid_argument("bipartite test needs exactly two parties, got " +
                                std::to_string(t.party_count()));
  }
}

/// |total| > eps_mag * max|c_ij|
inline bool sum_is_nonzero(Complex total, double max_mag, const Tolerances& tol) {
  return std::abs(total) > tol.eps_mag * max_mag;
}

struct Mismatch {
  std::size_t i, j;
  Complex lhs, rhs;     // raw
  double scaled;        // |lhs - rhs| / norm
  bool lhs_zero, rhs_zero;
};

// Support mismatches come first: an entry present where the marginal product
// vanishes, then an entry absent where it does not, then any value mismatch.
// Index order within each class.
inline const Mismatch* pick_witness(const std::vector<Mismatch>& all) {
  const Mismatch* best = nullptr;
  auto rank = [](const Mismatch& m) {
    if (!m.lhs_zero && m.rhs_zero) return 0;
    if (m.lhs_zero && !m.rhs_zero) return 1;
    return 2;
  };
  for (const Mismatch& m : all) {
    if (best == nullptr || rank(m) < rank(*best)) best = &m;
  }
  return best;
}

inline Witness to_witness(const Mismatch& m, std::string note) {
  return Witness{{m.i, m.j}, std::abs(m.lhs - m.rhs), m.scaled, std::move(note)};
}

inline Verdict vanishing_sum_verdict(const CoeffTensor& t, const Tolerances& tol) {
  const double scale = t.max_magnitude();
  const double norm = scale * scale;
  const auto rs = partial_sums(t, 0);
  const auto cs = partial_sums(t, 1);
  const Complex total = total_sum(t);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const Complex product = rs[i] * cs[j];
      const double scaled = std::abs(product) / norm;
      if (scaled > tol.eps_mag) {
        return Verdict::make_entangled(
            Criterion::vanishing_sum,
            Witness{{i, j}, std::abs(t(i, j) * total - product), scaled,
                    "total sum vanishes but row sum x column sum does not"});
      }
    }
  }
  return Verdict::make_inconclusive(Criterion::degenerate,
                                    "total sum and every row sum x column sum product vanish");
}

}  // namespace detail

/**
 * Sum-rule test. Factorized verdicts carry a_i = R_i / c, b_j = C_j.
 * Entangled verdicts carry the witness chosen by detail::pick_witness.
 * A vanishing total sum falls through to check_vanishing_sum's logic.
 */
inline Verdict check_sum_rule(const CoeffTensor& t, const Tolerances& tol = {}) {
  detail::require_bipartite(t);
  const Complex total = total_sum(t);
  const double scale = t.max_magnitude();
  if (!detail::sum_is_nonzero(total, scale, tol)) return detail::vanishing_sum_verdict(t, tol);

  const double norm = scale * scale;
  const auto rs = partial_sums(t, 0);
  const auto cs = partial_sums(t, 1);
  std::vector<detail::Mismatch> mismatches;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const Complex lhs = t(i, j) * total;
      const Complex rhs = rs[i] * cs[j];
      if (!approx_eq(lhs / norm, rhs / norm, tol)) {
        mismatches.push_back({i, j, lhs, rhs, std::abs(lhs - rhs) / norm,
                              std::abs(lhs) / norm <= tol.eps_mag, std::abs(rhs) / norm <= tol.eps_mag});
      }
    }
  }
  if (const auto* m = detail::pick_witness(mismatches)) {
    return Verdict::make_entangled(Criterion::sum_rule,
                                   detail::to_witness(*m, "c_ij * sum != row sum * column sum"));
  }

  LocalFactors f;
  f.factors.resize(2);
  for (const Complex& r : rs) f.factors[0].push_back(r / total);
  f.factors[1] = cs;
  return Verdict::make_factorized(Criterion::sum_rule, std::move(f));
}

/// Entanglement shortcut for a vanishing total sum. Throws ContractError if the sum is nonzero.
inline Verdict check_vanishing_sum(const CoeffTensor& t, const Tolerances& tol = {}) {
  detail::require_bipartite(t);
  if (detail::sum_is_nonzero(total_sum(t), t.max_magnitude(), tol)) {
    throw ContractError("vanishing-sum test requires a zero total sum");
  }
  return detail::vanishing_sum_verdict(t, tol);
}

/// a_i = R_i / c, b_j = C_j. Does not re-verify the sum rule.
inline LocalFactors extract_local_parts(const CoeffTensor& t, const Tolerances& tol = {}) {
  detail::require_bipartite(t);
  const Complex total = total_sum(t);
  if (!detail::sum_is_nonzero(total, t.max_magnitude(), tol)) {
    throw ContractError("local parts need a nonzero total sum");
  }
  LocalFactors f;
  f.factors.resize(2);
  for (const Complex& r : partial_sums(t, 0)) f.factors[0].push_back(r / total);
  f.factors[1] = partial_sums(t, 1);
  return f;
}

/**
 * Per-party scalars s_k with f2[k] = s_k * f1[k] and prod s_k = 1, if they
 * exist. Each s_k is read off the first coordinate where f1[k] is nonzero and
 * then checked on every coordinate.
 */
inline std::optional<std::vector<Complex>> equivalence_scalars(const LocalFactors& f1, const LocalFactors& f2,
                                                               const Tolerances& tol = {}) {
  if (f1.dims() != f2.dims()) throw std::invalid_argument("factor dimensions differ");
  std::vector<Complex> scalars;
  for (std::size_t k = 0; k < f1.party_count(); ++k) {
    const auto& u = f1[k];
    const auto& v = f2[k];
    double umax = 0.0, vmax = 0.0;
    for (const Complex& x : u) umax = std::max(umax, std::abs(x));
    for (const Complex& x : v) vmax = std::max(vmax, std::abs(x));
    if (umax == 0.0 || vmax == 0.0) throw std::invalid_argument("zero factor vector");
    std::size_t p = 0;
    while (std::abs(u[p]) <= tol.eps_mag * umax) ++p;
    const Complex s = v[p] / u[p];
    for (std::size_t q = 0; q < u.size(); ++q) {
      if (!approx_eq(v[q] / vmax, s * u[q] / vmax, tol)) return std::nullopt;
    }
    scalars.push_back(s);
  }
  Complex prod{1.0, 0.0};
  for (const Complex& s : scalars) prod *= s;
  if (!approx_eq(prod, Complex{1.0, 0.0}, tol)) return std::nullopt;
  return scalars;
}

/// The scalar a with f2.a = a * f1.a and f2.b = f1.b / a, if one exists.
inline std::optional<Complex> rescaling_between(const LocalFactors& f1, const LocalFactors& f2,
                                                const Tolerances& tol = {}) {
  if (f1.party_count() != 2 || f2.party_count() != 2) {
    throw std::invalid_argument("reciprocal scaling compares bipartite factor pairs");
  }
  auto s = equivalence_scalars(f1, f2, tol);
  if (!s) return std::nullopt;
  return (*s)[0];
}

inline CoeffTensor negate_row(const CoeffTensor& t, std::size_t row) {
  detail::require_bipartite(t);
  if (row >= t.rows()) throw std::out_of_range("row out of range");
  return t.map([&](std::size_t n, Complex c) { return t.index_of(n, 0) == row ? -c : c; });
}

inline CoeffTensor negate_column(const CoeffTensor& t, std::size_t col) {
  detail::require_bipartite(t);
  if (col >= t.cols()) throw std::out_of_range("column out of range");
  return t.map([&](std::size_t n, Complex c) { return t.index_of(n, 1) == col ? -c : c; });
}

/**
 * Retries the sum rule after negating a single row (each in turn), then a
 * single column, i.e. after replacing one basis vector by its negative.
 * Returns the first conclusive verdict, with factors mapped back to the
 * original basis. Only valid on inputs the sum rule left inconclusive.
 */
inline Verdict sign_flip_recover(const CoeffTensor& t, const Tolerances& tol = {}) {
  detail::require_bipartite(t);
  if (check_sum_rule(t, tol).conclusive()) {
    throw ContractError("sign-flip recovery applies only to inconclusive inputs");
  }
  auto attempt = [&](const CoeffTensor& flipped, BasisFlip flip) -> std::optional<Verdict> {
    Verdict v = check_sum_rule(flipped, tol);
    if (!v.conclusive()) return std::nullopt;
    v.flip = flip;
    if (v.factors) {
      auto& target = flip.axis == BasisFlip::Axis::row ? v.factors->factors[0] : v.factors->factors[1];
      target[flip.index] = -target[flip.index];
    }
    return v;
  };
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (auto v = attempt(negate_row(t, i), {BasisFlip::Axis::row, i})) return *v;
  }
  for (std::size_t j = 0; j < t.cols(); ++j) {
    if (auto v = attempt(negate_column(t, j), {BasisFlip::Axis::column, j})) return *v;
  }
  return Verdict::make_inconclusive(Criterion::degenerate, "every single row/column negation stays degenerate");
}

}  // namespace entcheck
