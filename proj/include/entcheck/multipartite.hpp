#pragma once

// Sum-rule test for r-party tensors.
//
// With S the total sum and P_k(j) the party-k partial sums, a tensor with
// S != 0 is a full product iff c_{j_1..j_r} * S^(r-1) = prod_k P_k(j_k) for
// every multi-index. The factors are then a^1 = P_1 / S^(r-1), a^k = P_k.

#include <cstddef>
#include <vector>

#include "entcheck/tensor.hpp"
#include "entcheck/verdict.hpp"

namespace entcheck {

inline Verdict check_multipartite(const CoeffTensor& t, const Tolerances& tol = {}) {
  const std::size_t r = t.party_count();
  const Complex total = total_sum(t);
  const double scale = t.max_magnitude();
  if (std::abs(total) <= tol.eps_mag * scale) {
    return Verdict::make_inconclusive(Criterion::multipartite_sum, "total sum vanishes");
  }

  std::vector<std::vector<Complex>> sums;
  sums.reserve(r);
  for (std::size_t k = 0; k < r; ++k) sums.push_back(partial_sums(t, k));

  Complex power{1.0, 0.0};
  for (std::size_t k = 1; k < r; ++k) power *= total;
  const double norm = scale * std::abs(power);

  for (std::size_t n = 0; n < t.size(); ++n) {
    const Complex lhs = t[n] * power;
    Complex rhs{1.0, 0.0};
    for (std::size_t k = 0; k < r; ++k) rhs *= sums[k][t.index_of(n, k)];
    if (!approx_eq(lhs / norm, rhs / norm, tol)) {
      const double residual = std::abs(lhs - rhs);
      return Verdict::make_entangled(
          Criterion::multipartite_sum,
          Witness{t.multi_index(n), residual, residual / norm, "c * sum^(r-1) != product of partial sums"});
    }
  }

  LocalFactors f;
  f.factors = std::move(sums);
  for (Complex& x : f.factors[0]) x /= power;
  return Verdict::make_factorized(Criterion::multipartite_sum, std::move(f));
}

}  // namespace entcheck
