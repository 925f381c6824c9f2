#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entcheck/tensor.hpp"

namespace entcheck {

/// One coefficient vector per party; their outer product is the claimed state.
struct LocalFactors {
  std::vector<std::vector<Complex>> factors;

  [[nodiscard]] std::size_t party_count() const { return factors.size(); }
  [[nodiscard]] const std::vector<Complex>& operator[](std::size_t k) const { return factors[k]; }
  [[nodiscard]] std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (const auto& f : factors) d.push_back(f.size());
    return d;
  }
};

/// Dense outer product a^1 (x) a^2 (x) ... (x) a^r, row-major.
inline CoeffTensor reconstruct(const LocalFactors& f) {
  if (f.party_count() < 2) throw std::invalid_argument("need at least two factors");
  std::vector<Complex> out{Complex{1.0, 0.0}};
  for (const auto& v : f.factors) {
    if (v.empty()) throw std::invalid_argument("empty factor vector");
    std::vector<Complex> next;
    next.reserve(out.size() * v.size());
    for (const Complex& x : out)
      for (const Complex& y : v) next.push_back(x * y);
    out = std::move(next);
  }
  return CoeffTensor(f.dims(), std::move(out));
}

/// Outer product checked against a target shape.
inline CoeffTensor reconstruct(const LocalFactors& f, const std::vector<std::size_t>& shape) {
  if (f.dims() != shape) throw std::invalid_argument("factor dimensions do not match target shape");
  return reconstruct(f);
}

/// max_n |reconstruct(f)_n - t_n|, absolute.
inline double reconstruction_residual(const LocalFactors& f, const CoeffTensor& t) {
  const CoeffTensor r = reconstruct(f, t.dims());
  double worst = 0.0;
  for (std::size_t n = 0; n < t.size(); ++n) worst = std::max(worst, std::abs(r[n] - t[n]));
  return worst;
}

enum class Outcome { factorized, entangled, inconclusive };

/// Which test produced a verdict. The string forms match the CLI `--method` names.
enum class Criterion { sum_rule, vanishing_sum, modulus_phase, multipartite_sum, rank_oracle, degenerate };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::factorized: return "factorized";
    case Outcome::entangled: return "entangled";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

inline std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::sum_rule: return "thm2";
    case Criterion::vanishing_sum: return "cor3";
    case Criterion::modulus_phase: return "thm4";
    case Criterion::multipartite_sum: return "thm5";
    case Criterion::rank_oracle: return "oracle";
    case Criterion::degenerate: return "eq2-degenerate";
  }
  return "?";
}

/// Where a criterion failed. `residual` is |lhs - rhs| in the input's own units;
/// `scaled_residual` is the quantity actually compared against the tolerance.
struct Witness {
  Index index;
  double residual = 0.0;
  double scaled_residual = 0.0;
  std::string note;
};

/// Single row or column negation applied before a conclusive sum-rule run.
struct BasisFlip {
  enum class Axis { row, column } axis;
  std::size_t index;
};

/// Angles and moduli behind a modulus/phase factorization.
struct PhaseSolution {
  std::size_t d = 0;             // padded square dimension max(m, n)
  double c = 0.0;                // shared phase constant, [0, 2pi)
  std::vector<double> alpha;     // m row angles
  std::vector<double> beta;      // n column angles
  std::vector<double> mags_a;
  std::vector<double> mags_b;
  std::size_t ref_row = 0;
  std::size_t ref_col = 0;
  // d x d argument grid (row-major) with zero / padded cells filled in,
  // plus its row and column sums.
  std::vector<double> theta;
  std::vector<double> theta_row_sums;
  std::vector<double> theta_col_sums;
  std::vector<bool> significant;  // d x d, true where the real entry was used
};

struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  Criterion decided_by = Criterion::sum_rule;
  std::optional<LocalFactors> factors;
  std::optional<Witness> witness;
  std::optional<BasisFlip> flip;
  std::optional<PhaseSolution> phase;
  std::string reason;

  [[nodiscard]] bool conclusive() const { return outcome != Outcome::inconclusive; }
  [[nodiscard]] bool factorized() const { return outcome == Outcome::factorized; }
  [[nodiscard]] bool entangled() const { return outcome == Outcome::entangled; }

  static Verdict make_factorized(Criterion by, LocalFactors f) {
    Verdict v;
    v.outcome = Outcome::factorized;
    v.decided_by = by;
    v.factors = std::move(f);
    return v;
  }
  static Verdict make_entangled(Criterion by, Witness w) {
    Verdict v;
    v.outcome = Outcome::entangled;
    v.decided_by = by;
    v.witness = std::move(w);
    return v;
  }
  static Verdict make_inconclusive(Criterion by, std::string why) {
    Verdict v;
    v.outcome = Outcome::inconclusive;
    v.decided_by = by;
    v.reason = std::move(why);
    return v;
  }
};

}  // namespace entcheck
