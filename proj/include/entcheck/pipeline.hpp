#pragma once

// Escalating analysis of one state.
//
// Two parties: sum rule -> single sign flips -> modulus/phase (always decides).
// More parties: multipartite sum rule -> rank oracle when the sum vanishes.
// The rank oracle then cross-checks the final verdict unless disabled.

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entcheck/bipartite.hpp"
#include "entcheck/multipartite.hpp"
#include "entcheck/oracle.hpp"
#include "entcheck/phase.hpp"
#include "entcheck/tensor.hpp"
#include "entcheck/verdict.hpp"

namespace entcheck {

enum class Method { automatic, sum_rule, modulus_phase, multipartite_sum, oracle };

inline Method parse_method(std::string_view s) {
  if (s == "auto") return Method::automatic;
  if (s == "thm2") return Method::sum_rule;
  if (s == "thm4") return Method::modulus_phase;
  if (s == "thm5") return Method::multipartite_sum;
  if (s == "oracle") return Method::oracle;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::automatic: return "auto";
    case Method::sum_rule: return "thm2";
    case Method::modulus_phase: return "thm4";
    case Method::multipartite_sum: return "thm5";
    case Method::oracle: return "oracle";
  }
  return "?";
}

struct AnalysisConfig {
  Method method = Method::automatic;
  Tolerances tol;
  bool oracle_check = true;
};

struct StageRecord {
  std::string stage;
  Verdict verdict;
  double elapsed_us = 0.0;
};

/// psi = scale * (v_1 (x) ... (x) v_r), each v_k of unit norm with its first
/// nonzero coordinate real and positive.
struct NormalizedFactors {
  Complex scale;
  std::vector<std::vector<Complex>> vectors;
  double residual = 0.0;  // max entrywise |rebuilt - input|
};

struct OracleCheck {
  std::vector<std::size_t> unfolding_ranks;
  bool factorized = false;
  bool agrees = true;
  double elapsed_us = 0.0;
};

struct AnalysisReport {
  std::vector<std::size_t> dims;
  std::size_t entry_count = 0;
  double norm = 0.0;
  AnalysisConfig config;
  std::vector<StageRecord> trace;
  Outcome outcome = Outcome::inconclusive;
  std::string final_stage;
  std::optional<Criterion> decided_by;
  std::optional<Witness> witness;
  std::string reason;
  std::optional<NormalizedFactors> factors;
  std::optional<OracleCheck> oracle;
};

inline NormalizedFactors normalize_factors(const LocalFactors& f, const CoeffTensor& t) {
  NormalizedFactors out{Complex{1.0, 0.0}, {}, 0.0};
  for (const auto& v : f.factors) {
    double norm2 = 0.0, vmax = 0.0;
    for (const Complex& x : v) {
      norm2 += std::norm(x);
      vmax = std::max(vmax, std::abs(x));
    }
    const double len = std::sqrt(norm2);
    std::size_t p = 0;
    while (std::abs(v[p]) <= 1e-12 * vmax) ++p;
    const Complex unit_phase = v[p] / std::abs(v[p]);
    const Complex divisor = len * unit_phase;
    std::vector<Complex> w;
    w.reserve(v.size());
    for (std::size_t q = 0; q < v.size(); ++q) w.push_back(q == p ? Complex{std::abs(v[p]) / len, 0.0} : v[q] / divisor);
    out.scale *= divisor;
    out.vectors.push_back(std::move(w));
  }
  LocalFactors scaled{out.vectors};
  for (Complex& x : scaled.factors[0]) x *= out.scale;
  out.residual = reconstruction_residual(scaled, t);
  return out;
}

namespace detail {

inline Verdict oracle_verdict(const CoeffTensor& t, const Tolerances& tol) {
  for (std::size_t k = 0; k < t.party_count(); ++k) {
    const auto pivots = pivot_profile(unfold(t, k), tol);
    if (pivots.size() > 1) {
      return Verdict::make_entangled(
          Criterion::rank_oracle,
          Witness{{k}, pivots[1], pivots[1] / pivots[0],
                  "unfolding of party " + std::to_string(k) + " has rank " + std::to_string(pivots.size())});
    }
  }
  return Verdict::make_factorized(Criterion::rank_oracle, oracle_factors(t));
}

template <typename F>
StageRecord timed(std::string name, F&& run) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v = run();
  const auto stop = std::chrono::steady_clock::now();
  return {std::move(name), std::move(v), std::chrono::duration<double, std::micro>(stop - start).count()};
}

}  // namespace detail

inline AnalysisReport analyze(const CoeffTensor& t, const AnalysisConfig& config = {}) {
  config.tol.validate();
  const Tolerances& tol = config.tol;
  AnalysisReport rep;
  rep.dims = t.dims();
  rep.entry_count = t.size();
  rep.norm = t.norm();
  rep.config = config;

  const bool bipartite = t.party_count() == 2;
  auto run = [&](std::string name, auto&& f) {
    rep.trace.push_back(detail::timed(std::move(name), f));
    return rep.trace.back().verdict.conclusive();
  };

  switch (config.method) {
    case Method::automatic:
      if (bipartite) {
        run("thm2", [&] { return check_sum_rule(t, tol); }) ||
            run("sign-flip", [&] { return sign_flip_recover(t, tol); }) ||
            run("thm4", [&] { return check_modulus_phase(t, tol); });
      } else {
        run("thm5", [&] { return check_multipartite(t, tol); }) ||
            run("oracle", [&] { return detail::oracle_verdict(t, tol); });
      }
      break;
    case Method::sum_rule:
      if (!bipartite) throw std::invalid_argument("method thm2 needs exactly two parties");
      run("thm2", [&] { return check_sum_rule(t, tol); });
      break;
    case Method::modulus_phase:
      if (!bipartite) throw std::invalid_argument("method thm4 needs exactly two parties");
      run("thm4", [&] { return check_modulus_phase(t, tol); });
      break;
    case Method::multipartite_sum:
      run("thm5", [&] { return check_multipartite(t, tol); });
      break;
    case Method::oracle:
      run("oracle", [&] { return detail::oracle_verdict(t, tol); });
      break;
  }

  const StageRecord& last = rep.trace.back();
  rep.outcome = last.verdict.outcome;
  rep.final_stage = last.stage;
  rep.decided_by = last.verdict.decided_by;
  rep.witness = last.verdict.witness;
  rep.reason = last.verdict.reason;
  if (last.verdict.factors) rep.factors = normalize_factors(*last.verdict.factors, t);

  if (config.oracle_check) {
    const auto start = std::chrono::steady_clock::now();
    OracleCheck oc;
    oc.unfolding_ranks = unfolding_ranks(t, tol);
    oc.factorized = true;
    for (std::size_t r : oc.unfolding_ranks) oc.factorized = oc.factorized && r == 1;
    oc.agrees = rep.outcome == Outcome::inconclusive || oc.factorized == (rep.outcome == Outcome::factorized);
    oc.elapsed_us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    rep.oracle = oc;
  }
  return rep;
}

}  // namespace entcheck
