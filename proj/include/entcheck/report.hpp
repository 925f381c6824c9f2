#pragma once

// Report rendering. The document is a YAML-compatible key/value listing with
// fixed key order and shortest round-trip number formatting, so identical
// inputs give identical bytes apart from the *_us timing fields. The optional
// human table is appended as '#' comment lines, which keeps stdout parseable.

#include <cstdio>
#include <string>

#include "entcheck/io.hpp"
#include "entcheck/pipeline.hpp"

namespace entcheck {

namespace detail {

inline std::string num(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

inline std::string cnum(Complex c) { return "[" + num(c.real()) + ", " + num(c.imag()) + "]"; }

inline std::string index_list(const Index& idx, std::size_t base = 0) {
  std::string s = "[";
  for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? ", " : "") + std::to_string(idx[k] + base);
  return s + "]";
}

inline std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

inline void emit_witness(std::string& out, const Witness& w, const std::string& indent, bool one_based) {
  out += indent + "witness:\n";
  out += indent + "  index: " + index_list(w.index) + "\n";
  if (one_based) out += indent + "  index_one_based: " + index_list(w.index, 1) + "\n";
  out += indent + "  residual: " + num(w.residual) + "\n";
  out += indent + "  scaled_residual: " + num(w.scaled_residual) + "\n";
  out += indent + "  note: " + quoted(w.note) + "\n";
}

}  // namespace detail

inline std::string render_report(const AnalysisReport& rep) {
  using detail::num;
  std::string out = "report_version: 1\n";
  out += "input:\n";
  out += "  dims: " + detail::index_list(rep.dims) + "\n";
  out += "  entries: " + std::to_string(rep.entry_count) + "\n";
  out += "  norm: " + num(rep.norm) + "\n";
  out += "method: " + std::string(to_string(rep.config.method)) + "\n";
  out += "tolerances:\n";
  out += "  eps_mag: " + num(rep.config.tol.eps_mag) + "\n";
  out += "  eps_ang: " + num(rep.config.tol.eps_ang) + "\n";
  out += "  eps_rank: " + num(rep.config.tol.eps_rank) + "\n";
  out += "trace:\n";
  for (const StageRecord& s : rep.trace) {
    const bool index_is_entry = s.verdict.decided_by != Criterion::rank_oracle;
    out += "  - stage: " + s.stage + "\n";
    out += "    criterion: " + std::string(to_string(s.verdict.decided_by)) + "\n";
    out += "    outcome: " + std::string(to_string(s.verdict.outcome)) + "\n";
    if (s.verdict.flip) {
      out += "    flip: {axis: ";
      out += s.verdict.flip->axis == BasisFlip::Axis::row ? "row" : "column";
      out += ", index: " + std::to_string(s.verdict.flip->index) + "}\n";
    }
    if (s.verdict.witness) detail::emit_witness(out, *s.verdict.witness, "    ", index_is_entry);
    if (s.verdict.phase && s.verdict.outcome == Outcome::factorized) {
      out += "    phase_constant: " + num(s.verdict.phase->c) + "\n";
    }
    if (!s.verdict.reason.empty()) out += "    reason: " + detail::quoted(s.verdict.reason) + "\n";
    out += "    elapsed_us: " + num(s.elapsed_us) + "\n";
  }
  out += "verdict:\n";
  out += "  outcome: " + std::string(to_string(rep.outcome)) + "\n";
  out += "  stage: " + rep.final_stage + "\n";
  if (rep.decided_by) out += "  decided_by: " + std::string(to_string(*rep.decided_by)) + "\n";
  if (rep.witness) detail::emit_witness(out, *rep.witness, "  ", rep.decided_by != Criterion::rank_oracle);
  if (!rep.reason.empty()) out += "  reason: " + detail::quoted(rep.reason) + "\n";
  if (rep.factors) {
    out += "factors:\n";
    out += "  scale: " + detail::cnum(rep.factors->scale) + "\n";
    out += "  residual: " + num(rep.factors->residual) + "\n";
    out += "  vectors:\n";
    for (const auto& v : rep.factors->vectors) {
      out += "    - [";
      for (std::size_t q = 0; q < v.size(); ++q) out += (q ? ", " : "") + detail::cnum(v[q]);
      out += "]\n";
    }
  }
  out += "oracle:\n";
  if (rep.oracle) {
    out += "  checked: true\n";
    out += "  unfolding_ranks: " + detail::index_list(rep.oracle->unfolding_ranks) + "\n";
    out += "  factorized: " + std::string(rep.oracle->factorized ? "true" : "false") + "\n";
    out += "  agrees: " + std::string(rep.oracle->agrees ? "true" : "false") + "\n";
    out += "  elapsed_us: " + num(rep.oracle->elapsed_us) + "\n";
  } else {
    out += "  checked: false\n";
  }
  return out;
}

inline std::string render_table(const AnalysisReport& rep) {
  std::string out = "#\n";
  char line[160];
  std::snprintf(line, sizeof line, "# %-10s %-15s %-13s %-14s %s\n", "stage", "criterion", "outcome", "residual",
                "detail");
  out += line;
  for (const StageRecord& s : rep.trace) {
    std::string residual = "-", where;
    if (s.verdict.witness) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", s.verdict.witness->residual);
      residual = buf;
      where = (s.verdict.decided_by == Criterion::rank_oracle ? "party " : "at ") +
              format_index(s.verdict.witness->index, s.verdict.decided_by == Criterion::rank_oracle ? 0 : 1);
    } else if (!s.verdict.reason.empty()) {
      where = s.verdict.reason;
    }
    std::snprintf(line, sizeof line, "# %-10s %-15s %-13s %-14s %s\n", s.stage.c_str(),
                  std::string(to_string(s.verdict.decided_by)).c_str(),
                  std::string(to_string(s.verdict.outcome)).c_str(), residual.c_str(), where.c_str());
    out += line;
  }
  out += "# => " + std::string(to_string(rep.outcome));
  if (rep.oracle) out += rep.oracle->agrees ? " (oracle agrees)" : " (ORACLE DISAGREES)";
  out += "\n";
  if (rep.factors) {
    for (std::size_t k = 0; k < rep.factors->vectors.size(); ++k) {
      out += "# party " + std::to_string(k) + ":";
      for (const Complex& c : rep.factors->vectors[k]) {
        std::snprintf(line, sizeof line, " %+.6f%+.6fi", c.real(), c.imag());
        out += line;
      }
      out += "\n";
    }
    std::snprintf(line, sizeof line, "# scale: %+.6f%+.6fi\n", rep.factors->scale.real(), rep.factors->scale.imag());
    out += line;
  }
  return out;
}

}  // namespace entcheck
