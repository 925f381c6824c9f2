#pragma once

// Text formats for coefficient tensors. Both are line oriented, UTF-8, with
// '#' starting a comment that runs to end of line.
//
// Dense:
//   dims 3 3
//   4 0   0 -3   5 0        <- one fiber of the last party per line (re im pairs)
//   -8 0  0 6   -10 0
//   12 0  0 -9   15 0
// Entries are read in row-major order; line breaks are free-form, but the
// writer emits one last-axis fiber per line and a blank line between blocks.
//
// Sparse:
//   dims 2 2 2
//   base 1                   <- optional, 0 or 1; default 1
//   1 1 1   1 0              <- r indices, then re im
//   2 2 2   1 0
// Unlisted entries are zero. Duplicate indices are rejected.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "entcheck/tensor.hpp"

namespace entcheck {

enum class FileFormat { dense, sparse };

inline FileFormat parse_format(std::string_view s) {
  if (s == "dense") return FileFormat::dense;
  if (s == "sparse") return FileFormat::sparse;
  throw std::invalid_argument("unknown format '" + std::string(s) + "' (expected dense or sparse)");
}

/// Malformed input; carries a one-based line and field position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t field, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", field " + std::to_string(field) + ": " + what),
        line_(line),
        field_(field) {}
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t field() const { return field_; }

 private:
  std::size_t line_;
  std::size_t field_;
};

namespace detail {

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t field;
};

struct Line {
  std::vector<Token> tokens;
  std::size_t number;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{{}, number};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r' || raw[i] == ',')) ++i;
      const std::size_t start = i;
      while (i < raw.size() && !(raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r' || raw[i] == ',')) ++i;
      if (i > start) line.tokens.push_back({raw.substr(start, i - start), number, line.tokens.size() + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

inline double to_double(const Token& t) {
  double v = 0.0;
  std::string_view s = t.text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(t.line, t.field, "expected a real number, got '" + std::string(t.text) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(t.line, t.field, "non-finite value");
  return v;
}

inline std::size_t to_size(const Token& t) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
    throw ParseError(t.line, t.field, "expected a non-negative integer, got '" + std::string(t.text) + "'");
  }
  return v;
}

inline std::vector<std::size_t> read_dims(const Line& line) {
  if (line.tokens.empty() || line.tokens[0].text != "dims") {
    throw ParseError(line.number, 1, "expected a 'dims' header");
  }
  if (line.tokens.size() < 3) throw ParseError(line.number, 1, "'dims' needs at least two dimensions");
  std::vector<std::size_t> dims;
  for (std::size_t k = 1; k < line.tokens.size(); ++k) {
    const std::size_t d = to_size(line.tokens[k]);
    if (d == 0) throw ParseError(line.number, k + 1, "dimensions must be positive");
    dims.push_back(d);
  }
  return dims;
}

inline void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace detail

inline CoeffTensor parse_dense(std::string_view text) {
  const auto lines = detail::tokenize(text);
  if (lines.empty()) throw ParseError(1, 1, "empty input");
  const auto dims = detail::read_dims(lines[0]);
  std::size_t count = 1;
  for (std::size_t d : dims) count *= d;
  std::vector<double> values;
  const detail::Token* last = &lines[0].tokens.back();
  for (std::size_t l = 1; l < lines.size(); ++l) {
    for (const auto& tok : lines[l].tokens) {
      if (values.size() == 2 * count) throw ParseError(tok.line, tok.field, "more entries than dims allow");
      values.push_back(detail::to_double(tok));
      last = &tok;
    }
  }
  if (values.size() != 2 * count) {
    throw ParseError(last->line, last->field,
                     "expected " + std::to_string(count) + " complex entries (" + std::to_string(2 * count) +
                         " numbers), got " + std::to_string(values.size()) + " numbers");
  }
  std::vector<Complex> entries(count);
  for (std::size_t n = 0; n < count; ++n) entries[n] = {values[2 * n], values[2 * n + 1]};
  return CoeffTensor(dims, std::move(entries));
}

inline CoeffTensor parse_sparse(std::string_view text) {
  const auto lines = detail::tokenize(text);
  if (lines.empty()) throw ParseError(1, 1, "empty input");
  const auto dims = detail::read_dims(lines[0]);
  const std::size_t r = dims.size();
  std::size_t count = 1;
  for (std::size_t d : dims) count *= d;
  std::size_t base = 1;
  std::size_t first = 1;
  if (lines.size() > 1 && lines[1].tokens[0].text == "base") {
    if (lines[1].tokens.size() != 2) throw ParseError(lines[1].number, 1, "'base' takes one value");
    base = detail::to_size(lines[1].tokens[1]);
    if (base > 1) throw ParseError(lines[1].number, 2, "base must be 0 or 1");
    first = 2;
  }
  std::vector<std::size_t> strides(r, 1);
  for (std::size_t k = r - 1; k > 0; --k) strides[k - 1] = strides[k] * dims[k];
  std::vector<Complex> entries(count, Complex{0.0, 0.0});
  std::map<std::size_t, std::size_t> seen;  // flat index -> line
  for (std::size_t l = first; l < lines.size(); ++l) {
    const auto& line = lines[l];
    if (line.tokens.size() != r + 2) {
      throw ParseError(line.number, std::min(line.tokens.size(), r + 2) + 1,
                       "expected " + std::to_string(r) + " indices followed by re im");
    }
    std::size_t flat = 0;
    Index idx(r);
    for (std::size_t k = 0; k < r; ++k) {
      const std::size_t raw = detail::to_size(line.tokens[k]);
      if (raw < base || raw - base >= dims[k]) {
        throw ParseError(line.number, k + 1, "index " + std::to_string(raw) + " out of range for party " +
                                                 std::to_string(k) + " (dimension " + std::to_string(dims[k]) + ")");
      }
      idx[k] = raw - base;
      flat += idx[k] * strides[k];
    }
    if (auto it = seen.find(flat); it != seen.end()) {
      throw ParseError(line.number, 1, "duplicate index " + format_index(idx, base) + " (first given on line " +
                                           std::to_string(it->second) + ")");
    }
    seen.emplace(flat, line.number);
    entries[flat] = {detail::to_double(line.tokens[r]), detail::to_double(line.tokens[r + 1])};
  }
  return CoeffTensor(dims, std::move(entries));
}

inline CoeffTensor parse_state(std::string_view text, FileFormat format) {
  return format == FileFormat::dense ? parse_dense(text) : parse_sparse(text);
}

inline CoeffTensor load_state(const std::string& path, FileFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_state(text, format);
}

/// Shortest round-trip representation of every double.
inline std::string write_dense(const CoeffTensor& t) {
  std::string out = "dims";
  for (std::size_t d : t.dims()) out += " " + std::to_string(d);
  out += "\n";
  const std::size_t fiber = t.dims().back();
  const std::size_t block = t.size() / t.dim(0);
  for (std::size_t n = 0; n < t.size(); ++n) {
    if (n % fiber != 0) out += "   ";
    detail::append_double(out, t[n].real());
    out += " ";
    detail::append_double(out, t[n].imag());
    if ((n + 1) % fiber == 0) {
      out += "\n";
      if (t.party_count() > 2 && (n + 1) % block == 0 && n + 1 < t.size()) out += "\n";
    }
  }
  return out;
}

/// Entries equal to +0 are omitted. Indices are written one-based unless base == 0.
inline std::string write_sparse(const CoeffTensor& t, std::size_t base = 1) {
  std::string out = "dims";
  for (std::size_t d : t.dims()) out += " " + std::to_string(d);
  out += "\nbase " + std::to_string(base) + "\n";
  for (std::size_t n = 0; n < t.size(); ++n) {
    const Complex c = t[n];
    if (c == Complex{0.0, 0.0} && !std::signbit(c.real()) && !std::signbit(c.imag())) continue;
    for (std::size_t k : t.multi_index(n)) out += std::to_string(k + base) + " ";
    out += "  ";
    detail::append_double(out, t[n].real());
    out += " ";
    detail::append_double(out, t[n].imag());
    out += "\n";
  }
  return out;
}

inline std::string write_state(const CoeffTensor& t, FileFormat format) {
  return format == FileFormat::dense ? write_dense(t) : write_sparse(t);
}

}  // namespace entcheck
