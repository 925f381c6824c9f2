#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace entcheck {

using Complex = std::complex<double>;
using Index = std::vector<std::size_t>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when an operation is invoked outside its documented precondition
/// (as opposed to malformed input, which raises std::invalid_argument).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/**
 * Tolerances for every approximate comparison in the library.
 *
 * eps_mag is relative (dimensionless), eps_ang is absolute in radians and
 * eps_rank is a cutoff relative to the largest magnitude / pivot / singular
 * value of the object under test.
 */
struct Tolerances {
  double eps_mag = 1e-9;
  double eps_ang = 1e-9;
  double eps_rank = 1e-10;

  void validate() const {
    if (!(eps_mag > 0.0) || !(eps_ang > 0.0) || !(eps_rank > 0.0)) {
      throw std::invalid_argument("tolerances must be strictly positive");
    }
    if (!(eps_ang < std::numbers::pi)) {
      throw std::invalid_argument("angular tolerance must be below pi");
    }
  }
};

/// |x - y| <= eps_mag * max(1, |x|, |y|).
inline bool approx_eq(Complex x, Complex y, const Tolerances& tol) {
  const double bound = std::max({1.0, std::abs(x), std::abs(y)});
  return std::abs(x - y) <= tol.eps_mag * bound;
}

/// Argument in [0, 2pi). Undefined for zero; callers branch on magnitude first.
inline double phase_angle(Complex c) {
  if (c == Complex{0.0, 0.0}) {
    throw std::domain_error("argument of zero is undefined");
  }
  double a = std::atan2(c.imag(), c.real());
  if (a < 0.0) a += kTwoPi;
  // atan2 of (-0, negative) style inputs can round up to exactly 2pi.
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

/// Reduces any finite angle into [0, 2pi).
inline double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/**
 * Dense coefficient tensor c_{j_1...j_r} of a vector in H_1 (x) ... (x) H_r,
 * stored row-major over the multi-index. Immutable after construction.
 *
 * Parties and indices are zero-based throughout the API.
 */
class CoeffTensor {
 public:
  CoeffTensor(std::vector<std::size_t> dims, std::vector<Complex> entries)
      : dims_(std::move(dims)), entries_(std::move(entries)) {
    if (dims_.size() < 2) {
      throw std::invalid_argument("a coefficient tensor needs at least two parties");
    }
    std::size_t count = 1;
    for (std::size_t d : dims_) {
      if (d == 0) throw std::invalid_argument("every party dimension must be positive");
      count *= d;
    }
    if (count != entries_.size()) {
      throw std::invalid_argument("entry count " + std::to_string(entries_.size()) +
                                  " does not match product of dims " + std::to_string(count));
    }
    bool nonzero = false;
    for (const Complex& c : entries_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw std::invalid_argument("coefficients must be finite");
      }
      nonzero = nonzero || c != Complex{0.0, 0.0};
    }
    if (!nonzero) throw std::invalid_argument("the zero tensor is not a valid state");
    strides_.assign(dims_.size(), 1);
    for (std::size_t k = dims_.size() - 1; k > 0; --k) strides_[k - 1] = strides_[k] * dims_[k];
  }

  /// Bipartite convenience: rows are party 0, columns party 1.
  static CoeffTensor matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries) {
    return CoeffTensor({rows, cols}, std::move(entries));
  }

  [[nodiscard]] std::size_t party_count() const { return dims_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& dims() const { return dims_; }
  [[nodiscard]] std::size_t dim(std::size_t party) const { return dims_.at(party); }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] std::span<const Complex> entries() const { return entries_; }

  [[nodiscard]] std::size_t rows() const { return dims_[0]; }
  [[nodiscard]] std::size_t cols() const { return dims_[1]; }

  [[nodiscard]] const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * strides_[0] + j * strides_[1]];
  }
  [[nodiscard]] const Complex& operator[](std::size_t flat) const { return entries_[flat]; }

  [[nodiscard]] const Complex& at(std::span<const std::size_t> index) const {
    return entries_[flat_index(index)];
  }

  [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> index) const {
    if (index.size() != dims_.size()) throw std::out_of_range("index arity mismatch");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      if (index[k] >= dims_[k]) throw std::out_of_range("index out of range");
      flat += index[k] * strides_[k];
    }
    return flat;
  }

  [[nodiscard]] Index multi_index(std::size_t flat) const {
    Index idx(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      idx[k] = flat / strides_[k];
      flat %= strides_[k];
    }
    return idx;
  }

  [[nodiscard]] std::size_t index_of(std::size_t flat, std::size_t party) const {
    return (flat / strides_[party]) % dims_[party];
  }

  [[nodiscard]] double max_magnitude() const {
    double m = 0.0;
    for (const Complex& c : entries_) m = std::max(m, std::abs(c));
    return m;
  }

  [[nodiscard]] double norm() const {
    double s = 0.0;
    for (const Complex& c : entries_) s += std::norm(c);
    return std::sqrt(s);
  }

  /// Entrywise transform; the result must still be a valid tensor.
  [[nodiscard]] CoeffTensor map(const std::function<Complex(std::size_t, Complex)>& f) const {
    std::vector<Complex> out(entries_.size());
    for (std::size_t n = 0; n < entries_.size(); ++n) out[n] = f(n, entries_[n]);
    return CoeffTensor(dims_, std::move(out));
  }

  [[nodiscard]] CoeffTensor transposed() const {
    if (party_count() != 2) throw std::invalid_argument("transpose needs a bipartite tensor");
    std::vector<Complex> out(entries_.size());
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols(); ++j) out[j * rows() + i] = (*this)(i, j);
    return CoeffTensor({cols(), rows()}, std::move(out));
  }

  friend bool operator==(const CoeffTensor&, const CoeffTensor&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<Complex> entries_;
  std::vector<std::size_t> strides_;
};

inline Complex total_sum(const CoeffTensor& t) {
  Complex s{0.0, 0.0};
  for (const Complex& c : t.entries()) s += c;
  return s;
}

/// Sum of all entries whose index along `party` equals `index`.
inline Complex partial_sum(const CoeffTensor& t, std::size_t party, std::size_t index) {
  if (party >= t.party_count()) throw std::out_of_range("party out of range");
  if (index >= t.dim(party)) throw std::out_of_range("index out of range for party");
  Complex s{0.0, 0.0};
  for (std::size_t n = 0; n < t.size(); ++n) {
    if (t.index_of(n, party) == index) s += t[n];
  }
  return s;
}

/// All partial sums of one party, accumulated in row-major entry order.
inline std::vector<Complex> partial_sums(const CoeffTensor& t, std::size_t party) {
  if (party >= t.party_count()) throw std::out_of_range("party out of range");
  std::vector<Complex> out(t.dim(party), Complex{0.0, 0.0});
  for (std::size_t n = 0; n < t.size(); ++n) out[t.index_of(n, party)] += t[n];
  return out;
}

inline std::string format_index(std::span<const std::size_t> idx, std::size_t base = 0) {
  std::string s = "(";
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(idx[k] + base);
  }
  return s + ")";
}

}  // namespace entcheck
