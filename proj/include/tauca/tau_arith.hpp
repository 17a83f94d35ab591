#pragma once

// Digit arithmetic in the positional system with radix N = 1/tau.
//
// A number is a vector of p+1 integer digits a_0..a_p with fixed signs
// beta_i in {-1,+1}; its value is sum_i beta_i * a_i * tau^i. Digits are
// "normalized" when 0 <= a_i < N. All digit arithmetic is exact integer
// arithmetic; only value() leaves the integers.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tauca/error.hpp"

namespace tauca {

/// Floored division for a positive divisor: the remainder is always in [0, d).
constexpr std::int64_t floor_div(std::int64_t n, std::int64_t d) noexcept {
  std::int64_t q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

constexpr std::int64_t floor_mod(std::int64_t n, std::int64_t d) noexcept {
  return n - floor_div(n, d) * d;
}

/// Radix N = 1/tau and the highest retained power p.
class TauRadix {
 public:
  TauRadix(std::int64_t base, int precision) : base_(base), precision_(precision) {
    if (base < 2) throw RangeError("radix N must be >= 2, got " + std::to_string(base));
    if (precision < 1) throw RangeError("precision p must be >= 1, got " + std::to_string(precision));
  }

  std::int64_t base() const noexcept { return base_; }
  int precision() const noexcept { return precision_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(precision_) + 1; }
  double tau() const noexcept { return 1.0 / static_cast<double>(base_); }

  bool operator==(const TauRadix&) const = default;

 private:
  std::int64_t base_;
  int precision_;
};

class SignPattern {
 public:
  explicit SignPattern(std::vector<int> signs) : signs_(std::move(signs)) {
    if (signs_.empty()) throw RangeError("sign pattern must not be empty");
    for (int s : signs_) {
      if (s != 1 && s != -1) throw SignError("sign factors must be +1 or -1");
    }
  }

  /// Digits below `from` get +1; from there on the signs alternate +,-,+,...
  static SignPattern alternating(int precision, std::size_t from = 0) {
    std::vector<int> s(static_cast<std::size_t>(precision) + 1, 1);
    for (std::size_t i = from; i < s.size(); ++i) s[i] = ((i - from) % 2 == 0) ? 1 : -1;
    return SignPattern(std::move(s));
  }

  static SignPattern positive(int precision) {
    return SignPattern(std::vector<int>(static_cast<std::size_t>(precision) + 1, 1));
  }

  std::size_t size() const noexcept { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  std::span<const int> signs() const noexcept { return signs_; }

  bool operator==(const SignPattern&) const = default;

 private:
  std::vector<int> signs_;
};

namespace detail {

inline void check_shape(const TauRadix& radix, const SignPattern& signs, std::size_t n_digits) {
  if (signs.size() != radix.size()) {
    throw MixedRadixError("sign pattern has " + std::to_string(signs.size()) + " entries, radix expects " +
                          std::to_string(radix.size()));
  }
  if (n_digits != radix.size()) {
    throw MixedRadixError("digit vector has " + std::to_string(n_digits) + " entries, radix expects " +
                          std::to_string(radix.size()));
  }
}

inline double evaluate(const TauRadix& radix, const SignPattern& signs, std::span<const std::int64_t> digits) {
  // Horner from the least significant digit.
  long double v = 0.0L;
  const auto n = static_cast<long double>(radix.base());
  for (std::size_t i = digits.size(); i-- > 0;) {
    v = v / n + static_cast<long double>(signs[i]) * static_cast<long double>(digits[i]);
  }
  return static_cast<double>(v);
}

}  // namespace detail

/// Pre-carry digits: any signed integers.
class RawTauNumber {
 public:
  RawTauNumber(TauRadix radix, SignPattern signs, std::vector<std::int64_t> digits)
      : radix_(radix), signs_(std::move(signs)), digits_(std::move(digits)) {
    detail::check_shape(radix_, signs_, digits_.size());
  }

  const TauRadix& radix() const noexcept { return radix_; }
  const SignPattern& signs() const noexcept { return signs_; }
  std::span<const std::int64_t> digits() const noexcept { return digits_; }
  std::int64_t digit(std::size_t i) const { return digits_[i]; }

  bool operator==(const RawTauNumber&) const = default;

 private:
  TauRadix radix_;
  SignPattern signs_;
  std::vector<std::int64_t> digits_;
};

/// Normalized number: every digit lies in [0, N).
class TauNumber {
 public:
  TauNumber(TauRadix radix, SignPattern signs, std::vector<std::int64_t> digits)
      : radix_(radix), signs_(std::move(signs)), digits_(std::move(digits)) {
    detail::check_shape(radix_, signs_, digits_.size());
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      if (digits_[i] < 0 || digits_[i] >= radix_.base()) {
        throw RangeError("digit " + std::to_string(i) + " = " + std::to_string(digits_[i]) +
                         " is not normalized for N = " + std::to_string(radix_.base()));
      }
    }
  }

  static TauNumber zero(TauRadix radix, SignPattern signs) {
    return TauNumber(radix, std::move(signs), std::vector<std::int64_t>(radix.size(), 0));
  }

  const TauRadix& radix() const noexcept { return radix_; }
  const SignPattern& signs() const noexcept { return signs_; }
  std::span<const std::int64_t> digits() const noexcept { return digits_; }
  std::int64_t digit(std::size_t i) const { return digits_[i]; }

  RawTauNumber raw() const { return RawTauNumber(radix_, signs_, digits_); }

  bool operator==(const TauNumber&) const = default;

 private:
  TauRadix radix_;
  SignPattern signs_;
  std::vector<std::int64_t> digits_;
};

inline double value(const TauNumber& x) { return detail::evaluate(x.radix(), x.signs(), x.digits()); }
inline double value(const RawTauNumber& x) { return detail::evaluate(x.radix(), x.signs(), x.digits()); }

/// carries[i] is the amount moved out of digit i into digit i-1;
/// overflow0 == carries[0] leaves the representation.
struct CarryRecord {
  std::vector<std::int64_t> carries;
  std::int64_t overflow0 = 0;

  /// Carry received by digit 0 (zero when p == 0).
  std::int64_t into_digit0() const { return carries.size() > 1 ? carries[1] : 0; }

  bool operator==(const CarryRecord&) const = default;
};

struct Normalized {
  TauNumber number;
  CarryRecord record;
};

/// Carry procedure from digit p down to digit 0 with floored division.
///
/// s_i = raw_i + beta_i * beta_{i+1} * delta_{i+1}, a_i = s_i mod N,
/// delta_i = floor(s_i / N). The value is preserved exactly when
/// overflow0 == 0.
inline Normalized carry_normalize(const RawTauNumber& x) {
  const std::int64_t n = x.radix().base();
  const auto& beta = x.signs();
  const std::size_t len = x.radix().size();

  std::vector<std::int64_t> digits(len, 0);
  CarryRecord rec{std::vector<std::int64_t>(len, 0), 0};

  std::int64_t incoming = 0;  // beta_i * beta_{i+1} * delta_{i+1}
  for (std::size_t i = len; i-- > 0;) {
    const std::int64_t s = x.digit(i) + incoming;
    digits[i] = floor_mod(s, n);
    rec.carries[i] = floor_div(s, n);
    if (i > 0) incoming = beta[i - 1] * beta[i] * rec.carries[i];
  }
  rec.overflow0 = rec.carries[0];
  return {TauNumber(x.radix(), x.signs(), std::move(digits)), std::move(rec)};
}

/// Integer polynomial in tau truncated above tau^p: c_0 + c_1 tau + ... + c_p tau^p.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int precision) : coeffs_(static_cast<std::size_t>(precision) + 1, 0) {}

  TruncatedSeries(int precision, std::int64_t constant) : TruncatedSeries(precision) { coeffs_[0] = constant; }

  /// Signed coefficients beta_i * a_i of a normalized number.
  static TruncatedSeries of(const TauNumber& x) {
    TruncatedSeries s(x.radix().precision());
    for (std::size_t i = 0; i < s.coeffs_.size(); ++i) s.coeffs_[i] = x.signs()[i] * x.digit(i);
    return s;
  }

  int precision() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const std::int64_t> coefficients() const noexcept { return coeffs_; }
  std::int64_t operator[](std::size_t i) const { return coeffs_[i]; }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    check(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }

  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    check(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }

  TruncatedSeries& operator*=(std::int64_t k) {
    for (auto& c : coeffs_) c *= k;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, std::int64_t k) { return a *= k; }
  friend TruncatedSeries operator*(std::int64_t k, TruncatedSeries a) { return a *= k; }

  /// Cauchy product, dropping every power above p.
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check(b);
    TruncatedSeries r(a.precision());
    const std::size_t len = a.coeffs_.size();
    for (std::size_t i = 0; i < len; ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; i + j < len; ++j) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return r;
  }

  /// Multiply by tau^k, dropping powers above p.
  TruncatedSeries shifted(int k) const {
    TruncatedSeries r(precision());
    const auto shift = static_cast<std::size_t>(k);
    for (std::size_t i = 0; i + shift < coeffs_.size(); ++i) r.coeffs_[i + shift] = coeffs_[i];
    return r;
  }

  /// Raw digits under the given signs: raw_i = beta_i * c_i.
  RawTauNumber to_raw(const TauRadix& radix, const SignPattern& signs) const {
    if (static_cast<int>(coeffs_.size()) != radix.precision() + 1) {
      throw MixedRadixError("series precision does not match the radix");
    }
    std::vector<std::int64_t> digits(coeffs_.size());
    for (std::size_t i = 0; i < digits.size(); ++i) digits[i] = signs[i] * coeffs_[i];
    return RawTauNumber(radix, signs, std::move(digits));
  }

  bool operator==(const TruncatedSeries&) const = default;

 private:
  void check(const TruncatedSeries& o) const {
    if (o.coeffs_.size() != coeffs_.size()) throw MixedRadixError("series precisions differ");
  }

  std::vector<std::int64_t> coeffs_;
};

/// coefficient * tau^tau_power * product(factors); no factors means the constant 1.
struct Term {
  std::int64_t coefficient = 1;
  int tau_power = 0;
  std::vector<TauNumber> factors;
};

/// Expands a polynomial expression of tau-numbers into raw digits under
/// `signs`, truncated at tau^p after the full integer expansion.
inline RawTauNumber combine(std::span<const Term> terms, const TauRadix& radix, const SignPattern& signs) {
  TruncatedSeries total(radix.precision());
  for (const auto& term : terms) {
    if (term.tau_power < 0) throw RangeError("negative power of tau in a term");
    TruncatedSeries product(radix.precision(), 1);
    for (const auto& f : term.factors) {
      if (!(f.radix() == radix)) {
        throw MixedRadixError("operand radix (N=" + std::to_string(f.radix().base()) +
                              ", p=" + std::to_string(f.radix().precision()) + ") differs from (N=" +
                              std::to_string(radix.base()) + ", p=" + std::to_string(radix.precision()) + ")");
      }
      product = product * TruncatedSeries::of(f);
    }
    total += product.shifted(term.tau_power) * term.coefficient;
  }
  return total.to_raw(radix, signs);
}

/// Normalized representation of x with |value - x| <= N^-p / 2.
///
/// Digits are taken most significant first. Each digit is the unique one
/// that leaves a remainder inside the range the remaining signed digits can
/// still reach, so normalized inputs round-trip exactly.
inline TauNumber encode(double x, const TauRadix& radix, const SignPattern& signs) {
  detail::check_shape(radix, signs, radix.size());
  const std::int64_t n = radix.base();
  if (!std::isfinite(x) || std::fabs(x) >= static_cast<double>(n)) {
    throw RangeError("cannot encode " + std::to_string(x) + ": |x| must be < N = " + std::to_string(n));
  }

  const std::size_t len = radix.size();
  // unit[i] = N^(p-i), all values below are scaled by N^p.
  std::vector<std::int64_t> unit(len, 1);
  constexpr std::int64_t limit = std::int64_t{1} << 62;
  for (std::size_t i = len - 1; i-- > 0;) {
    if (unit[i + 1] > limit / n / n) {
      throw RangeError("N^(p+1) too large for exact encoding");
    }
    unit[i] = unit[i + 1] * n;
  }

  std::int64_t rem = std::llround(static_cast<long double>(x) * static_cast<long double>(unit[0]));
  std::vector<std::int64_t> digits(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    // Range [lo, hi] reachable by digits i+1..p.
    std::int64_t lo = 0, hi = 0;
    for (std::size_t j = i + 1; j < len; ++j) {
      if (signs[j] > 0)
        hi += (n - 1) * unit[j];
      else
        lo -= (n - 1) * unit[j];
    }
    const std::int64_t d = signs[i] > 0 ? -floor_div(hi - rem, unit[i]) : -floor_div(rem - lo, unit[i]);
    if (d < 0) {
      throw SignError("sign pattern forces a negative digit " + std::to_string(i) + " when encoding " +
                      std::to_string(x));
    }
    if (d >= n) {
      throw RangeError("digit " + std::to_string(i) + " overflows when encoding " + std::to_string(x));
    }
    digits[i] = d;
    rem -= signs[i] * d * unit[i];
  }
  return TauNumber(radix, signs, std::move(digits));
}

}  // namespace tauca
