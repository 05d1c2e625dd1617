#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "padic_walk/core/digits.hpp"
#include "padic_walk/core/prime.hpp"
#include "padic_walk/error.hpp"

namespace padic {

using Integer = boost::multiprecision::cpp_int;

/// Default cap on the number of digit positions an exact value may occupy.
inline constexpr int kDefaultPrecision = 64;

/// A p-adic absolute value: either 0 or p^e for an integer e.
class AbsValue {
 public:
  constexpr AbsValue() = default;
  static constexpr AbsValue zero() noexcept { return AbsValue{}; }
  static constexpr AbsValue power(int e) noexcept { return AbsValue{e}; }

  [[nodiscard]] constexpr bool is_zero() const noexcept { return !exp_.has_value(); }
  /// Exponent e of p^e; requires !is_zero().
  [[nodiscard]] constexpr int exponent() const { return exp_.value(); }

  [[nodiscard]] double to_double(std::uint32_t p) const noexcept {
    return exp_ ? std::pow(static_cast<double>(p), *exp_) : 0.0;
  }

  friend constexpr bool operator==(AbsValue a, AbsValue b) noexcept = default;
  friend constexpr std::strong_ordering operator<=>(AbsValue a, AbsValue b) noexcept {
    if (a.is_zero() || b.is_zero()) return !a.is_zero() <=> !b.is_zero();
    return *a.exp_ <=> *b.exp_;
  }

 private:
  constexpr explicit AbsValue(int e) noexcept : exp_(e) {}
  std::optional<int> exp_;
};

namespace detail {

inline Integer pow_int(std::uint32_t p, int e) {
  if (e < 0) throw std::invalid_argument("pow_int: negative exponent");
  return boost::multiprecision::pow(Integer(p), static_cast<unsigned>(e));
}

/// Number of base-p digits of |n|; 0 for n == 0.
inline int digit_count(Integer n, std::uint32_t p) {
  if (n < 0) n = -n;
  int count = 0;
  while (n != 0) {
    n /= p;
    ++count;
  }
  return count;
}

/// True when |n| has more than cap base-p digits, i.e. |n| >= p^cap.
inline bool exceeds_digits(const Integer& n, std::uint32_t p, int cap) {
  if (n == 0) return false;
  const double bits = static_cast<double>(boost::multiprecision::msb(abs(n))) + 1.0;
  const double per_digit = std::log2(static_cast<double>(p));
  if (bits <= cap * per_digit - 1e-9) return false;        // |n| < 2^bits <= p^cap
  if (bits - 1.0 >= cap * per_digit + 1e-9) return true;   // |n| >= 2^(bits-1) >= p^cap
  return abs(n) >= pow_int(p, cap);
}

/// Largest k with p^k | n, together with n / p^k. Requires n != 0.
inline int strip_prime(Integer& n, std::uint32_t p) {
  int k = 0;
  if (p == 2) {
    const auto lsb = boost::multiprecision::lsb(abs(n));
    n >>= lsb;
    return static_cast<int>(lsb);
  }
  for (;;) {
    Integer q;
    Integer r;
    boost::multiprecision::divide_qr(n, Integer(p), q, r);
    if (r != 0) return k;
    n = std::move(q);
    ++k;
  }
}

/// Nonnegative residue of n modulo m (m > 0).
inline Integer mod_floor(const Integer& n, const Integer& m) {
  Integer r = n % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace detail

/// An exact element of Q_p of the form mantissa * p^valuation.
///
/// Canonical form: the mantissa is 0 (the canonical zero, valuation 0) or not
/// divisible by p. Only addition, subtraction, negation and multiplication by
/// powers of p are provided; the walk never needs general field products.
class PadicValue {
 public:
  explicit PadicValue(std::uint32_t p = 2, int precision = kDefaultPrecision)
      : p_(p), precision_(precision) {
    check_prime(p);
  }

  PadicValue(std::uint32_t p, Integer mantissa, int valuation, int precision = kDefaultPrecision)
      : p_(p), precision_(precision), mantissa_(std::move(mantissa)), valuation_(valuation) {
    check_prime(p);
    normalize();
  }

  static PadicValue integer(std::uint32_t p, long long n, int precision = kDefaultPrecision) {
    return PadicValue(p, Integer(n), 0, precision);
  }

  /// Sum of a(k) p^k over the digit map.
  static PadicValue from_digits(const Digits& digits, int precision = kDefaultPrecision) {
    const std::uint32_t p = digits.prime();
    if (digits.empty()) return PadicValue(p, precision);
    Integer n = 0;
    const auto& dense = digits.dense();
    for (auto it = dense.rbegin(); it != dense.rend(); ++it) n = n * p + *it;
    return PadicValue(p, std::move(n), digits.low(), precision);
  }

  [[nodiscard]] std::uint32_t prime() const noexcept { return p_; }
  [[nodiscard]] int precision() const noexcept { return precision_; }
  [[nodiscard]] const Integer& mantissa() const noexcept { return mantissa_; }
  [[nodiscard]] int valuation() const noexcept { return valuation_; }
  [[nodiscard]] bool is_zero() const noexcept { return mantissa_ == 0; }
  [[nodiscard]] bool is_negative() const noexcept { return mantissa_ < 0; }

  /// |x|_p as an exact power of p.
  [[nodiscard]] AbsValue abs() const noexcept {
    return is_zero() ? AbsValue::zero() : AbsValue::power(-valuation_);
  }

  /// |x|_p as a real number.
  [[nodiscard]] double norm() const noexcept { return abs().to_double(p_); }

  /// x * p^k.
  [[nodiscard]] PadicValue scaled(int k) const {
    PadicValue out = *this;
    if (!out.is_zero()) out.valuation_ += k;
    return out;
  }

  PadicValue operator-() const {
    PadicValue out = *this;
    out.mantissa_ = -out.mantissa_;
    return out;
  }

  friend PadicValue operator+(const PadicValue& x, const PadicValue& y) {
    check_same_prime(x, y);
    const int precision = std::max(x.precision_, y.precision_);
    if (x.is_zero()) return y.with_precision(precision);
    if (y.is_zero()) return x.with_precision(precision);
    const int v = std::min(x.valuation_, y.valuation_);
    Integer sum = x.mantissa_ * detail::pow_int(x.p_, x.valuation_ - v) +
                  y.mantissa_ * detail::pow_int(x.p_, y.valuation_ - v);
    return PadicValue(x.p_, std::move(sum), v, precision);
  }

  friend PadicValue operator-(const PadicValue& x, const PadicValue& y) { return x + (-y); }

  PadicValue& operator+=(const PadicValue& y) { return *this = *this + y; }
  PadicValue& operator-=(const PadicValue& y) { return *this = *this - y; }

  friend bool operator==(const PadicValue& x, const PadicValue& y) noexcept {
    return x.p_ == y.p_ && x.valuation_ == y.valuation_ && x.mantissa_ == y.mantissa_;
  }

  /// Base-p digit expansion of a nonnegative value.
  [[nodiscard]] Digits digits() const {
    if (is_negative()) {
      throw std::domain_error("digits: negative values have no finite digit expansion");
    }
    return integer_digits(mantissa_, p_, valuation_);
  }

  /// Digits of the canonical nonnegative representative of x + p^m Z_p,
  /// restricted to indices below m. Defined for every sign.
  [[nodiscard]] Digits residue_digits(int m) const {
    if (is_zero() || valuation_ >= m) return Digits(p_);
    const Integer modulus = detail::pow_int(p_, m - valuation_);
    return integer_digits(detail::mod_floor(mantissa_, modulus), p_, valuation_);
  }

  /// "mantissa*p^v", or "0" for the canonical zero.
  [[nodiscard]] std::string to_string() const {
    if (is_zero()) return "0";
    return mantissa_.str() + "*" + std::to_string(p_) + "^" + std::to_string(valuation_);
  }

  /// Inverse of to_string(). Non-canonical input such as "4*2^0" is accepted
  /// and normalized.
  static PadicValue parse(std::string_view text, std::uint32_t p,
                          int precision = kDefaultPrecision) {
    const auto star = text.find('*');
    if (star == std::string_view::npos) {
      return PadicValue(p, parse_integer(text), 0, precision);
    }
    const auto caret = text.find('^', star);
    if (caret == std::string_view::npos) {
      throw std::invalid_argument("PadicValue::parse: expected mantissa*p^v, got '" +
                                  std::string(text) + "'");
    }
    const Integer base = parse_integer(text.substr(star + 1, caret - star - 1));
    if (base != p) {
      throw std::invalid_argument("PadicValue::parse: prime mismatch in '" + std::string(text) + "'");
    }
    const Integer exponent = parse_integer(text.substr(caret + 1));
    if (exponent > std::numeric_limits<int>::max() || exponent < std::numeric_limits<int>::min()) {
      throw std::invalid_argument("PadicValue::parse: exponent out of range");
    }
    return PadicValue(p, parse_integer(text.substr(0, star)), static_cast<int>(exponent), precision);
  }

 private:
  static void check_prime(std::uint32_t p) {
    if (!is_prime(p)) throw std::invalid_argument("PadicValue: p must be prime");
  }

  static void check_same_prime(const PadicValue& x, const PadicValue& y) {
    if (x.p_ != y.p_) throw std::invalid_argument("PadicValue: mixing different primes");
  }

  static Integer parse_integer(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("PadicValue::parse: empty integer");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("PadicValue::parse: bad integer");
    for (std::size_t j = i; j < s.size(); ++j) {
      if (s[j] < '0' || s[j] > '9') {
        throw std::invalid_argument("PadicValue::parse: bad integer '" + std::string(s) + "'");
      }
    }
    Integer n(std::string(s.substr(i)));
    return s[0] == '-' ? Integer(-n) : n;
  }

  static Digits integer_digits(Integer n, std::uint32_t p, int low) {
    std::vector<std::uint32_t> values;
    while (n != 0) {
      Integer q;
      Integer r;
      boost::multiprecision::divide_qr(n, Integer(p), q, r);
      values.push_back(static_cast<std::uint32_t>(r));
      n = std::move(q);
    }
    return Digits(p, low, std::move(values));
  }

  [[nodiscard]] PadicValue with_precision(int precision) const {
    PadicValue out = *this;
    out.precision_ = precision;
    out.check_precision();
    return out;
  }

  void normalize() {
    if (mantissa_ == 0) {
      valuation_ = 0;
      return;
    }
    valuation_ += detail::strip_prime(mantissa_, p_);
    check_precision();
  }

  void check_precision() const {
    if (detail::exceeds_digits(mantissa_, p_, precision_)) {
      throw precision_error("PadicValue: mantissa needs more than " + std::to_string(precision_) +
                            " digit positions");
    }
  }

  std::uint32_t p_ = 2;
  int precision_ = kDefaultPrecision;
  Integer mantissa_ = 0;
  int valuation_ = 0;
};

/// An exact rational numerator / p^denominator_exponent.
struct PowerFraction {
  Integer numerator = 0;
  int denominator_exponent = 0;

  [[nodiscard]] double to_double(std::uint32_t p) const {
    if (numerator == 0) return 0.0;
    return static_cast<double>(numerator) / std::pow(static_cast<double>(p), denominator_exponent);
  }
};

/// |x|_p as a real number; 0 for the canonical zero.
inline double padic_abs(const PadicValue& x) noexcept { return x.norm(); }

/// The fractional part {x} = sum_{k<0} a(k) p^k, taken from the nonnegative
/// representative of x modulo Z_p (which is all the character depends on).
inline PowerFraction frac_part(const PadicValue& x) {
  if (x.is_zero() || x.valuation() >= 0) return {};
  const Integer modulus = detail::pow_int(x.prime(), -x.valuation());
  return {detail::mod_floor(x.mantissa(), modulus), -x.valuation()};
}

/// The additive character chi(x) = exp(2 pi i {x}).
inline std::complex<double> character(const PadicValue& x) {
  const double f = frac_part(x).to_double(x.prime());
  const double angle = 2.0 * std::numbers::pi * f;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace padic
