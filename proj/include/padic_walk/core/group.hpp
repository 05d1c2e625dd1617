#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic_walk/core/digits.hpp"
#include "padic_walk/core/padic_value.hpp"

namespace padic {

/// A coset x + p^m Z_p in G_m = Q_p / p^m Z_p.
///
/// Stored as its digit vector at indices below the level m, which is the
/// unique normal form. Elements of different levels never mix: arithmetic
/// across levels throws std::invalid_argument.
class GroupElement {
 public:
  GroupElement(std::uint32_t p, int level, int precision = kDefaultPrecision)
      : p_(p), level_(level), precision_(precision) {
    if (!is_prime(p)) throw std::invalid_argument("GroupElement: p must be prime");
  }

  GroupElement(const Digits& digits, int level, int precision = kDefaultPrecision)
      : GroupElement(digits.prime(), level, precision) {
    if (digits.empty()) return;
    if (digits.high() >= level) {
      throw std::invalid_argument("GroupElement: digit index " + std::to_string(digits.high()) +
                                  " is not below level " + std::to_string(level));
    }
    low_ = digits.low();
    digits_ = digits.dense();
    check_precision();
  }

  static GroupElement identity(std::uint32_t p, int level) { return GroupElement(p, level); }

  [[nodiscard]] std::uint32_t prime() const noexcept { return p_; }
  [[nodiscard]] int level() const noexcept { return level_; }
  [[nodiscard]] int precision() const noexcept { return precision_; }
  [[nodiscard]] bool is_identity() const noexcept { return digits_.empty(); }
  /// Least supported index; meaningless for the identity.
  [[nodiscard]] int low() const noexcept { return low_; }

  /// |g|_m = p^(-low), or 0 for the identity.
  [[nodiscard]] AbsValue abs() const noexcept {
    return is_identity() ? AbsValue::zero() : AbsValue::power(-low_);
  }

  [[nodiscard]] std::uint32_t digit(int k) const noexcept {
    if (digits_.empty() || k < low_ || k >= low_ + static_cast<int>(digits_.size())) return 0;
    return digits_[static_cast<std::size_t>(k - low_)];
  }

  [[nodiscard]] Digits digits() const { return Digits(p_, low_, digits_); }

  /// Same digit vector, indices shifted by `shift`, placed at `level`.
  [[nodiscard]] GroupElement shifted(int shift, int level) const {
    GroupElement out(p_, level, precision_);
    if (is_identity()) return out;
    if (low_ + static_cast<int>(digits_.size()) - 1 + shift >= level) {
      throw std::invalid_argument("GroupElement::shifted: digits reach the target level");
    }
    out.low_ = low_ + shift;
    out.digits_ = digits_;
    return out;
  }

  friend GroupElement operator+(const GroupElement& a, const GroupElement& b) {
    check_compatible(a, b);
    if (a.is_identity()) return b;
    if (b.is_identity()) return a;
    const int lo = std::min(a.low_, b.low_);
    const int top = std::min(std::max(a.high(), b.high()) + 1, a.level_ - 1);
    GroupElement out(a.p_, a.level_, std::max(a.precision_, b.precision_));
    out.low_ = lo;
    out.digits_.assign(static_cast<std::size_t>(top - lo + 1), 0);
    std::uint64_t carry = 0;
    for (int k = lo; k <= top; ++k) {
      const std::uint64_t s = carry + a.digit(k) + b.digit(k);
      carry = s >= a.p_ ? 1 : 0;
      out.digits_[static_cast<std::size_t>(k - lo)] = static_cast<std::uint32_t>(s - carry * a.p_);
    }
    out.trim();
    out.check_precision();
    return out;
  }

  GroupElement operator-() const {
    GroupElement out(p_, level_, precision_);
    if (is_identity()) return out;
    // -x has digit p - a at the lowest index and p - 1 - a above it, up to m - 1.
    out.low_ = low_;
    out.digits_.assign(static_cast<std::size_t>(level_ - low_), 0);
    out.digits_[0] = p_ - digits_[0];
    for (int k = low_ + 1; k < level_; ++k) {
      out.digits_[static_cast<std::size_t>(k - low_)] = p_ - 1 - digit(k);
    }
    out.trim();
    out.check_precision();
    return out;
  }

  friend GroupElement operator-(const GroupElement& a, const GroupElement& b) { return a + (-b); }

  GroupElement& operator+=(const GroupElement& b) { return *this = *this + b; }

  friend bool operator==(const GroupElement& a, const GroupElement& b) noexcept {
    return a.p_ == b.p_ && a.level_ == b.level_ && a.digits_.size() == b.digits_.size() &&
           (a.digits_.empty() || (a.low_ == b.low_ && a.digits_ == b.digits_));
  }

 private:
  [[nodiscard]] int high() const noexcept { return low_ + static_cast<int>(digits_.size()) - 1; }

  static void check_compatible(const GroupElement& a, const GroupElement& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("GroupElement: mixing different primes");
    if (a.level_ != b.level_) {
      throw std::invalid_argument("GroupElement: level mismatch (" + std::to_string(a.level_) +
                                  " vs " + std::to_string(b.level_) + ")");
    }
  }

  void trim() {
    std::size_t first = 0;
    while (first < digits_.size() && digits_[first] == 0) ++first;
    std::size_t last = digits_.size();
    while (last > first && digits_[last - 1] == 0) --last;
    if (first == last) {
      digits_.clear();
      low_ = 0;
      return;
    }
    if (first > 0 || last < digits_.size()) {
      digits_.erase(digits_.begin() + static_cast<std::ptrdiff_t>(last), digits_.end());
      digits_.erase(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(first));
      low_ += static_cast<int>(first);
    }
  }

  void check_precision() const {
    if (static_cast<int>(digits_.size()) > precision_) {
      throw precision_error("GroupElement: digit support exceeds " + std::to_string(precision_) +
                            " positions");
    }
  }

  std::uint32_t p_ = 2;
  int level_ = 0;
  int precision_ = kDefaultPrecision;
  int low_ = 0;
  std::vector<std::uint32_t> digits_;
};

/// The quotient map [x]_m.
inline GroupElement group_project(const PadicValue& x, int m) {
  return GroupElement(x.residue_digits(m), m, x.precision());
}

/// The isomorphism G -> G_m induced by multiplication by p^m.
inline GroupElement alpha_iso(const GroupElement& g, int m) {
  if (g.level() != 0) {
    throw std::invalid_argument("alpha_iso: expected a level-0 element, got level " +
                                std::to_string(g.level()));
  }
  return g.shifted(m, m);
}

/// Inverse of alpha_iso: G_m -> G.
inline GroupElement alpha_inverse(const GroupElement& z) { return z.shifted(-z.level(), 0); }

/// The section j_m: the representative of z whose digits vanish from index m on.
inline PadicValue section_j(const GroupElement& z) {
  return PadicValue::from_digits(z.digits(), z.precision());
}

/// Gamma_m(g) = j_m(alpha_m(g)) = p^m j_0(g).
inline PadicValue gamma_embed(const GroupElement& g, int m) { return section_j(alpha_iso(g, m)); }

}  // namespace padic
