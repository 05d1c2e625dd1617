#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace padic {

/// Finitely supported base-p digit map k -> a(k) in {0, ..., p-1}.
///
/// Stored densely from the lowest nonzero index; both ends are trimmed so the
/// representation of a given digit map is unique.
class Digits {
 public:
  Digits() = default;
  explicit Digits(std::uint32_t p) : p_(p) {}

  /// Builds from (index, digit) pairs; zero digits are dropped.
  Digits(std::uint32_t p, const std::map<int, std::uint32_t>& entries) : p_(p) {
    if (entries.empty()) return;
    int lo = entries.begin()->first;
    int hi = entries.rbegin()->first;
    low_ = lo;
    values_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (auto [k, a] : entries) {
      if (a >= p) throw std::invalid_argument("digit out of range for base p");
      values_[static_cast<std::size_t>(k - lo)] = a;
    }
    trim();
  }

  /// Dense constructor: values[i] is the digit at index low + i.
  Digits(std::uint32_t p, int low, std::vector<std::uint32_t> values)
      : p_(p), low_(low), values_(std::move(values)) {
    for (auto a : values_) {
      if (a >= p_) throw std::invalid_argument("digit out of range for base p");
    }
    trim();
  }

  [[nodiscard]] std::uint32_t prime() const noexcept { return p_; }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
  /// Least index with a nonzero digit; meaningless when empty().
  [[nodiscard]] int low() const noexcept { return low_; }
  /// Greatest index with a nonzero digit; meaningless when empty().
  [[nodiscard]] int high() const noexcept { return low_ + static_cast<int>(values_.size()) - 1; }
  [[nodiscard]] std::size_t span() const noexcept { return values_.size(); }
  [[nodiscard]] const std::vector<std::uint32_t>& dense() const noexcept { return values_; }

  [[nodiscard]] std::uint32_t at(int k) const noexcept {
    if (values_.empty() || k < low_ || k > high()) return 0;
    return values_[static_cast<std::size_t>(k - low_)];
  }

  [[nodiscard]] std::map<int, std::uint32_t> entries() const {
    std::map<int, std::uint32_t> out;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] != 0) out.emplace(low_ + static_cast<int>(i), values_[i]);
    }
    return out;
  }

  friend bool operator==(const Digits& a, const Digits& b) noexcept {
    if (a.p_ != b.p_ || a.values_.size() != b.values_.size()) return false;
    return a.values_.empty() || (a.low_ == b.low_ && a.values_ == b.values_);
  }

 private:
  void trim() {
    std::size_t first = 0;
    while (first < values_.size() && values_[first] == 0) ++first;
    if (first == values_.size()) {
      values_.clear();
      low_ = 0;
      return;
    }
    std::size_t last = values_.size();
    while (values_[last - 1] == 0) --last;
    values_ = std::vector<std::uint32_t>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                         values_.begin() + static_cast<std::ptrdiff_t>(last));
    low_ += static_cast<int>(first);
  }

  std::uint32_t p_ = 2;
  int low_ = 0;
  std::vector<std::uint32_t> values_;
};

}  // namespace padic
