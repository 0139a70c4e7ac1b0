#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace steinfit {

class SortedSample;

/// A finite batch of real observations, in draw order.
class Sample {
public:
  Sample() = default;
  explicit Sample(std::vector<double> values) : values_(std::move(values)) {}

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  [[nodiscard]] SortedSample sorted() const;

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

private:
  std::vector<double> values_;
};

/// Order statistics X(1) <= ... <= X(n). Never empty.
class SortedSample {
public:
  explicit SortedSample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("SortedSample: empty sample");
    std::sort(values_.begin(), values_.end());
  }

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  /// 0-based access; X(j) in 1-based notation is `(*this)[j - 1]`.
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] double min() const noexcept { return values_.front(); }
  [[nodiscard]] double max() const noexcept { return values_.back(); }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

private:
  std::vector<double> values_;
};

inline SortedSample Sample::sorted() const { return SortedSample(values_); }

} // namespace steinfit
