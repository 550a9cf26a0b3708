#pragma once

#include <cstddef>
#include <span>

namespace ecfvol {

/// Compensated (Kahan) accumulator. Terms are added strictly left to right,
/// so the same sequence always yields the same bits.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  KahanSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double kahan_sum(std::span<const double> xs) noexcept {
  KahanSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

}  // namespace ecfvol
