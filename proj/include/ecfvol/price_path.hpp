#pragma once

#include <span>
#include <vector>

namespace ecfvol {

/// Equispaced log-price observations X_{t_0}, ..., X_{t_n} with step delta_n.
///
/// The increments are materialised once at construction; returns()[i] is
/// exactly log_prices[i+1] - log_prices[i]. The optional session_starts list
/// holds return indices at which a new trading session begins (ingested data
/// only); estimators ignore it unless asked.
class PricePath {
 public:
  PricePath() = default;
  PricePath(std::vector<double> log_prices, double delta_n);

  /// Builds a path from increments, starting at x0.
  static PricePath from_returns(std::span<const double> returns, double delta_n, double x0 = 0.0);

  int n() const noexcept { return static_cast<int>(returns_.size()); }
  double delta_n() const noexcept { return delta_n_; }
  /// Horizon T = n * delta_n.
  double horizon() const noexcept { return n() * delta_n_; }

  std::span<const double> log_prices() const noexcept { return log_prices_; }
  std::span<const double> returns() const noexcept { return returns_; }
  /// Increment Delta_i X for i = 1..n (one-based, as in the estimator formulas).
  double increment(int i) const { return returns_[static_cast<std::size_t>(i - 1)]; }

  std::span<const int> session_starts() const noexcept { return session_starts_; }
  void set_session_starts(std::vector<int> starts) { session_starts_ = std::move(starts); }

 private:
  std::vector<double> log_prices_;
  std::vector<double> returns_;
  std::vector<int> session_starts_;
  double delta_n_ = 0.0;
};

}  // namespace ecfvol
