#pragma once

#include <optional>
#include <string>

#include "ecfvol/price_path.hpp"

namespace ecfvol {

/// Window exponent b stored as an exact fraction, so that the b = 1/2
/// branches of the variance formulas switch on exact equality.
struct Exponent {
  long num = 1;
  long den = 2;

  /// Parses "p/q" or a finite decimal such as "0.55" (-> 11/20).
  static Exponent parse(const std::string& text);

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_half() const noexcept { return 2 * num == den; }
  bool at_most_half() const noexcept { return 2 * num <= den; }
  bool at_least_half() const noexcept { return 2 * num >= den; }
  /// min(b, 1 - b)
  double min_with_complement() const noexcept;
  std::string str() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;
};

enum class FrequencyRule {
  Fixed,       ///< use EstimatorConfig::u as given
  DataDriven,  ///< u = (log n)^(-1/40) / sqrt(BV_n)
};

/// Tuning parameters shared by every estimator.
struct EstimatorConfig {
  double u = 1.0;
  FrequencyRule u_rule = FrequencyRule::Fixed;
  Exponent b{1, 2};
  double kappa = 1.0;
  /// Explicit window length; when empty k_n = floor(kappa * n^b).
  std::optional<int> k_n;
  /// Truncation level alpha = alpha_multiplier * sqrt(BV_n) unless alpha is set.
  double alpha_multiplier = 5.0;
  std::optional<double> alpha;
  double omega = 0.49;

  /// Monte Carlo default: k_n = floor(sqrt(n)), u = 1.
  static EstimatorConfig monte_carlo();
  /// Empirical default: u = 1, b = 0.55, kappa = 2.
  static EstimatorConfig empirical();

  void validate() const;
};

/// Config values made concrete for one path.
struct ResolvedConfig {
  int n = 0;
  int k_n = 0;
  double u = 1.0;
  double delta_n = 0.0;
  double horizon = 0.0;
  double kappa = 1.0;
  Exponent b;
  double alpha = 0.0;
  double omega = 0.49;
  /// alpha * delta_n^omega
  double threshold = 0.0;
};

/// floor(kappa * n^b), no range checks.
int window_length(int n, double kappa, const Exponent& b);

/// Resolves k_n, u and the truncation threshold against a path. Throws
/// ParameterError for k_n < 1 and WindowError when the path is too short,
/// i.e. k_n > floor(n/2) - 1.
ResolvedConfig resolve(const PricePath& path, const EstimatorConfig& cfg);

}  // namespace ecfvol
