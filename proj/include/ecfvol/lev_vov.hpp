#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecfvol/estimator_config.hpp"
#include "ecfvol/price_path.hpp"
#include "ecfvol/spot_vol.hpp"

namespace ecfvol {

enum class EstimatorId {
  LevOur,
  LevAJ14,
  LevWM14,
  LevAFLWY17,
  LevCor,
  LevFunc,
  VovOur,
  VovAJ14,
  VovV15,
  VovV15Thr,
  VovBV09,
};

std::string_view to_string(EstimatorId id);
std::optional<EstimatorId> estimator_from_string(std::string_view name);
/// True for the leverage-type estimators (target <X, s2>).
bool is_leverage(EstimatorId id);
const std::vector<EstimatorId>& all_estimators();

struct LevVovEstimate {
  double value = 0.0;
  EstimatorId id = EstimatorId::LevOur;
  EstimatorConfig cfg;
  int n = 0;
  int k_n = 0;
  double u = 0.0;
  /// Set when a debiased vol-of-vol estimate came out negative. The raw value is kept.
  bool debias_negative = false;
};

using ScalarFn = std::function<double(double)>;

/// sum_{i=k+1}^{n-k} dX_i (s2_{i+} - s2_{i-}) with the ECF spot estimators.
LevVovEstimate leverage_ecf(const PricePath& path, const EstimatorConfig& cfg);
/// sum_{i=k+1}^{n-k} [ 3/(2k) (s2_{i+} - s2_{i-})^2 - 3/k^2 h1(u, s2_{i+}) ].
LevVovEstimate vov_ecf(const PricePath& path, const EstimatorConfig& cfg);
/// sum dX_i (F(s2_{i+}) - F(s2_{i-})).
LevVovEstimate leverage_functional(const PricePath& path, const EstimatorConfig& cfg,
                                   const ScalarFn& f);
/// leverage_ecf / (sqrt(IV) sqrt(VoV)) with IV = volatility functional of the identity.
/// Throws UndefinedStatistic if either factor in the denominator is non-positive.
LevVovEstimate leverage_correlation(const PricePath& path, const EstimatorConfig& cfg);

LevVovEstimate leverage_aflwy17(const PricePath& path, const EstimatorConfig& cfg);
LevVovEstimate leverage_aj14(const PricePath& path, const EstimatorConfig& cfg);
LevVovEstimate leverage_wm14(const PricePath& path, const EstimatorConfig& cfg);

LevVovEstimate vov_aj14(const PricePath& path, const EstimatorConfig& cfg);
LevVovEstimate vov_v15(const PricePath& path, const EstimatorConfig& cfg, bool truncated);
LevVovEstimate vov_bv09(const PricePath& path, const EstimatorConfig& cfg);

/// Dispatch by id. LevFunc uses F = identity here.
LevVovEstimate estimate(EstimatorId id, const PricePath& path, const EstimatorConfig& cfg);

/// Same as above against an already resolved config / spot curve, so that
/// several estimators on one path share the cos and window work.
class PathEstimators {
 public:
  PathEstimators(const PricePath& path, const EstimatorConfig& cfg);

  const ResolvedConfig& resolved() const noexcept { return rc_; }
  const SpotCurve& spot() const noexcept { return spot_; }
  const PricePath& path() const noexcept { return path_; }

  double leverage() const;
  double vov() const;
  double leverage_functional(const ScalarFn& f) const;
  double leverage_correlation() const;
  double leverage_aflwy17() const;
  double leverage_aj14() const;
  double leverage_wm14() const;
  double vov_aj14() const;
  double vov_v15(bool truncated) const;
  double vov_bv09() const;

  double value(EstimatorId id) const;
  LevVovEstimate estimate(EstimatorId id) const;

 private:
  double plain_forward(int i) const;
  double trunc_forward(int i) const;

  const PricePath& path_;
  EstimatorConfig cfg_;
  ResolvedConfig rc_;
  SpotCurve spot_;
  // Lazily filled realized-variance curves, forward roots 0..n-k.
  mutable std::vector<double> plain_;
  mutable std::vector<double> trunc_;
};

}  // namespace ecfvol
