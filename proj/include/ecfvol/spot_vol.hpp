#pragma once

#include <span>
#include <vector>

#include "ecfvol/estimator_config.hpp"
#include "ecfvol/price_path.hpp"

namespace ecfvol {

/// Which side of t_i a local window sits on.
///   Forward:  increments {i+1, ..., i+k_n}, requires 0 <= i <= n - k_n
///   Backward: increments {i-k_n, ..., i-1}, requires k_n + 1 <= i <= n
enum class Direction { Forward, Backward };

/// First increment index (one-based) of the window rooted at i.
int window_first(int i, int k_n, Direction dir);
/// Throws WindowError if the window at i does not fit inside [1, n].
void check_window(int i, int k_n, int n, Direction dir);

/// ECF spot variance from one window of precomputed cos(u * dX / sqrt(dn)) terms:
///   -2/u^2 * log( max(mean(cos), 1/sqrt(k)) ).
/// The floor branch returns log(k)/u^2 directly.
double ecf_from_cos_window(std::span<const double> cos_terms, double u);

/// Characteristic-function spot estimator over the forward window at i.
double ecf_spot_forward(const PricePath& path, int i, const EstimatorConfig& cfg);
/// Same estimator over the backward window at i. Equals ecf_spot_forward at i - k_n - 1.
double ecf_spot_backward(const PricePath& path, int i, const EstimatorConfig& cfg);

/// Forward ECF spot estimates at every admissible root, computed once per path.
/// forward(i) is defined for 0 <= i <= n - k_n; backward(i) for k_n + 1 <= i <= n.
class SpotCurve {
 public:
  SpotCurve(const PricePath& path, const ResolvedConfig& rc);

  int n() const noexcept { return n_; }
  int k_n() const noexcept { return k_n_; }
  double u() const noexcept { return u_; }

  double forward(int i) const { return fwd_[static_cast<std::size_t>(i)]; }
  double backward(int i) const { return fwd_[static_cast<std::size_t>(i - k_n_ - 1)]; }
  std::span<const double> forward_values() const noexcept { return fwd_; }

 private:
  std::vector<double> fwd_;
  int n_;
  int k_n_;
  double u_;
};

/// Local realized variance (1/(k_n dn)) * sum of squared increments, untruncated.
double plain_spot(const PricePath& path, int i, const EstimatorConfig& cfg, Direction dir);
/// As plain_spot, keeping only increments with |dX| <= alpha * dn^omega.
double truncated_spot(const PricePath& path, int i, const EstimatorConfig& cfg, Direction dir);

/// Bipower variation (pi/2) * sum_{i=1}^{n-1} |dX_i| |dX_{i+1}|.
double bipower_variation(const PricePath& path);

/// Local fourth-moment estimator (1/(3 k_n dn^2)) * sum_{j=1}^{k_n} |dX_{i+j}|^4,
/// optionally truncated at alpha * dn^omega.
double fourth_moment(const PricePath& path, int i, const EstimatorConfig& cfg, bool truncated);

// Resolved-config variants used by the estimators in lev_vov and inference.
namespace detail {
double realized_window(std::span<const double> returns, int first, int k_n, double delta_n,
                       double threshold);
double fourth_moment_window(std::span<const double> returns, int first, int k_n, double delta_n,
                            double threshold);
}  // namespace detail

}  // namespace ecfvol
