#pragma once

#include <functional>
#include <span>
#include <string>

#include "ecfvol/estimator_config.hpp"
#include "ecfvol/lev_vov.hpp"
#include "ecfvol/price_path.hpp"
#include "ecfvol/spot_vol.hpp"

namespace ecfvol {

// Limiting-variance functions, plug-in variance estimators and the feasible
// tests built on them.
//
// The ECF spot estimator also carries a jump bias 2 C |gamma_t|^beta
// |u|^(beta-2) dn^(1-beta/2) (C the stable scale, beta the activity index).
// It cancels in the forward/backward differences used below and is not
// estimated anywhere in this library.

/// Conditional variance of the ECF spot error:
///   h1(u, s) = 2 (exp(-2u^2 s) - 2 exp(-u^2 s) + 1) / (u^4 exp(-u^2 s)).
/// Evaluated as 2 (expm1(u^2 s))^2 exp(-u^2 s) / u^4, which is the same
/// quantity without the cancellation near s = 0.
double h1(double u, double sigma2);

/// 4 s (st^2 + st'^2) / 3, where s_tilde_sum = st^2 + st'^2.
double h2(double sigma2, double s_tilde_sum);

/// dn * sum_{i=0}^{n-k} g(s2_{i+}).
double volatility_functional(const PricePath& path, const EstimatorConfig& cfg,
                             const std::function<double(double)>& g);

double var_U_hat(const PricePath& path, const EstimatorConfig& cfg);
double H1_hat(const PricePath& path, const EstimatorConfig& cfg);
double H2_hat(const PricePath& path, const EstimatorConfig& cfg);
double H3_hat(const PricePath& path, const EstimatorConfig& cfg);
double var_W_hat(const PricePath& path, const EstimatorConfig& cfg);
/// h1(u, s2_t) at the forward spot estimate rooted at t_index.
double var_V_hat(const PricePath& path, int t_index, const EstimatorConfig& cfg);
/// (1/(k dn)) sum_{i=t+1}^{t+k} [ (1/(2k)) D_i^2 - (1/k^2) h1(u, s2_{i+}) ].
double var_Vprime_hat(const PricePath& path, int t_index, const EstimatorConfig& cfg);
/// Plug-in minimiser of the leverage limiting variance at b = 1/2. cfg_pilot
/// supplies the pilot window. Throws UndefinedStatistic if the denominator
/// estimate is not positive.
double kappa_opt_hat(const PricePath& path, const EstimatorConfig& cfg_pilot);

/// Plug-in quantities for one path, sharing one spot curve.
struct VarianceComponents {
  double var_U_hat = 0.0;
  double var_W_hat = 0.0;
  double H1_hat = 0.0;
  double H2_hat = 0.0;
  double H3_hat = 0.0;
  /// dn sum_{i=0}^{n-k} s2 h1(u, s2)
  double sigma2_h1_integral = 0.0;
  /// sum_{i=k+1}^{n-k} (s2/3) [3/(2k) D^2 - 3/k^2 h1]
  double sigma2_h2_integral = 0.0;
};
VarianceComponents variance_components(const SpotCurve& spot, const ResolvedConfig& rc);

enum class Decision { RejectH0, FailToReject };
std::string to_string(Decision d);

struct EstimateReport {
  std::string target;  ///< "leverage" or "vov"
  double estimate = 0.0;
  double variance_hat = 0.0;
  double std_error = 0.0;
  double rate = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double test_stat = 0.0;
  double critical_value = 0.0;
  bool one_sided = false;
  Decision decision = Decision::FailToReject;
  double alpha_level = 0.05;
  EstimatorConfig cfg;
  int n = 0;
  int k_n = 0;
  double u = 0.0;
};

/// Two-sided test of zero leverage; T = n^{min(b,1-b)/2} L / sqrt(VarU_hat).
EstimateReport lev_test(const PricePath& path, const EstimatorConfig& cfg, double alpha_level);
/// One-sided test of zero vol-of-vol; T = n^{(1-b)/2} VoV / sqrt(VarW_hat).
EstimateReport vov_test(const PricePath& path, const EstimatorConfig& cfg, double alpha_level);

/// n^{min(b,1-b)/2}
double leverage_rate(int n, const Exponent& b);
/// n^{(1-b)/2}
double vov_rate(int n, const Exponent& b);

/// Upper quantile z with P(N(0,1) > z) = p.
double normal_upper_quantile(double p);

// Limiting variances evaluated on a known variance path (Heston: h2 = eta^2 s2 / 3).
// sigma2 is the grid path; the integrals are left Riemann sums over i = 0..n-1.
double leverage_limit_variance(std::span<const double> sigma2, double delta_n, double u,
                               double kappa, const Exponent& b, double eta);
double vov_limit_variance(std::span<const double> sigma2, double delta_n, double u, double kappa,
                          const Exponent& b, double eta);
/// kappa minimising the leverage limiting variance on a known path.
double leverage_kappa_opt(std::span<const double> sigma2, double delta_n, double u, double eta);

}  // namespace ecfvol
