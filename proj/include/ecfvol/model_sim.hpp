#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ecfvol/price_path.hpp"
#include "ecfvol/rng.hpp"

namespace ecfvol {

/// Heston variance with an additive symmetric-stable plus compound-Poisson jump
/// component in the log-price:
///
///   dX  = (v - s2/2) dt + sqrt(s2) (rho dW + sqrt(1-rho^2) dV) + gamma (dL + dJ)
///   ds2 = zeta (theta - s2) dt + eta sqrt(s2) dW
///
/// L is unit-scale symmetric beta-stable (E exp(iuL_t) = exp(-|u|^beta t)), J is
/// compound Poisson with intensity lambda_cp and N(0, jump_sd^2) marks. All rates
/// are per unit of the horizon T (the reference presets use T = 1 month).
struct ModelParams {
  double x0 = 0.0;
  double sigma2_0 = 0.02;
  double v = 0.05;
  double zeta = 5.0;
  double theta = 0.02;
  double eta = 0.3;
  double rho = -0.6;
  double gamma = 0.0;
  double beta = 1.0;
  double lambda_cp = 3.0;
  double jump_sd = 0.01;

  /// Throws ParameterError on a Feller violation (2 zeta theta <= eta^2 with
  /// eta > 0), beta outside (0,2), |rho| > 1, or negative scale fields.
  void validate() const;

  /// X0 = 0, sigma2_0 = 0.02, v = 0.05, lambda' = 3, theta = 0.02, zeta = 5,
  /// with the given leverage / vol-of-vol / jump settings.
  static ModelParams baseline(double rho, double eta, double gamma = 0.0, double beta = 1.0);
};

/// Number of Euler substeps per observation interval for the variance path.
inline constexpr int kVarianceSubsteps = 10;

/// Latent variance path on the substep grid, together with the Brownian
/// increments that drove it. Holding dW lets a price path be regenerated on a
/// fixed variance path while keeping its covariation with the variance.
struct LatentVolPath {
  int n = 0;
  double delta_n = 0.0;
  int substeps = kVarianceSubsteps;
  /// Full-truncation Euler state at substep points, length n*substeps + 1.
  std::vector<double> state;
  /// dW per substep, length n*substeps.
  std::vector<double> dw;

  /// Variance at observation index i (0..n), floored at zero.
  double sigma2_at(int i) const;
  std::vector<double> grid_sigma2() const;
};

struct SimulatedPath {
  int n = 0;
  double delta_n = 0.0;
  std::vector<double> log_prices;  ///< length n+1
  std::vector<double> sigma2;      ///< latent variance at grid points, length n+1
  /// eta rho dn sum_{i<n} sigma2[i]: left Riemann sum of the quadratic covariation <X, s2>.
  double true_leverage = 0.0;
  /// eta^2 dn sum_{i<n} sigma2[i].
  double true_vov = 0.0;
  /// dn sum_{i<n} sigma2[i].
  double integrated_variance = 0.0;
  std::uint64_t seed = 0;

  /// sigma-tilde and sigma-tilde' implied by the Heston volatility dynamics.
  double s_tilde = 0.0;
  double s_tilde_prime = 0.0;

  PricePath price_path() const { return PricePath(log_prices, delta_n); }
  double horizon() const noexcept { return n * delta_n; }
};

/// Unit-scale symmetric stable draws via the Chambers-Mallows-Stuck transform.
std::vector<double> sample_symmetric_stable(double beta, std::size_t count, Rng& rng);
double sample_symmetric_stable(double beta, Rng& rng);

/// Simulates the variance path only.
LatentVolPath simulate_variance(const ModelParams& params, int n, double horizon,
                                std::uint64_t seed);

/// Full path: variance from the Variance stream, price from the Price/Jumps/Stable streams.
SimulatedPath simulate(const ModelParams& params, int n, double horizon, std::uint64_t seed);

/// Fresh price path (new V, stable and compound-Poisson draws) on a fixed latent variance path.
SimulatedPath resample_price(const LatentVolPath& vol, const ModelParams& params,
                             std::uint64_t seed);

/// Fresh price path on a user-supplied grid variance path (length n+1, strictly positive).
/// The W increments are recovered by inverting the grid-level Euler step when eta > 0,
/// and drawn fresh when eta = 0.
SimulatedPath resample_price(std::span<const double> sigma2, double delta_n,
                             const ModelParams& params, std::uint64_t seed);

/// Writes "t,logprice,sigma2" with one row per grid point.
void write_path_csv(std::ostream& out, const SimulatedPath& path);
void write_path_csv(std::ostream& out, const PricePath& path);

/// Reads a "t,logprice[,sigma2]" CSV. delta_n is the common spacing of t; the
/// grid must be equispaced to 1e-9 relative.
PricePath read_path_csv(std::istream& in);

}  // namespace ecfvol
