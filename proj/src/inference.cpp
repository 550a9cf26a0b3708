#include "ecfvol/inference.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "ecfvol/error.hpp"
#include "ecfvol/numeric.hpp"

namespace ecfvol {

double h1(double u, double sigma2) {
  const double x = u * u * sigma2;
  const double e = std::expm1(x);
  const double u4 = u * u * u * u;
  return 2.0 * e * e * std::exp(-x) / u4;
}

double h2(double sigma2, double s_tilde_sum) { return 4.0 * sigma2 * s_tilde_sum / 3.0; }

double volatility_functional(const PricePath& path, const EstimatorConfig& cfg,
                             const std::function<double(double)>& g) {
  const ResolvedConfig rc = resolve(path, cfg);
  const SpotCurve spot(path, rc);
  KahanSum acc;
  for (int i = 0; i <= rc.n - rc.k_n; ++i) acc.add(g(spot.forward(i)));
  return rc.delta_n * acc.value();
}

VarianceComponents variance_components(const SpotCurve& spot, const ResolvedConfig& rc) {
  const int n = rc.n, k = rc.k_n;
  const double kd = k, dn = rc.delta_n, u = rc.u;
  const double k2dn = kd * kd * dn;

  KahanSum s_h1, h1_sq;
  for (int i = 0; i <= n - k; ++i) {
    const double s = spot.forward(i);
    const double h = h1(u, s);
    s_h1.add(s * h);
    const double q = h / k2dn;
    h1_sq.add(q * q);
  }

  KahanSum s_h2, h2_terms, d4;
  for (int i = k + 1; i <= n - k; ++i) {
    const double s = spot.forward(i);
    const double d = s - spot.backward(i);
    const double h = h1(u, s);
    const double local = 3.0 / (2.0 * kd) * d * d - 3.0 / (kd * kd) * h;
    s_h2.add(s / 3.0 * local);
    h2_terms.add(h / (3.0 * k2dn) * local);
    d4.add(d * d * d * d);
  }

  VarianceComponents out;
  out.sigma2_h1_integral = dn * s_h1.value();
  out.sigma2_h2_integral = s_h2.value();
  out.H1_hat = dn * h1_sq.value();
  out.H2_hat = h2_terms.value();
  out.H3_hat = d4.value() / k2dn;

  double vu = 0.0;
  if (rc.b.at_most_half()) vu += 2.0 / rc.kappa * out.sigma2_h1_integral;
  if (rc.b.at_least_half()) vu += 2.0 * rc.kappa * rc.horizon * out.sigma2_h2_integral;
  out.var_U_hat = vu;

  double vw = 279.0 / 70.0 * out.H3_hat;
  if (rc.b.is_half()) vw += 891.0 / 35.0 * out.H1_hat + 38207.0 / 1400.0 * out.H2_hat;
  out.var_W_hat = rc.kappa * vw;
  return out;
}

namespace {

VarianceComponents components_for(const PricePath& path, const EstimatorConfig& cfg) {
  const ResolvedConfig rc = resolve(path, cfg);
  return variance_components(SpotCurve(path, rc), rc);
}

}  // namespace

double var_U_hat(const PricePath& path, const EstimatorConfig& cfg) {
  return components_for(path, cfg).var_U_hat;
}
double H1_hat(const PricePath& path, const EstimatorConfig& cfg) {
  return components_for(path, cfg).H1_hat;
}
double H2_hat(const PricePath& path, const EstimatorConfig& cfg) {
  return components_for(path, cfg).H2_hat;
}
double H3_hat(const PricePath& path, const EstimatorConfig& cfg) {
  return components_for(path, cfg).H3_hat;
}
double var_W_hat(const PricePath& path, const EstimatorConfig& cfg) {
  return components_for(path, cfg).var_W_hat;
}

double var_V_hat(const PricePath& path, int t_index, const EstimatorConfig& cfg) {
  const ResolvedConfig rc = resolve(path, cfg);
  check_window(t_index, rc.k_n, rc.n, Direction::Forward);
  return h1(rc.u, ecf_spot_forward(path, t_index, cfg));
}

double var_Vprime_hat(const PricePath& path, int t_index, const EstimatorConfig& cfg) {
  const ResolvedConfig rc = resolve(path, cfg);
  const int k = rc.k_n;
  // Every i in t+1..t+k needs both a backward and a forward window.
  if (t_index < k || t_index + 2 * k > rc.n)
    throw WindowError("var_Vprime_hat: t_index " + std::to_string(t_index) +
                      " needs k_n <= t and t + 2 k_n <= n");
  const SpotCurve spot(path, rc);
  const double kd = k;
  KahanSum acc;
  for (int i = t_index + 1; i <= t_index + k; ++i) {
    const double s = spot.forward(i);
    const double d = s - spot.backward(i);
    acc.add(1.0 / (2.0 * kd) * d * d - 1.0 / (kd * kd) * h1(rc.u, s));
  }
  return acc.value() / (kd * rc.delta_n);
}

double kappa_opt_hat(const PricePath& path, const EstimatorConfig& cfg_pilot) {
  const ResolvedConfig rc = resolve(path, cfg_pilot);
  const VarianceComponents vc = variance_components(SpotCurve(path, rc), rc);
  const double den = rc.horizon * vc.sigma2_h2_integral;
  if (!(den > 0.0)) throw UndefinedStatistic("kappa_opt_hat denominator", den);
  const double ratio = vc.sigma2_h1_integral / den;
  if (!(ratio > 0.0)) throw UndefinedStatistic("kappa_opt_hat", ratio);
  return std::sqrt(ratio);
}

std::string to_string(Decision d) {
  return d == Decision::RejectH0 ? "RejectH0" : "FailToReject";
}

double leverage_rate(int n, const Exponent& b) {
  return std::pow(static_cast<double>(n), b.min_with_complement() / 2.0);
}

double vov_rate(int n, const Exponent& b) {
  return std::pow(static_cast<double>(n), (1.0 - b.value()) / 2.0);
}

double normal_upper_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("normal quantile level must lie in (0,1)");
  return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<>(), p));
}

namespace {

EstimateReport make_report(std::string target, double estimate, double variance, double rate,
                           bool one_sided, double alpha_level, const EstimatorConfig& cfg,
                           const ResolvedConfig& rc) {
  if (!(alpha_level > 0.0 && alpha_level < 1.0))
    throw ParameterError("alpha_level must lie in (0,1)");
  EstimateReport r;
  r.target = std::move(target);
  r.estimate = estimate;
  r.variance_hat = variance;
  r.std_error = std::sqrt(variance) / rate;
  r.rate = rate;
  r.test_stat = rate * estimate / std::sqrt(variance);
  r.one_sided = one_sided;
  r.alpha_level = alpha_level;
  r.critical_value = normal_upper_quantile(one_sided ? alpha_level : alpha_level / 2.0);
  const double z_ci = normal_upper_quantile(alpha_level / 2.0);
  r.ci_low = estimate - z_ci * r.std_error;
  r.ci_high = estimate + z_ci * r.std_error;
  const bool reject =
      one_sided ? r.test_stat > r.critical_value : std::abs(r.test_stat) > r.critical_value;
  r.decision = reject ? Decision::RejectH0 : Decision::FailToReject;
  r.cfg = cfg;
  r.n = rc.n;
  r.k_n = rc.k_n;
  r.u = rc.u;
  return r;
}

}  // namespace

EstimateReport lev_test(const PricePath& path, const EstimatorConfig& cfg, double alpha_level) {
  const PathEstimators est(path, cfg);
  const ResolvedConfig& rc = est.resolved();
  const VarianceComponents vc = variance_components(est.spot(), rc);
  if (!(vc.var_U_hat > 0.0)) throw UndefinedStatistic("var_U_hat", vc.var_U_hat);
  return make_report("leverage", est.leverage(), vc.var_U_hat, leverage_rate(rc.n, rc.b), false,
                     alpha_level, cfg, rc);
}

EstimateReport vov_test(const PricePath& path, const EstimatorConfig& cfg, double alpha_level) {
  const PathEstimators est(path, cfg);
  const ResolvedConfig& rc = est.resolved();
  const VarianceComponents vc = variance_components(est.spot(), rc);
  if (!(vc.var_W_hat > 0.0)) throw UndefinedStatistic("var_W_hat", vc.var_W_hat);
  return make_report("vov", est.vov(), vc.var_W_hat, vov_rate(rc.n, rc.b), true, alpha_level, cfg,
                     rc);
}

namespace {

struct KnownPathIntegrals {
  double s_h1 = 0.0;   // int s2 h1
  double s_h2 = 0.0;   // int s2 h2
  double h1_sq = 0.0;  // int h1^2
  double h1_h2 = 0.0;  // int h1 h2
  double h2_sq = 0.0;  // int h2^2
};

KnownPathIntegrals known_path_integrals(std::span<const double> sigma2, double delta_n, double u,
                                        double eta) {
  if (sigma2.size() < 2) throw ParameterError("known variance path needs at least two points");
  KahanSum a, b, c, d, e;
  // Left Riemann sum over the grid points 0..n-1.
  for (std::size_t i = 0; i + 1 < sigma2.size(); ++i) {
    const double s = std::max(sigma2[i], 0.0);
    const double p = h1(u, s);
    const double q = h2(s, eta * eta / 4.0);
    a.add(s * p);
    b.add(s * q);
    c.add(p * p);
    d.add(p * q);
    e.add(q * q);
  }
  return {delta_n * a.value(), delta_n * b.value(), delta_n * c.value(), delta_n * d.value(),
          delta_n * e.value()};
}

}  // namespace

double leverage_limit_variance(std::span<const double> sigma2, double delta_n, double u,
                               double kappa, const Exponent& b, double eta) {
  const auto I = known_path_integrals(sigma2, delta_n, u, eta);
  const double horizon = static_cast<double>(sigma2.size() - 1) * delta_n;
  double v = 0.0;
  if (b.at_most_half()) v += 2.0 / kappa * I.s_h1;
  if (b.at_least_half()) v += 2.0 * kappa * horizon * I.s_h2;
  return v;
}

double vov_limit_variance(std::span<const double> sigma2, double delta_n, double u, double kappa,
                          const Exponent& b, double eta) {
  const auto I = known_path_integrals(sigma2, delta_n, u, eta);
  double v = kappa * 837.0 / 70.0 * I.h2_sq;
  if (b.is_half())
    v += 27.0 / (2.0 * kappa * kappa * kappa) * I.h1_sq + 709.0 / (40.0 * kappa) * I.h1_h2;
  return v;
}

double leverage_kappa_opt(std::span<const double> sigma2, double delta_n, double u, double eta) {
  const auto I = known_path_integrals(sigma2, delta_n, u, eta);
  const double horizon = static_cast<double>(sigma2.size() - 1) * delta_n;
  const double den = horizon * I.s_h2;
  if (!(den > 0.0)) throw UndefinedStatistic("kappa_opt denominator", den);
  return std::sqrt(I.s_h1 / den);
}

}  // namespace ecfvol
