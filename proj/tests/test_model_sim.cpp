#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ecfvol/error.hpp"
#include "ecfvol/model_sim.hpp"
#include "ecfvol/numeric.hpp"

using namespace ecfvol;

namespace {

double mean_cos(const std::vector<double>& xs, double t) {
  KahanSum acc;
  for (double x : xs) acc.add(std::cos(t * x));
  return acc.value() / static_cast<double>(xs.size());
}

std::vector<double> increments(const SimulatedPath& p) {
  std::vector<double> r(static_cast<std::size_t>(p.n));
  for (int i = 0; i < p.n; ++i) r[i] = p.log_prices[i + 1] - p.log_prices[i];
  return r;
}

}  // namespace

TEST(Stable, CauchyQuartiles) {
  Rng rng = make_rng(1);
  const auto xs = sample_symmetric_stable(1.0, 1000000, rng);
  const auto below = std::count_if(xs.begin(), xs.end(), [](double x) { return x <= 1.0; });
  EXPECT_NEAR(static_cast<double>(below) / xs.size(), 0.75, 0.002);
}

TEST(Stable, UnitScaleCharacteristicFunction) {
  for (double beta : {0.5, 1.0, 1.5}) {
    Rng rng = make_rng(7);
    const auto xs = sample_symmetric_stable(beta, 1000000, rng);
    for (double t : {0.5, 1.0, 2.0})
      EXPECT_NEAR(mean_cos(xs, t), std::exp(-std::pow(t, beta)), 0.004) << beta << " " << t;
  }
  Rng rng = make_rng(1);
  EXPECT_THROW(sample_symmetric_stable(2.0, rng), ParameterError);
}

TEST(ModelParams, Validation) {
  EXPECT_NO_THROW(ModelParams::baseline(-0.6, 0.3).validate());
  EXPECT_THROW(ModelParams::baseline(-0.6, 0.5).validate(), ParameterError);
  EXPECT_THROW(ModelParams::baseline(-1.1, 0.3).validate(), ParameterError);
  EXPECT_THROW(ModelParams::baseline(0.0, 0.3, 0.1, 2.5).validate(), ParameterError);
  ModelParams p;
  p.sigma2_0 = 0.0;
  EXPECT_THROW(p.validate(), ParameterError);
}

TEST(Simulate, DeterministicPerSeed) {
  const auto p = ModelParams::baseline(-0.6, 0.3, 0.01, 1.0);
  const auto a = simulate(p, 2730, 1.0, 42);
  const auto b = simulate(p, 2730, 1.0, 42);
  const auto c = simulate(p, 2730, 1.0, 43);
  EXPECT_EQ(a.log_prices, b.log_prices);
  EXPECT_EQ(a.sigma2, b.sigma2);
  EXPECT_NE(a.log_prices, c.log_prices);
  EXPECT_EQ(a.log_prices.size(), 2731u);
  EXPECT_DOUBLE_EQ(a.delta_n, 1.0 / 2730);
}

TEST(Simulate, ZeroVolOfVolFollowsTheMeanReversionOde) {
  ModelParams p = ModelParams::baseline(-0.6, 0.0);
  p.sigma2_0 = 0.05;
  const int n = 1000;
  const auto vol = simulate_variance(p, n, 1.0, 3);
  const double h = 1.0 / n / kVarianceSubsteps;
  for (int i : {0, 1, 10, 500, 1000}) {
    const double expect = p.theta + (p.sigma2_0 - p.theta) * std::pow(1 - p.zeta * h, i * 10);
    EXPECT_NEAR(vol.sigma2_at(i), expect, 1e-14);
  }
}

TEST(Simulate, TruthIdentities) {
  const auto p = ModelParams::baseline(-0.4, 0.2);
  const auto s = simulate(p, 500, 1.0, 9);
  double iv = 0;
  for (int i = 0; i < 500; ++i) iv += s.sigma2[i];
  iv /= 500;
  EXPECT_NEAR(s.integrated_variance, iv, 1e-15);
  EXPECT_DOUBLE_EQ(s.true_leverage, 0.2 * -0.4 * s.integrated_variance);
  EXPECT_DOUBLE_EQ(s.true_vov, 0.2 * 0.2 * s.integrated_variance);
  EXPECT_DOUBLE_EQ(s.s_tilde, 0.2 * -0.4 / 2);
  EXPECT_DOUBLE_EQ(s.s_tilde_prime, 0.2 * std::sqrt(1 - 0.16) / 2);
}

TEST(Simulate, ConstantVarianceReturnsAreGaussian) {
  ModelParams p = ModelParams::baseline(0.0, 0.0);
  p.v = 0.0;
  const int n = 32760;
  const auto s = simulate(p, n, 1.0, 17);
  const double sd = std::sqrt(p.theta / n);
  const auto r = increments(s);
  double m2 = 0, m3 = 0, m4 = 0, mx = 0;
  for (double x : r) {
    const double z = (x + p.theta / 2 / n) / sd;
    m2 += z * z;
    m3 += z * z * z;
    m4 += z * z * z * z;
    mx = std::max(mx, std::abs(z));
  }
  m2 /= n, m3 /= n, m4 /= n;
  EXPECT_LT(mx, 6.0);
  EXPECT_NEAR(m2, 1.0, 0.03);
  const double skew = m3 / std::pow(m2, 1.5), kurt = m4 / (m2 * m2);
  const double jb = n / 6.0 * (skew * skew + (kurt - 3) * (kurt - 3) / 4);
  EXPECT_LT(jb, 13.8);
}

TEST(Simulate, QuadraticVariationTracksIntegratedVariance) {
  const auto s = simulate(ModelParams::baseline(-0.6, 0.3), 32760, 1.0, 5);
  double qv = 0;
  for (double x : increments(s)) qv += x * x;
  EXPECT_NEAR(qv / s.integrated_variance, 1.0, 0.05);
}

TEST(Simulate, PriceAndVarianceShocksCorrelateAtRho) {
  const auto p = ModelParams::baseline(-0.6, 0.3);
  const auto s = simulate(p, 32760, 1.0, 8);
  const auto r = increments(s);
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < s.n; ++i) {
    const double dv = s.sigma2[i + 1] - s.sigma2[i];
    sxy += r[i] * dv;
    sxx += r[i] * r[i];
    syy += dv * dv;
  }
  EXPECT_NEAR(sxy / std::sqrt(sxx * syy), -0.6, 0.03);
}

TEST(Simulate, FixedVolatilityPathKeepsVarianceAndRedrawsPrice) {
  const auto p = ModelParams::baseline(-0.6, 0.3);
  const auto vol = simulate_variance(p, 400, 1.0, 1);
  const auto a = resample_price(vol, p, 2);
  const auto b = resample_price(vol, p, 3);
  EXPECT_EQ(a.sigma2, b.sigma2);
  EXPECT_EQ(a.true_leverage, b.true_leverage);
  EXPECT_NE(a.log_prices, b.log_prices);
  EXPECT_EQ(a.sigma2, simulate(p, 400, 1.0, 1).sigma2);
}

TEST(Simulate, StableComponentHasUnitScaleIncrements) {
  ModelParams p = ModelParams::baseline(-0.6, 0.3, 0.0, 1.5);
  p.lambda_cp = 0.0;
  const int n = 32760;
  const auto base = simulate(p, n, 1.0, 4);
  p.gamma = 0.01;
  const auto jumpy = simulate(p, n, 1.0, 4);
  const double scale = p.gamma * std::pow(1.0 / n, 1.0 / p.beta);
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i)
    z[i] = ((jumpy.log_prices[i + 1] - jumpy.log_prices[i]) -
            (base.log_prices[i + 1] - base.log_prices[i])) /
           scale;
  for (double t : {0.5, 1.0}) EXPECT_NEAR(mean_cos(z, t), std::exp(-std::pow(t, 1.5)), 0.02);
}

TEST(Simulate, UserVariancePath) {
  const auto p = ModelParams::baseline(-0.6, 0.3);
  const auto vol = simulate_variance(p, 200, 1.0, 6).grid_sigma2();
  const auto s = resample_price(vol, 1.0 / 200, p, 7);
  EXPECT_EQ(s.sigma2, vol);
  std::vector<double> bad = vol;
  bad[3] = 0.0;
  EXPECT_THROW(resample_price(bad, 1.0 / 200, p, 7), DataError);
}

TEST(PathCsv, RoundTripIsExact) {
  const auto s = simulate(ModelParams::baseline(-0.6, 0.3), 2730, 1.0, 11);
  std::stringstream buf;
  write_path_csv(buf, s);
  const PricePath back = read_path_csv(buf);
  ASSERT_EQ(back.n(), 2730);
  EXPECT_NEAR(back.delta_n(), 1.0 / 2730, 1e-15);
  for (int i = 0; i <= 2730; ++i) EXPECT_EQ(back.log_prices()[i], s.log_prices[i]);
}

TEST(PathCsv, RejectsUnevenGrid) {
  std::stringstream bad("t,logprice\n0,0\n0.1,0.01\n0.3,0.02\n");
  EXPECT_THROW(read_path_csv(bad), DataError);
}
