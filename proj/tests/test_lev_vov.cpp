#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ecfvol/error.hpp"
#include "ecfvol/lev_vov.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace ecfvol;

namespace {

struct Case {
  PricePath path;
  EstimatorConfig cfg;
  oracle::Setup setup;
};

Case make_case(std::mt19937_64& rng, int n, int k, double u, double s2) {
  const double dn = 1.0 / n;
  Case c{PricePath::from_returns(testutil::random_returns(rng, n, dn, s2), dn), {}, {}};
  c.cfg.k_n = k;
  c.cfg.u = u;
  c.setup = testutil::setup_from(c.path, k, u);
  c.setup.threshold = resolve(c.path, c.cfg).threshold;
  return c;
}

// Log-prices on a 2^-30 lattice, so differences and shifts are exact in double.
std::vector<double> dyadic_levels(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> step(-4000000, 4000000);
  std::vector<double> x(static_cast<std::size_t>(n + 1));
  long acc = 0;
  for (auto& v : x) {
    v = std::ldexp(static_cast<double>(acc), -30);
    acc += step(rng);
  }
  return x;
}

}  // namespace

TEST(EstimatorNames, RoundTrip) {
  for (EstimatorId id : all_estimators()) {
    const auto back = estimator_from_string(to_string(id));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, id);
  }
  EXPECT_FALSE(estimator_from_string("LevNope").has_value());
  EXPECT_TRUE(is_leverage(EstimatorId::LevAJ14));
  EXPECT_TRUE(is_leverage(EstimatorId::LevCor));
  EXPECT_FALSE(is_leverage(EstimatorId::VovBV09));
}

TEST(LevVov, MatchesNaiveReference) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 40 + rep % 13;
    const int k = 2 + rep % 7;
    Case c = make_case(rng, n, k, 0.6 + 0.1 * (rep % 9), 0.05 + 0.3 * (rep % 4));
    const auto& s = c.setup;
    const PathEstimators pe(c.path, c.cfg);
    EXPECT_NEAR(pe.leverage(), oracle::lev(s), 1e-12);
    EXPECT_NEAR(pe.vov(), oracle::vov(s), 1e-12);
    EXPECT_NEAR(pe.leverage_aflwy17(), oracle::lev_aflwy17(s), 1e-12);
    EXPECT_NEAR(pe.leverage_aj14(), oracle::lev_aj14(s), 1e-12);
    EXPECT_NEAR(pe.leverage_wm14(), oracle::lev_wm14(s), 1e-12);
    EXPECT_NEAR(pe.vov_aj14(), oracle::vov_aj14(s), 1e-12);
    EXPECT_NEAR(pe.vov_v15(false), oracle::vov_v15(s, false), 1e-12);
    EXPECT_NEAR(pe.vov_v15(true), oracle::vov_v15(s, true), 1e-12);
    EXPECT_NEAR(pe.vov_bv09(), oracle::vov_bv09(s), 1e-12);
    auto sq = [](double v) { return v * v; };
    EXPECT_NEAR(pe.leverage_functional(sq), oracle::lev_func(s, sq), 1e-12);

    EXPECT_NEAR(leverage_ecf(c.path, c.cfg).value, oracle::lev(s), 1e-12);
    EXPECT_NEAR(vov_ecf(c.path, c.cfg).value, oracle::vov(s), 1e-12);
    EXPECT_NEAR(vov_v15(c.path, c.cfg, true).value, oracle::vov_v15(s, true), 1e-12);
    if (oracle::vov(s) > 0)
      EXPECT_NEAR(leverage_correlation(c.path, c.cfg).value, oracle::lev_cor(s), 1e-9);
  }
}

TEST(LevVov, DispatchAgreesWithDirectCalls) {
  std::mt19937_64 rng(4);
  Case c = make_case(rng, 60, 6, 1.0, 0.2);
  const PathEstimators pe(c.path, c.cfg);
  for (EstimatorId id : all_estimators()) {
    if (id == EstimatorId::LevCor && pe.vov() <= 0) continue;
    const LevVovEstimate e = estimate(id, c.path, c.cfg);
    EXPECT_EQ(e.id, id);
    EXPECT_EQ(e.n, 60);
    EXPECT_EQ(e.k_n, 6);
    EXPECT_EQ(e.value, pe.value(id));
  }
  EXPECT_EQ(pe.value(EstimatorId::LevFunc), pe.leverage());
}

TEST(LevVov, ShiftInvarianceIsExact) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 50 + rep;
    const auto x = dyadic_levels(rng, n);
    auto y = x;
    const double c = std::ldexp(static_cast<double>(rep * 12345 - 77777), -12);
    for (auto& v : y) v += c;
    EstimatorConfig cfg;
    cfg.k_n = 3 + rep % 5;
    cfg.alpha = 0.01;
    const PricePath px(x, 1.0 / n), py(y, 1.0 / n);
    const PathEstimators a(px, cfg), b(py, cfg);
    for (EstimatorId id : all_estimators()) {
      if (id == EstimatorId::LevCor) continue;
      EXPECT_EQ(a.value(id), b.value(id)) << to_string(id);
    }
  }
}

TEST(LevVov, SignFlipNegatesLeverageAndKeepsVov) {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 64;
    const auto x = dyadic_levels(rng, n);
    auto y = x;
    for (auto& v : y) v = -v;
    EstimatorConfig cfg;
    cfg.k_n = 5;
    cfg.alpha = 0.01;
    const PricePath px(x, 1.0 / n), py(y, 1.0 / n);
    const PathEstimators a(px, cfg), b(py, cfg);
    for (EstimatorId id : all_estimators()) {
      if (id == EstimatorId::LevCor) continue;
      if (is_leverage(id))
        EXPECT_EQ(a.value(id), -b.value(id)) << to_string(id);
      else
        EXPECT_EQ(a.value(id), b.value(id)) << to_string(id);
    }
  }
}

TEST(LevVov, ConstantPathGivesZeros) {
  const PricePath p(std::vector<double>(41, 4.2), 0.025);
  EstimatorConfig cfg;
  cfg.k_n = 4;
  cfg.alpha = 1.0;
  const PathEstimators pe(p, cfg);
  for (EstimatorId id : all_estimators()) {
    if (id == EstimatorId::LevCor) {
      EXPECT_THROW(pe.value(id), UndefinedStatistic);
      continue;
    }
    EXPECT_EQ(pe.value(id), 0.0) << to_string(id);
  }
}

TEST(LevVov, IdentityFunctionalEqualsLeverage) {
  std::mt19937_64 rng(12);
  Case c = make_case(rng, 80, 7, 1.0, 0.1);
  const auto e = leverage_functional(c.path, c.cfg, [](double v) { return v; });
  EXPECT_EQ(e.id, EstimatorId::LevFunc);
  EXPECT_EQ(e.value, leverage_ecf(c.path, c.cfg).value);
}

TEST(LevVov, NegativeVovIsFlaggedNotClamped) {
  // Large k with tiny spot differences leaves only the negative bias correction.
  std::vector<double> r(40);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (i % 2 ? 1 : -1) * 0.05;
  const PricePath p = PricePath::from_returns(r, 0.025);
  EstimatorConfig cfg;
  cfg.k_n = 4;
  const auto e = vov_ecf(p, cfg);
  EXPECT_LT(e.value, 0.0);
  EXPECT_TRUE(e.debias_negative);
  const auto l = leverage_ecf(p, cfg);
  EXPECT_FALSE(l.debias_negative);
}
