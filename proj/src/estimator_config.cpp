#include "ecfvol/estimator_config.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "ecfvol/error.hpp"
#include "ecfvol/spot_vol.hpp"

namespace ecfvol {

Exponent Exponent::parse(const std::string& text) {
  auto fail = [&] { return ParameterError("cannot parse exponent '" + text + "'"); };
  Exponent e;
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const char* b = text.data();
    auto r1 = std::from_chars(b, b + slash, e.num);
    auto r2 = std::from_chars(b + slash + 1, b + text.size(), e.den);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || r1.ptr != b + slash ||
        r2.ptr != b + text.size() || e.den <= 0)
      throw fail();
  } else {
    // Decimal: digits after the point give the power-of-ten denominator.
    const auto dot = text.find('.');
    std::string digits = text;
    long den = 1;
    if (dot != std::string::npos) {
      const std::size_t frac = text.size() - dot - 1;
      if (frac > 9) throw fail();
      digits.erase(dot, 1);
      for (std::size_t k = 0; k < frac; ++k) den *= 10;
    }
    long num = 0;
    auto r = std::from_chars(digits.data(), digits.data() + digits.size(), num);
    if (digits.empty() || r.ec != std::errc{} || r.ptr != digits.data() + digits.size())
      throw fail();
    e.num = num;
    e.den = den;
  }
  const long g = std::gcd(e.num, e.den);
  if (g > 1) {
    e.num /= g;
    e.den /= g;
  }
  return e;
}

double Exponent::min_with_complement() const noexcept {
  return at_most_half() ? value() : 1.0 - value();
}

std::string Exponent::str() const { return std::to_string(num) + "/" + std::to_string(den); }

EstimatorConfig EstimatorConfig::monte_carlo() {
  EstimatorConfig c;
  c.u = 1.0;
  c.b = {1, 2};
  c.kappa = 1.0;
  return c;
}

EstimatorConfig EstimatorConfig::empirical() {
  EstimatorConfig c;
  c.u = 1.0;
  c.b = {11, 20};
  c.kappa = 2.0;
  return c;
}

void EstimatorConfig::validate() const {
  if (u_rule == FrequencyRule::Fixed && !(u > 0.0 && std::isfinite(u)))
    throw ParameterError("u must be positive");
  if (!(b.num > 0 && b.num < b.den)) throw ParameterError("b must lie in (0,1), got " + b.str());
  if (!(kappa > 0.0 && std::isfinite(kappa))) throw ParameterError("kappa must be positive");
  if (k_n && *k_n < 1) throw ParameterError("k_n must be at least 1");
  if (alpha && !(*alpha > 0.0)) throw ParameterError("alpha must be positive");
  if (!(alpha_multiplier > 0.0)) throw ParameterError("alpha multiplier must be positive");
  if (!(omega > 0.0 && omega < 0.5)) throw ParameterError("omega must lie in (0, 1/2)");
}

int window_length(int n, double kappa, const Exponent& b) {
  return static_cast<int>(std::floor(kappa * std::pow(static_cast<double>(n), b.value())));
}

ResolvedConfig resolve(const PricePath& path, const EstimatorConfig& cfg) {
  cfg.validate();
  ResolvedConfig rc;
  rc.n = path.n();
  rc.delta_n = path.delta_n();
  rc.horizon = path.horizon();
  rc.kappa = cfg.kappa;
  rc.b = cfg.b;
  rc.omega = cfg.omega;
  rc.k_n = cfg.k_n ? *cfg.k_n : window_length(rc.n, cfg.kappa, cfg.b);
  if (rc.k_n < 1) throw ParameterError("k_n must be at least 1");
  if (rc.k_n > rc.n / 2 - 1)
    throw WindowError("k_n = " + std::to_string(rc.k_n) + " outside [1, floor(n/2)-1] for n = " +
                         std::to_string(rc.n));

  const bool need_bv = cfg.u_rule == FrequencyRule::DataDriven || !cfg.alpha;
  const double bv = need_bv ? bipower_variation(path) : 0.0;
  if (cfg.u_rule == FrequencyRule::DataDriven) {
    if (!(bv > 0.0)) throw DataError("data-driven u needs positive bipower variation");
    rc.u = std::pow(std::log(static_cast<double>(rc.n)), -1.0 / 40.0) / std::sqrt(bv);
  } else {
    rc.u = cfg.u;
  }
  rc.alpha = cfg.alpha ? *cfg.alpha : cfg.alpha_multiplier * std::sqrt(bv);
  rc.threshold = rc.alpha * std::pow(rc.delta_n, rc.omega);
  return rc;
}

}  // namespace ecfvol
