#include "ecfvol/spot_vol.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ecfvol/error.hpp"
#include "ecfvol/numeric.hpp"

namespace ecfvol {
namespace {

double cos_term(double u, double r, double sqrt_dn) { return std::cos(u * r / sqrt_dn); }

std::vector<double> cos_terms(std::span<const double> returns, double u, double delta_n) {
  const double sqrt_dn = std::sqrt(delta_n);
  std::vector<double> c(returns.size());
  for (std::size_t j = 0; j < returns.size(); ++j) c[j] = cos_term(u, returns[j], sqrt_dn);
  return c;
}

double ecf_at(const PricePath& path, int i, const EstimatorConfig& cfg, Direction dir) {
  const ResolvedConfig rc = resolve(path, cfg);
  check_window(i, rc.k_n, rc.n, dir);
  const int first = window_first(i, rc.k_n, dir);
  const double sqrt_dn = std::sqrt(rc.delta_n);
  std::vector<double> c(static_cast<std::size_t>(rc.k_n));
  for (int j = 0; j < rc.k_n; ++j) c[j] = cos_term(rc.u, path.increment(first + j), sqrt_dn);
  return ecf_from_cos_window(c, rc.u);
}

}  // namespace

int window_first(int i, int k_n, Direction dir) {
  return dir == Direction::Forward ? i + 1 : i - k_n;
}

void check_window(int i, int k_n, int n, Direction dir) {
  const bool ok = dir == Direction::Forward ? (i >= 0 && i <= n - k_n)
                                            : (i >= k_n + 1 && i <= n);
  if (!ok)
    throw WindowError(std::string(dir == Direction::Forward ? "forward" : "backward") +
                      " window at i = " + std::to_string(i) + " does not fit (n = " +
                      std::to_string(n) + ", k_n = " + std::to_string(k_n) + ")");
}

double ecf_from_cos_window(std::span<const double> cos_terms, double u) {
  const auto k = static_cast<double>(cos_terms.size());
  const double mean = kahan_sum(cos_terms) / k;
  if (mean <= 1.0 / std::sqrt(k)) return std::log(k) / (u * u);
  return -2.0 / (u * u) * std::log(std::min(mean, 1.0));
}

double ecf_spot_forward(const PricePath& path, int i, const EstimatorConfig& cfg) {
  return ecf_at(path, i, cfg, Direction::Forward);
}

double ecf_spot_backward(const PricePath& path, int i, const EstimatorConfig& cfg) {
  return ecf_at(path, i, cfg, Direction::Backward);
}

SpotCurve::SpotCurve(const PricePath& path, const ResolvedConfig& rc)
    : n_(rc.n), k_n_(rc.k_n), u_(rc.u) {
  const std::vector<double> c = cos_terms(path.returns(), rc.u, rc.delta_n);
  const std::span<const double> cs(c);
  fwd_.resize(static_cast<std::size_t>(n_ - k_n_ + 1));
  // Root i covers increments i+1..i+k, i.e. c[i..i+k-1].
  for (int i = 0; i <= n_ - k_n_; ++i)
    fwd_[static_cast<std::size_t>(i)] = ecf_from_cos_window(cs.subspan(i, k_n_), u_);
}

namespace detail {

double realized_window(std::span<const double> returns, int first, int k_n, double delta_n,
                       double threshold) {
  KahanSum acc;
  for (int j = 0; j < k_n; ++j) {
    const double r = returns[static_cast<std::size_t>(first - 1 + j)];
    if (std::abs(r) <= threshold) acc.add(r * r);
  }
  return acc.value() / (k_n * delta_n);
}

double fourth_moment_window(std::span<const double> returns, int first, int k_n, double delta_n,
                            double threshold) {
  KahanSum acc;
  for (int j = 0; j < k_n; ++j) {
    const double r = returns[static_cast<std::size_t>(first - 1 + j)];
    if (std::abs(r) <= threshold) {
      const double r2 = r * r;
      acc.add(r2 * r2);
    }
  }
  return acc.value() / (3.0 * k_n * delta_n * delta_n);
}

}  // namespace detail

double plain_spot(const PricePath& path, int i, const EstimatorConfig& cfg, Direction dir) {
  const ResolvedConfig rc = resolve(path, cfg);
  check_window(i, rc.k_n, rc.n, dir);
  return detail::realized_window(path.returns(), window_first(i, rc.k_n, dir), rc.k_n, rc.delta_n,
                                 std::numeric_limits<double>::infinity());
}

double truncated_spot(const PricePath& path, int i, const EstimatorConfig& cfg, Direction dir) {
  const ResolvedConfig rc = resolve(path, cfg);
  check_window(i, rc.k_n, rc.n, dir);
  return detail::realized_window(path.returns(), window_first(i, rc.k_n, dir), rc.k_n, rc.delta_n,
                                 rc.threshold);
}

double bipower_variation(const PricePath& path) {
  const auto r = path.returns();
  if (r.size() < 2) throw DataError("bipower variation needs n >= 2");
  KahanSum acc;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) acc.add(std::abs(r[i]) * std::abs(r[i + 1]));
  return std::numbers::pi / 2.0 * acc.value();
}

double fourth_moment(const PricePath& path, int i, const EstimatorConfig& cfg, bool truncated) {
  const ResolvedConfig rc = resolve(path, cfg);
  check_window(i, rc.k_n, rc.n, Direction::Forward);
  const double thr = truncated ? rc.threshold : std::numeric_limits<double>::infinity();
  return detail::fourth_moment_window(path.returns(), i + 1, rc.k_n, rc.delta_n, thr);
}

}  // namespace ecfvol
