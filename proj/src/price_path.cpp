#include "ecfvol/price_path.hpp"

#include <cmath>

#include "ecfvol/error.hpp"

namespace ecfvol {

PricePath::PricePath(std::vector<double> log_prices, double delta_n)
    : log_prices_(std::move(log_prices)), delta_n_(delta_n) {
  if (log_prices_.size() < 2) throw DataError("a price path needs at least two observations");
  if (!(delta_n_ > 0.0) || !std::isfinite(delta_n_))
    throw DataError("delta_n must be positive and finite");
  returns_.resize(log_prices_.size() - 1);
  for (std::size_t i = 0; i + 1 < log_prices_.size(); ++i) {
    if (!std::isfinite(log_prices_[i + 1]) || !std::isfinite(log_prices_[i]))
      throw DataError("non-finite log-price at index " + std::to_string(i));
    returns_[i] = log_prices_[i + 1] - log_prices_[i];
  }
}

PricePath PricePath::from_returns(std::span<const double> returns, double delta_n, double x0) {
  std::vector<double> lp(returns.size() + 1);
  lp[0] = x0;
  for (std::size_t i = 0; i < returns.size(); ++i) lp[i + 1] = lp[i] + returns[i];
  PricePath p(std::move(lp), delta_n);
  // Keep the increments bit-exact rather than re-deriving them from rounded levels.
  p.returns_.assign(returns.begin(), returns.end());
  return p;
}

}  // namespace ecfvol
