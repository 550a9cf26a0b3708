#include "ecfvol/lev_vov.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "ecfvol/error.hpp"
#include "ecfvol/inference.hpp"
#include "ecfvol/numeric.hpp"

namespace ecfvol {
namespace {

constexpr std::array<std::pair<EstimatorId, std::string_view>, 11> kNames{{
    {EstimatorId::LevOur, "LevOur"},
    {EstimatorId::LevAJ14, "LevAJ14"},
    {EstimatorId::LevWM14, "LevWM14"},
    {EstimatorId::LevAFLWY17, "LevAFLWY17"},
    {EstimatorId::LevCor, "LevCor"},
    {EstimatorId::LevFunc, "LevFunc"},
    {EstimatorId::VovOur, "VovOur"},
    {EstimatorId::VovAJ14, "VovAJ14"},
    {EstimatorId::VovV15, "VovV15"},
    {EstimatorId::VovV15Thr, "VovV15Thr"},
    {EstimatorId::VovBV09, "VovBV09"},
}};

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_debiased_vov(EstimatorId id) {
  return id == EstimatorId::VovOur || id == EstimatorId::VovAJ14 || id == EstimatorId::VovV15 ||
         id == EstimatorId::VovV15Thr;
}

}  // namespace

std::string_view to_string(EstimatorId id) {
  for (const auto& [k, name] : kNames)
    if (k == id) return name;
  return "unknown";
}

std::optional<EstimatorId> estimator_from_string(std::string_view name) {
  for (const auto& [k, s] : kNames)
    if (s == name) return k;
  return std::nullopt;
}

bool is_leverage(EstimatorId id) {
  switch (id) {
    case EstimatorId::LevOur:
    case EstimatorId::LevAJ14:
    case EstimatorId::LevWM14:
    case EstimatorId::LevAFLWY17:
    case EstimatorId::LevCor:
    case EstimatorId::LevFunc:
      return true;
    default:
      return false;
  }
}

const std::vector<EstimatorId>& all_estimators() {
  static const std::vector<EstimatorId> ids = [] {
    std::vector<EstimatorId> v;
    for (const auto& [k, s] : kNames) v.push_back(k);
    return v;
  }();
  return ids;
}

PathEstimators::PathEstimators(const PricePath& path, const EstimatorConfig& cfg)
    : path_(path), cfg_(cfg), rc_(resolve(path, cfg)), spot_(path, rc_) {}

double PathEstimators::plain_forward(int i) const {
  if (plain_.empty()) {
    plain_.resize(static_cast<std::size_t>(rc_.n - rc_.k_n + 1));
    for (int r = 0; r <= rc_.n - rc_.k_n; ++r)
      plain_[static_cast<std::size_t>(r)] =
          detail::realized_window(path_.returns(), r + 1, rc_.k_n, rc_.delta_n, kInf);
  }
  return plain_[static_cast<std::size_t>(i)];
}

double PathEstimators::trunc_forward(int i) const {
  if (trunc_.empty()) {
    trunc_.resize(static_cast<std::size_t>(rc_.n - rc_.k_n + 1));
    for (int r = 0; r <= rc_.n - rc_.k_n; ++r)
      trunc_[static_cast<std::size_t>(r)] =
          detail::realized_window(path_.returns(), r + 1, rc_.k_n, rc_.delta_n, rc_.threshold);
  }
  return trunc_[static_cast<std::size_t>(i)];
}

double PathEstimators::leverage() const {
  const int n = rc_.n, k = rc_.k_n;
  KahanSum acc;
  for (int i = k + 1; i <= n - k; ++i)
    acc.add(path_.increment(i) * (spot_.forward(i) - spot_.backward(i)));
  return acc.value();
}

double PathEstimators::vov() const {
  const int n = rc_.n, k = rc_.k_n;
  const double kd = k;
  KahanSum acc;
  for (int i = k + 1; i <= n - k; ++i) {
    const double d = spot_.forward(i) - spot_.backward(i);
    acc.add(3.0 / (2.0 * kd) * d * d - 3.0 / (kd * kd) * h1(rc_.u, spot_.forward(i)));
  }
  return acc.value();
}

double PathEstimators::leverage_functional(const ScalarFn& f) const {
  const int n = rc_.n, k = rc_.k_n;
  KahanSum acc;
  for (int i = k + 1; i <= n - k; ++i)
    acc.add(path_.increment(i) * (f(spot_.forward(i)) - f(spot_.backward(i))));
  return acc.value();
}

double PathEstimators::leverage_correlation() const {
  const double lev = leverage();
  const double vv = vov();
  KahanSum iv;
  for (int i = 0; i <= rc_.n - rc_.k_n; ++i) iv.add(spot_.forward(i));
  const double ivv = rc_.delta_n * iv.value();
  if (!(ivv > 0.0)) throw UndefinedStatistic("integrated_variance", ivv);
  if (!(vv > 0.0)) throw UndefinedStatistic("vov", vv);
  return lev / (std::sqrt(ivv) * std::sqrt(vv));
}

double PathEstimators::leverage_aflwy17() const {
  const int n = rc_.n, k = rc_.k_n;
  KahanSum acc;
  for (int i = k + 1; i <= n - k; ++i) {
    const double r = path_.increment(i);
    if (std::abs(r) <= rc_.threshold) acc.add(r * (trunc_forward(i) - trunc_forward(i - k - 1)));
  }
  return acc.value();
}

double PathEstimators::leverage_aj14() const {
  const int n = rc_.n, k = rc_.k_n;
  const auto ret = path_.returns();
  KahanSum acc;
  for (int i = 1; i <= n - 2 * k + 1; ++i) {
    // X_{t_{i+2k-1}} - X_{t_{i-1}} as the sum of increments i..i+2k-1.
    KahanSum dx;
    for (int j = i; j <= i + 2 * k - 1; ++j) dx.add(ret[static_cast<std::size_t>(j - 1)]);
    acc.add(dx.value() * (plain_forward(i + k - 1) - plain_forward(i - 1)));
  }
  return acc.value() / k;
}

double PathEstimators::leverage_wm14() const {
  const int n = rc_.n, k = rc_.k_n;
  const auto ret = path_.returns();
  KahanSum acc;
  for (int j = 0; j <= n / k - 2; ++j) {
    KahanSum dx;
    for (int m = j * k + 1; m <= (j + 1) * k; ++m) dx.add(ret[static_cast<std::size_t>(m - 1)]);
    acc.add(dx.value() * (plain_forward((j + 1) * k) - plain_forward(j * k)));
  }
  return 2.0 * acc.value();
}

double PathEstimators::vov_aj14() const {
  const int n = rc_.n, k = rc_.k_n;
  const double kd = k;
  KahanSum acc;
  for (int i = 0; i <= n - 2 * k; ++i) {
    const double d = plain_forward(i + k) - plain_forward(i);
    const double s = plain_forward(i);
    acc.add(d * d - 4.0 / kd * s * s);
  }
  return 3.0 / (2.0 * kd) * acc.value();
}

double PathEstimators::vov_v15(bool truncated) const {
  const int n = rc_.n, k = rc_.k_n;
  const double kd = k;
  const double thr = truncated ? rc_.threshold : kInf;
  KahanSum acc;
  for (int i = 0; i <= n - 2 * k; ++i) {
    const double d = truncated ? trunc_forward(i + k) - trunc_forward(i)
                               : plain_forward(i + k) - plain_forward(i);
    const double q = detail::fourth_moment_window(path_.returns(), i + 1, k, rc_.delta_n, thr);
    acc.add(3.0 / (2.0 * kd) * d * d - 6.0 / (kd * kd) * q);
  }
  return acc.value();
}

double PathEstimators::vov_bv09() const {
  const int n = rc_.n, k = rc_.k_n;
  KahanSum acc;
  for (int i = 0; i <= n - k - 1; ++i) {
    const double d = trunc_forward(i + 1) - trunc_forward(i);
    acc.add(d * d);
  }
  return acc.value();
}

double PathEstimators::value(EstimatorId id) const {
  switch (id) {
    case EstimatorId::LevOur: return leverage();
    case EstimatorId::LevAJ14: return leverage_aj14();
    case EstimatorId::LevWM14: return leverage_wm14();
    case EstimatorId::LevAFLWY17: return leverage_aflwy17();
    case EstimatorId::LevCor: return leverage_correlation();
    case EstimatorId::LevFunc: return leverage_functional([](double x) { return x; });
    case EstimatorId::VovOur: return vov();
    case EstimatorId::VovAJ14: return vov_aj14();
    case EstimatorId::VovV15: return vov_v15(false);
    case EstimatorId::VovV15Thr: return vov_v15(true);
    case EstimatorId::VovBV09: return vov_bv09();
  }
  throw ParameterError("unknown estimator id");
}

LevVovEstimate PathEstimators::estimate(EstimatorId id) const {
  LevVovEstimate e;
  e.id = id;
  e.value = value(id);
  e.cfg = cfg_;
  e.n = rc_.n;
  e.k_n = rc_.k_n;
  e.u = rc_.u;
  e.debias_negative = is_debiased_vov(id) && e.value < 0.0;
  return e;
}

LevVovEstimate estimate(EstimatorId id, const PricePath& path, const EstimatorConfig& cfg) {
  return PathEstimators(path, cfg).estimate(id);
}

LevVovEstimate leverage_ecf(const PricePath& path, const EstimatorConfig& cfg) {
  return estimate(EstimatorId::LevOur, path, cfg);
}

LevVovEstimate vov_ecf(const PricePath& path, const EstimatorConfig& cfg) {
  return estimate(EstimatorId::VovOur, path, cfg);
}

LevVovEstimate leverage_functional(const PricePath& path, const EstimatorConfig& cfg,
                                   const ScalarFn& f) {
  PathEstimators est(path, cfg);
  LevVovEstimate e = est.estimate(EstimatorId::LevOur);
  e.id = EstimatorId::LevFunc;
  e.value = est.leverage_functional(f);
  return e;
}

LevVovEstimate leverage_correlation(const PricePath& path, const EstimatorConfig& cfg) {
  return estimate(EstimatorId::LevCor, path, cfg);
}

LevVovEstimate leverage_aflwy17(const PricePath& path, const EstimatorConfig& cfg) {
  return estimate(EstimatorId::LevAFLWY17, path, cfg);
}

LevVovEstimate leverage_aj14(const PricePath& path, const EstimatorConfig& cfg) {
  return estimate(EstimatorId::LevAJ14, path, cfg);
}

LevVovEstimate leverage_wm14(const PricePath& path, const EstimatorConfig& cfg) {
  return estimate(EstimatorId::LevWM14, path, cfg);
}

LevVovEstimate vov_aj14(const PricePath& path, const EstimatorConfig& cfg) {
  return estimate(EstimatorId::VovAJ14, path, cfg);
}

LevVovEstimate vov_v15(const PricePath& path, const EstimatorConfig& cfg, bool truncated) {
  return estimate(truncated ? EstimatorId::VovV15Thr : EstimatorId::VovV15, path, cfg);
}

LevVovEstimate vov_bv09(const PricePath& path, const EstimatorConfig& cfg) {
  return estimate(EstimatorId::VovBV09, path, cfg);
}

}  // namespace ecfvol
