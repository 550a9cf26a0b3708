#include "ecfvol/mc_harness.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "ecfvol/error.hpp"
#include "ecfvol/inference.hpp"
#include "ecfvol/numeric.hpp"
#include "ecfvol/serialize.hpp"

namespace ecfvol {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Per-replication output: one sample per estimator plus the kappa used.
struct RepResult {
  std::vector<double> samples;
  double kappa = kNaN;
};

/// Runs body(rep) for rep = 0..reps-1 on up to `jobs` threads. Results land in
/// per-rep slots. If any rep throws, the exception of the lowest failing rep
/// index is rethrown, so failures do not depend on scheduling either.
template <class Body>
std::vector<RepResult> run_reps(int reps, unsigned jobs, Body body) {
  std::vector<RepResult> out(static_cast<std::size_t>(reps));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(reps));
  unsigned workers = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(reps));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int rep = next++; rep < reps; rep = next++) {
      try {
        out[static_cast<std::size_t>(rep)] = body(rep);
      } catch (...) {
        errors[static_cast<std::size_t>(rep)] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::uint64_t rep_seed(const ExperimentSpec& spec, int rep) {
  return spec.base_seed + static_cast<std::uint64_t>(rep) + 1;
}

EstimatorSummary summarize(EstimatorId id, std::vector<double> samples) {
  EstimatorSummary s;
  s.id = id;
  const Moments m = sample_moments(samples);
  s.count = m.count;
  s.skipped = static_cast<int>(samples.size()) - m.count;
  s.mean = m.mean;
  s.variance = m.variance;
  s.sd = std::sqrt(m.variance);
  s.mse = m.mse;
  s.samples = std::move(samples);
  return s;
}

McSummary assemble(const ExperimentSpec& spec, const std::vector<RepResult>& reps) {
  McSummary out;
  out.spec = spec;
  for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
    std::vector<double> xs;
    xs.reserve(reps.size());
    for (const auto& r : reps) xs.push_back(r.samples[e]);
    out.estimators.push_back(summarize(spec.estimators[e], std::move(xs)));
  }
  std::vector<double> kappas;
  for (const auto& r : reps) kappas.push_back(r.kappa);
  const Moments km = sample_moments(kappas);
  if (km.count > 0)
    for (auto& e : out.estimators) e.mean_kappa = km.mean;
  return out;
}

double truth_for(EstimatorId id, const SimulatedPath& sp, const ModelParams& model) {
  if (id == EstimatorId::LevCor) return model.rho;
  return is_leverage(id) ? sp.true_leverage : sp.true_vov;
}

/// k_n / n^b: the kappa the limit theory sees for the resolved window.
double effective_kappa(const ResolvedConfig& rc) {
  return static_cast<double>(rc.k_n) / std::pow(static_cast<double>(rc.n), rc.b.value());
}

void check_clt_estimators(const ExperimentSpec& spec) {
  for (auto id : spec.estimators)
    if (id != EstimatorId::LevOur && id != EstimatorId::VovOur)
      throw ParameterError("CLT modes support LevOur and VovOur only, got " +
                           std::string(to_string(id)));
  if (spec.cfg.u_rule != FrequencyRule::Fixed)
    throw ParameterError("CLT modes need a fixed u");
}

}  // namespace

std::string to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::RelativeBias: return "relative-bias";
    case ExperimentMode::CltInfeasible: return "clt-infeasible";
    case ExperimentMode::CltFeasible: return "clt-feasible";
  }
  return "unknown";
}

ExperimentMode experiment_mode_from_string(const std::string& text) {
  for (auto m : {ExperimentMode::RelativeBias, ExperimentMode::CltInfeasible,
                 ExperimentMode::CltFeasible})
    if (to_string(m) == text) return m;
  throw ParameterError("unknown experiment mode '" + text + "'");
}

void ExperimentSpec::validate() const {
  model.validate();
  cfg.validate();
  if (reps < 1) throw ParameterError("reps must be at least 1");
  if (n < 4) throw ParameterError("n must be at least 4");
  if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
  if (estimators.empty()) throw ParameterError("estimator list is empty");
  if (hist_bins < 1) throw ParameterError("hist_bins must be at least 1");
  for (auto id : estimators)
    if (id == EstimatorId::LevFunc)
      throw ParameterError("LevFunc needs a user function and is not available in experiments");
  if (mode != ExperimentMode::RelativeBias) check_clt_estimators(*this);
}

const EstimatorSummary& McSummary::at(EstimatorId id) const {
  for (const auto& e : estimators)
    if (e.id == id) return e;
  throw ParameterError("estimator " + std::string(to_string(id)) + " not in summary");
}

Moments sample_moments(std::span<const double> xs) {
  Moments m;
  KahanSum sum, sq;
  for (double x : xs) {
    if (std::isnan(x)) continue;
    ++m.count;
    sum.add(x);
    sq.add(x * x);
  }
  if (m.count == 0) {
    m.mean = m.variance = m.mse = kNaN;
    return m;
  }
  m.mean = sum.value() / m.count;
  m.mse = sq.value() / m.count;
  if (m.count > 1) {
    KahanSum dev;
    for (double x : xs)
      if (!std::isnan(x)) dev.add((x - m.mean) * (x - m.mean));
    m.variance = dev.value() / (m.count - 1);
  }
  return m;
}

double ks_distance_normal(std::span<const double> xs) {
  std::vector<double> v;
  for (double x : xs)
    if (!std::isnan(x)) v.push_back(x);
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const boost::math::normal_distribution<> nd;
  const double m = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = boost::math::cdf(nd, v[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / m - f, f - static_cast<double>(i) / m});
  }
  return d;
}

McSummary run_relative_bias(const ExperimentSpec& spec, unsigned jobs) {
  spec.validate();
  auto reps = run_reps(spec.reps, jobs, [&](int rep) {
    const SimulatedPath sp = simulate(spec.model, spec.n, spec.horizon, rep_seed(spec, rep));
    const PricePath path = sp.price_path();
    const PathEstimators est(path, spec.cfg);
    RepResult r;
    for (auto id : spec.estimators) {
      const double truth = truth_for(id, sp, spec.model);
      double x = kNaN;
      if (truth != 0.0) {
        try {
          x = (est.value(id) - truth) / truth;
        } catch (const UndefinedStatistic&) {
        }
      }
      r.samples.push_back(x);
    }
    return r;
  });
  return assemble(spec, reps);
}

McSummary run_clt_infeasible(const ExperimentSpec& spec, unsigned jobs) {
  spec.validate();
  const LatentVolPath vol = simulate_variance(spec.model, spec.n, spec.horizon, spec.base_seed);
  const std::vector<double> grid = vol.grid_sigma2();
  const double dn = spec.horizon / spec.n;

  EstimatorConfig cfg = spec.cfg;
  if (spec.kappa_rule == KappaRule::PilotOpt) {
    cfg.kappa = leverage_kappa_opt(grid, dn, cfg.u, spec.model.eta);
    cfg.k_n.reset();
  }

  auto reps = run_reps(spec.reps, jobs, [&](int rep) {
    const SimulatedPath sp = resample_price(vol, spec.model, rep_seed(spec, rep));
    const PricePath path = sp.price_path();
    const PathEstimators est(path, cfg);
    const ResolvedConfig& rc = est.resolved();
    RepResult r;
    r.kappa = effective_kappa(rc);
    for (auto id : spec.estimators) {
      if (id == EstimatorId::LevOur)
        r.samples.push_back(leverage_rate(rc.n, rc.b) * (est.leverage() - sp.true_leverage));
      else
        r.samples.push_back(vov_rate(rc.n, rc.b) * (est.vov() - sp.true_vov));
    }
    return r;
  });

  McSummary out = assemble(spec, reps);
  out.spec.cfg = cfg;
  const SimulatedPath first = resample_price(vol, spec.model, rep_seed(spec, 0));
  out.latent_leverage = first.true_leverage;
  out.latent_vov = first.true_vov;
  const double kappa = *out.estimators.front().mean_kappa;
  for (auto& e : out.estimators) {
    const double tv =
        e.id == EstimatorId::LevOur
            ? leverage_limit_variance(grid, dn, cfg.u, kappa, cfg.b, spec.model.eta)
            : vov_limit_variance(grid, dn, cfg.u, kappa, cfg.b, spec.model.eta);
    e.theoretical_variance = tv;
    std::vector<double> z;
    for (double x : e.samples) z.push_back(x / std::sqrt(tv));
    e.ks_distance = ks_distance_normal(z);
  }
  return out;
}

McSummary run_clt_feasible(const ExperimentSpec& spec, unsigned jobs) {
  spec.validate();
  const LatentVolPath vol = simulate_variance(spec.model, spec.n, spec.horizon, spec.base_seed);

  auto reps = run_reps(spec.reps, jobs, [&](int rep) {
    const SimulatedPath sp = resample_price(vol, spec.model, rep_seed(spec, rep));
    const PricePath path = sp.price_path();
    RepResult r;
    r.samples.assign(spec.estimators.size(), kNaN);
    EstimatorConfig cfg = spec.cfg;
    if (spec.kappa_rule == KappaRule::PilotOpt) {
      // An undefined or out-of-range plug-in kappa leaves this replication undefined.
      try {
        cfg.kappa = kappa_opt_hat(path, spec.cfg);
      } catch (const UndefinedStatistic&) {
        return r;
      }
      cfg.k_n.reset();
      const int k = window_length(spec.n, cfg.kappa, cfg.b);
      if (k < 1 || k > spec.n / 2 - 1) return r;
    }
    const PathEstimators est(path, cfg);
    const ResolvedConfig& rc = est.resolved();
    r.kappa = cfg.kappa;
    const VarianceComponents vc = variance_components(est.spot(), rc);
    for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
      if (spec.estimators[e] == EstimatorId::LevOur) {
        if (vc.var_U_hat > 0.0)
          r.samples[e] = leverage_rate(rc.n, rc.b) * (est.leverage() - sp.true_leverage) /
                         std::sqrt(vc.var_U_hat);
      } else if (vc.var_W_hat > 0.0) {
        r.samples[e] =
            vov_rate(rc.n, rc.b) * (est.vov() - sp.true_vov) / std::sqrt(vc.var_W_hat);
      }
    }
    return r;
  });

  McSummary out = assemble(spec, reps);
  const SimulatedPath first = resample_price(vol, spec.model, rep_seed(spec, 0));
  out.latent_leverage = first.true_leverage;
  out.latent_vov = first.true_vov;
  for (auto& e : out.estimators) e.ks_distance = ks_distance_normal(e.samples);
  return out;
}

McSummary run_experiment(const ExperimentSpec& spec, unsigned jobs) {
  switch (spec.mode) {
    case ExperimentMode::RelativeBias: return run_relative_bias(spec, jobs);
    case ExperimentMode::CltInfeasible: return run_clt_infeasible(spec, jobs);
    case ExperimentMode::CltFeasible: return run_clt_feasible(spec, jobs);
  }
  throw ParameterError("unknown experiment mode");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "fea-clt-desk", "fea-clt-jump-desk", "table2-desk", "table3-desk", "table4-desk",
      "table5-desk"};
  return names;
}

ExperimentSpec preset(const std::string& name) {
  ExperimentSpec s;
  s.name = name;
  if (name == "table2-desk") {
    s.model = ModelParams::baseline(-0.6, 0.3);
    s.n = 2730;
    s.reps = 300;
    s.estimators = {EstimatorId::LevOur, EstimatorId::LevWM14, EstimatorId::LevAJ14,
                    EstimatorId::LevAFLWY17};
    s.cfg = EstimatorConfig::monte_carlo();
    s.cfg.u_rule = FrequencyRule::DataDriven;
    s.mode = ExperimentMode::RelativeBias;
  } else if (name == "table3-desk") {
    s.model = ModelParams::baseline(-0.2, 0.3);
    s.n = 2730 * 12;
    s.reps = 100;
    s.estimators = {EstimatorId::VovOur, EstimatorId::VovAJ14, EstimatorId::VovV15,
                    EstimatorId::VovV15Thr, EstimatorId::VovBV09};
    s.cfg = EstimatorConfig::monte_carlo();
    s.cfg.u_rule = FrequencyRule::DataDriven;
    s.mode = ExperimentMode::RelativeBias;
  } else if (name == "table4-desk" || name == "table5-desk") {
    s.model = ModelParams::baseline(-0.4, 0.2);
    s.n = name == "table4-desk" ? 2730 : 2730 * 12;
    s.reps = 300;
    s.estimators = {name == "table4-desk" ? EstimatorId::LevOur : EstimatorId::VovOur};
    s.cfg = EstimatorConfig::monte_carlo();
    s.kappa_rule = KappaRule::PilotOpt;
    s.mode = ExperimentMode::CltInfeasible;
  } else if (name == "fea-clt-desk" || name == "fea-clt-jump-desk") {
    s.model = name == "fea-clt-desk" ? ModelParams::baseline(-0.4, 0.2)
                                     : ModelParams::baseline(-0.4, 0.2, 0.01, 0.5);
    s.n = 2730;
    s.reps = 300;
    s.estimators = {EstimatorId::LevOur};
    s.cfg = EstimatorConfig::monte_carlo();
    s.mode = ExperimentMode::CltFeasible;
  } else {
    throw ParameterError("unknown preset '" + name + "'");
  }
  return s;
}

std::string summary_json(const McSummary& summary) { return to_json(summary).dump(2) + "\n"; }

namespace {

void write_hist(std::ostream& out, const std::vector<double>& xs, int bins) {
  out << "bin_left,bin_right,count\n";
  std::vector<double> v;
  for (double x : xs)
    if (!std::isnan(x)) v.push_back(x);
  if (v.empty()) return;
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
  const double w = (hi - lo) / bins;
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (double x : v) {
    int b = static_cast<int>((x - lo) / w);
    counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
  }
  for (int b = 0; b < bins; ++b)
    out << Json(lo + b * w).dump() << ',' << Json(lo + (b + 1) * w).dump() << ','
        << counts[static_cast<std::size_t>(b)] << '\n';
}

void write_qq(std::ostream& out, const std::vector<double>& xs) {
  out << "theoretical_quantile,sample_quantile\n";
  std::vector<double> v;
  for (double x : xs)
    if (!std::isnan(x)) v.push_back(x);
  std::sort(v.begin(), v.end());
  const boost::math::normal_distribution<> nd;
  const double m = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out << Json(boost::math::quantile(nd, (static_cast<double>(i) + 0.5) / m)).dump() << ','
        << Json(v[i]).dump() << '\n';
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw DataError("cannot write " + p.string());
  return f;
}

}  // namespace

void write_artifacts(const McSummary& summary, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  open_out(dir / "summary.json") << summary_json(summary);

  auto samples = open_out(dir / "samples.csv");
  samples << "rep,seed";
  for (const auto& e : summary.estimators) samples << ',' << to_string(e.id);
  samples << '\n';
  for (int rep = 0; rep < summary.spec.reps; ++rep) {
    samples << rep << ',' << summary.spec.base_seed + static_cast<std::uint64_t>(rep) + 1;
    for (const auto& e : summary.estimators) {
      const double x = e.samples[static_cast<std::size_t>(rep)];
      samples << ',';
      if (!std::isnan(x)) samples << Json(x).dump();
    }
    samples << '\n';
  }

  if (summary.spec.mode == ExperimentMode::RelativeBias) return;
  // hist.csv / qq.csv carry the first estimator; every estimator also gets its own pair.
  for (std::size_t e = 0; e < summary.estimators.size(); ++e) {
    const auto& est = summary.estimators[e];
    std::vector<double> z = est.samples;
    if (est.theoretical_variance)
      for (double& x : z) x /= std::sqrt(*est.theoretical_variance);
    const std::string tag(to_string(est.id));
    auto h = open_out(dir / ("hist_" + tag + ".csv"));
    write_hist(h, z, summary.spec.hist_bins);
    auto q = open_out(dir / ("qq_" + tag + ".csv"));
    write_qq(q, z);
    if (e == 0) {
      auto h0 = open_out(dir / "hist.csv");
      write_hist(h0, z, summary.spec.hist_bins);
      auto q0 = open_out(dir / "qq.csv");
      write_qq(q0, z);
    }
  }
}

}  // namespace ecfvol
