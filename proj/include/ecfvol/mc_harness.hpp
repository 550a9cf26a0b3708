#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecfvol/estimator_config.hpp"
#include "ecfvol/lev_vov.hpp"
#include "ecfvol/model_sim.hpp"

namespace ecfvol {

enum class ExperimentMode { RelativeBias, CltInfeasible, CltFeasible };

std::string to_string(ExperimentMode mode);
ExperimentMode experiment_mode_from_string(const std::string& text);

enum class KappaRule {
  Fixed,     ///< use cfg.kappa
  PilotOpt,  ///< per path, kappa = kappa_opt_hat with cfg.kappa as the pilot
};

struct ExperimentSpec {
  std::string name = "custom";
  ModelParams model;
  int n = 2730;
  double horizon = 1.0;
  int reps = 300;
  std::vector<EstimatorId> estimators{EstimatorId::LevOur};
  EstimatorConfig cfg;
  ExperimentMode mode = ExperimentMode::RelativeBias;
  KappaRule kappa_rule = KappaRule::Fixed;
  std::uint64_t base_seed = 20240101;
  /// Histogram bins for the CLT modes.
  int hist_bins = 30;

  void validate() const;
};

struct EstimatorSummary {
  EstimatorId id = EstimatorId::LevOur;
  int count = 0;    ///< replications contributing
  int skipped = 0;  ///< zero truth, undefined statistic or too-short path
  // Relative-bias mode: moments of (est - truth) / truth.
  // CLT modes: moments of the standardized statistic.
  double mean = 0.0;
  double sd = 0.0;  ///< sample standard deviation (divisor count - 1)
  double mse = 0.0; ///< mean of squares
  double variance = 0.0;  ///< sample variance (divisor count - 1)
  std::optional<double> theoretical_variance;
  std::optional<double> ks_distance;
  std::optional<double> mean_kappa;
  std::vector<double> samples;  ///< in replication order; NaN where skipped
};

struct McSummary {
  ExperimentSpec spec;
  std::vector<EstimatorSummary> estimators;
  /// Truths on the fixed variance path (CLT modes).
  std::optional<double> latent_leverage;
  std::optional<double> latent_vov;

  const EstimatorSummary& at(EstimatorId id) const;
};

/// Runs the experiment with at most `jobs` worker threads (0 = hardware
/// concurrency). Replication k uses seed base_seed + k + 1; the fixed variance
/// path of the CLT modes uses base_seed. Aggregation runs in replication order,
/// so the result does not depend on `jobs`.
McSummary run_experiment(const ExperimentSpec& spec, unsigned jobs = 0);
McSummary run_relative_bias(const ExperimentSpec& spec, unsigned jobs = 0);
McSummary run_clt_infeasible(const ExperimentSpec& spec, unsigned jobs = 0);
McSummary run_clt_feasible(const ExperimentSpec& spec, unsigned jobs = 0);

/// Moments of a sample with compensated summation; NaNs are skipped.
struct Moments {
  int count = 0;
  double mean = 0.0;
  double variance = 0.0;  ///< divisor count - 1
  double mse = 0.0;       ///< mean of squares
};
Moments sample_moments(std::span<const double> xs);

/// Kolmogorov-Smirnov distance of the sample to N(0,1).
double ks_distance_normal(std::span<const double> xs);

/// Named desk-scale experiments.
const std::vector<std::string>& preset_names();
ExperimentSpec preset(const std::string& name);

/// Writes summary.json, samples.csv and (CLT modes) hist.csv, qq.csv into dir.
void write_artifacts(const McSummary& summary, const std::filesystem::path& dir);
std::string summary_json(const McSummary& summary);

}  // namespace ecfvol
