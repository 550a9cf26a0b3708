#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ecfvol/error.hpp"
#include "ecfvol/inference.hpp"
#include "ecfvol/mc_harness.hpp"

using namespace ecfvol;

namespace {

ExperimentSpec small_bias_spec() {
  ExperimentSpec s = preset("table2-desk");
  s.n = 600;
  s.reps = 24;
  s.estimators = {EstimatorId::LevOur, EstimatorId::LevAJ14, EstimatorId::LevCor,
                  EstimatorId::VovOur, EstimatorId::VovBV09};
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Moments, CompensatedAndNanAware) {
  const std::vector<double> xs{1.0, 2.0, std::nan(""), 4.0};
  const Moments m = sample_moments(xs);
  EXPECT_EQ(m.count, 3);
  EXPECT_DOUBLE_EQ(m.mean, 7.0 / 3);
  EXPECT_DOUBLE_EQ(m.variance, ((1 - 7.0 / 3) * (1 - 7.0 / 3) + (2 - 7.0 / 3) * (2 - 7.0 / 3) +
                                (4 - 7.0 / 3) * (4 - 7.0 / 3)) /
                                   2);
  EXPECT_DOUBLE_EQ(m.mse, 21.0 / 3);
}

TEST(Moments, KsDistance) {
  EXPECT_NEAR(ks_distance_normal(std::vector<double>{0.0}), 0.5, 1e-15);
  // A far-shifted sample sits almost entirely above the normal CDF.
  EXPECT_GT(ks_distance_normal(std::vector<double>{10, 11, 12}), 0.99);
}

TEST(Harness, SpecValidation) {
  ExperimentSpec s = small_bias_spec();
  s.reps = 0;
  EXPECT_THROW(s.validate(), ParameterError);
  s = small_bias_spec();
  s.estimators.clear();
  EXPECT_THROW(s.validate(), ParameterError);
  s = small_bias_spec();
  s.estimators = {EstimatorId::LevFunc};
  EXPECT_THROW(s.validate(), ParameterError);
  EXPECT_THROW(preset("no-such-preset"), ParameterError);
  for (const auto& name : preset_names()) EXPECT_NO_THROW(preset(name).validate()) << name;
  EXPECT_EQ(experiment_mode_from_string(to_string(ExperimentMode::CltFeasible)),
            ExperimentMode::CltFeasible);
}

TEST(Harness, MseIdentityHoldsOnEveryOutput) {
  const McSummary out = run_experiment(small_bias_spec(), 2);
  ASSERT_EQ(out.estimators.size(), 5u);
  for (const auto& e : out.estimators) {
    ASSERT_GT(e.count, 1);
    const double pop_var = e.variance * (e.count - 1) / e.count;
    EXPECT_NEAR(e.mse, e.mean * e.mean + pop_var, 1e-10 * (1 + e.mse));
    EXPECT_NEAR(e.sd * e.sd, e.variance, 1e-12 * (1 + e.variance));
    EXPECT_EQ(e.count + e.skipped, 24);
    EXPECT_EQ(e.samples.size(), 24u);
  }
}

TEST(Harness, ResultIndependentOfWorkerCount) {
  const ExperimentSpec s = small_bias_spec();
  const std::string one = summary_json(run_experiment(s, 1));
  const std::string four = summary_json(run_experiment(s, 4));
  EXPECT_EQ(one, four);
  ExperimentSpec f = preset("fea-clt-desk");
  f.n = 800;
  f.reps = 9;
  EXPECT_EQ(summary_json(run_experiment(f, 1)), summary_json(run_experiment(f, 3)));
}

TEST(Harness, ZeroTruthReplicationsAreSkipped) {
  ExperimentSpec s = small_bias_spec();
  s.model = ModelParams::baseline(0.0, 0.3);
  s.estimators = {EstimatorId::LevOur, EstimatorId::VovOur};
  s.reps = 5;
  const McSummary out = run_experiment(s, 1);
  EXPECT_EQ(out.at(EstimatorId::LevOur).count, 0);
  EXPECT_EQ(out.at(EstimatorId::LevOur).skipped, 5);
  EXPECT_EQ(out.at(EstimatorId::VovOur).count, 5);
}

TEST(Harness, InfeasibleCltWithoutVolOfVolIsCentred) {
  ExperimentSpec s = preset("table4-desk");
  s.model = ModelParams::baseline(-0.4, 0.0);
  s.kappa_rule = KappaRule::Fixed;
  s.reps = 200;
  const McSummary out = run_experiment(s, 0);
  const auto& e = out.at(EstimatorId::LevOur);
  EXPECT_EQ(*out.latent_leverage, 0.0);
  EXPECT_LT(std::abs(e.mean), 3.0 * std::sqrt(e.variance / e.count));
}

TEST(Harness, InfeasibleTheoreticalVarianceUsesTheLatentPath) {
  ExperimentSpec s = preset("table4-desk");
  s.reps = 4;
  s.kappa_rule = KappaRule::Fixed;
  const McSummary out = run_experiment(s, 1);
  const auto vol = simulate_variance(s.model, s.n, s.horizon, s.base_seed).grid_sigma2();
  const double kappa = 52.0 / std::sqrt(2730.0);
  EXPECT_NEAR(*out.at(EstimatorId::LevOur).theoretical_variance,
              leverage_limit_variance(vol, 1.0 / 2730, 1.0, kappa, {1, 2}, 0.2), 1e-12);
  // Doubling kappa from the optimum raises the leverage limiting variance.
  const double ko = leverage_kappa_opt(vol, 1.0 / 2730, 1.0, 0.2);
  EXPECT_GT(leverage_limit_variance(vol, 1.0 / 2730, 1.0, 2 * ko, {1, 2}, 0.2),
            leverage_limit_variance(vol, 1.0 / 2730, 1.0, ko, {1, 2}, 0.2));
}

TEST(Harness, FeasibleTailsGrowWithJumpActivity) {
  auto ks_for = [](double beta) {
    ExperimentSpec s = preset("fea-clt-jump-desk");
    s.model.beta = beta;
    s.reps = 150;
    return *run_experiment(s, 0).at(EstimatorId::LevOur).ks_distance;
  };
  EXPECT_GT(ks_for(1.5), ks_for(0.5));
}

TEST(Harness, ArtifactsAreWritten) {
  ExperimentSpec s = preset("fea-clt-desk");
  s.n = 800;
  s.reps = 12;
  s.hist_bins = 5;
  const McSummary out = run_experiment(s, 1);
  const auto dir = std::filesystem::temp_directory_path() / "ecfvol-artifacts-test";
  std::filesystem::remove_all(dir);
  write_artifacts(out, dir);
  const std::string summary = slurp(dir / "summary.json");
  EXPECT_EQ(summary, summary_json(out));
  const std::string samples = slurp(dir / "samples.csv");
  EXPECT_EQ(samples.substr(0, samples.find('\n')), "rep,seed,LevOur");
  EXPECT_EQ(count_lines(samples), 13);
  const std::string hist = slurp(dir / "hist.csv");
  EXPECT_EQ(hist.substr(0, hist.find('\n')), "bin_left,bin_right,count");
  EXPECT_EQ(count_lines(hist), 6);
  const std::string qq = slurp(dir / "qq.csv");
  EXPECT_EQ(qq.substr(0, qq.find('\n')), "theoretical_quantile,sample_quantile");
  EXPECT_EQ(count_lines(qq), 1 + out.at(EstimatorId::LevOur).count);
  EXPECT_TRUE(std::filesystem::exists(dir / "hist_LevOur.csv"));
  std::filesystem::remove_all(dir);
}
