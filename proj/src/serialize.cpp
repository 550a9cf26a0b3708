#include "ecfvol/serialize.hpp"

#include <cmath>

namespace ecfvol {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

namespace {

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json optional_number(const std::optional<double>& v) {
  return v ? number_or_null(*v) : Json(nullptr);
}

}  // namespace

Json to_json(const ModelParams& p) {
  Json j;
  j["x0"] = p.x0;
  j["sigma2_0"] = p.sigma2_0;
  j["v"] = p.v;
  j["zeta"] = p.zeta;
  j["theta"] = p.theta;
  j["eta"] = p.eta;
  j["rho"] = p.rho;
  j["gamma"] = p.gamma;
  j["beta"] = p.beta;
  j["lambda_cp"] = p.lambda_cp;
  j["jump_sd"] = p.jump_sd;
  return j;
}

Json to_json(const EstimatorConfig& c) {
  Json j;
  j["u"] = c.u;
  j["u_rule"] = c.u_rule == FrequencyRule::Fixed ? "fixed" : "data-driven";
  j["b"] = c.b.str();
  j["kappa"] = c.kappa;
  j["k_n"] = optional_json(c.k_n);
  j["alpha_multiplier"] = c.alpha_multiplier;
  j["alpha"] = optional_json(c.alpha);
  j["omega"] = c.omega;
  return j;
}

Json to_json(const ResolvedConfig& c) {
  Json j;
  j["n"] = c.n;
  j["k_n"] = c.k_n;
  j["u"] = c.u;
  j["delta_n"] = c.delta_n;
  j["horizon"] = c.horizon;
  j["kappa"] = c.kappa;
  j["b"] = c.b.str();
  j["alpha"] = c.alpha;
  j["omega"] = c.omega;
  j["threshold"] = c.threshold;
  return j;
}

Json to_json(const LevVovEstimate& e) {
  Json j;
  j["estimator"] = std::string(to_string(e.id));
  j["value"] = number_or_null(e.value);
  j["n"] = e.n;
  j["k_n"] = e.k_n;
  j["u"] = e.u;
  j["debias_negative"] = e.debias_negative;
  return j;
}

Json to_json(const EstimateReport& r) {
  Json j;
  j["target"] = r.target;
  j["estimate"] = number_or_null(r.estimate);
  j["variance_hat"] = number_or_null(r.variance_hat);
  j["std_error"] = number_or_null(r.std_error);
  j["rate"] = r.rate;
  j["ci_low"] = number_or_null(r.ci_low);
  j["ci_high"] = number_or_null(r.ci_high);
  j["test_stat"] = number_or_null(r.test_stat);
  j["critical_value"] = r.critical_value;
  j["one_sided"] = r.one_sided;
  j["decision"] = to_string(r.decision);
  j["alpha_level"] = r.alpha_level;
  j["n"] = r.n;
  j["k_n"] = r.k_n;
  j["u"] = r.u;
  return j;
}

Json to_json(const VarianceComponents& v) {
  Json j;
  j["var_U_hat"] = number_or_null(v.var_U_hat);
  j["var_W_hat"] = number_or_null(v.var_W_hat);
  j["H1_hat"] = number_or_null(v.H1_hat);
  j["H2_hat"] = number_or_null(v.H2_hat);
  j["H3_hat"] = number_or_null(v.H3_hat);
  j["sigma2_h1_integral"] = number_or_null(v.sigma2_h1_integral);
  j["sigma2_h2_integral"] = number_or_null(v.sigma2_h2_integral);
  return j;
}

Json to_json(const SessionSpec& s) {
  Json j;
  j["open_time"] = s.open_time;
  j["close_time"] = s.close_time;
  j["grid_step"] = s.grid_step;
  j["utc_offset_seconds"] = s.utc_offset_seconds;
  j["exclusions"] = Json(std::vector<long>(s.exclusions.begin(), s.exclusions.end()));
  j["sessions_per_unit"] = s.sessions_per_unit;
  j["delta_n"] = s.delta_n();
  return j;
}

Json to_json(const ExperimentSpec& s) {
  Json j;
  j["name"] = s.name;
  j["mode"] = to_string(s.mode);
  j["n"] = s.n;
  j["horizon"] = s.horizon;
  j["reps"] = s.reps;
  Json ids = Json::array();
  for (auto id : s.estimators) ids.push_back(std::string(to_string(id)));
  j["estimators"] = ids;
  j["kappa_rule"] = s.kappa_rule == KappaRule::Fixed ? "fixed" : "pilot-opt";
  j["base_seed"] = s.base_seed;
  j["hist_bins"] = s.hist_bins;
  j["model"] = to_json(s.model);
  j["estimator_config"] = to_json(s.cfg);
  return j;
}

Json to_json(const EstimatorSummary& s) {
  Json j;
  j["estimator"] = std::string(to_string(s.id));
  j["count"] = s.count;
  j["skipped"] = s.skipped;
  j["mean"] = number_or_null(s.mean);
  j["sd"] = number_or_null(s.sd);
  j["mse"] = number_or_null(s.mse);
  j["variance"] = number_or_null(s.variance);
  j["theoretical_variance"] = optional_number(s.theoretical_variance);
  j["ks_distance"] = optional_number(s.ks_distance);
  j["mean_kappa"] = optional_number(s.mean_kappa);
  return j;
}

Json to_json(const McSummary& s) {
  Json j;
  j["experiment"] = to_json(s.spec);
  j["latent_leverage"] = optional_number(s.latent_leverage);
  j["latent_vov"] = optional_number(s.latent_vov);
  Json rows = Json::array();
  for (const auto& e : s.estimators) rows.push_back(to_json(e));
  j["estimators"] = rows;
  return j;
}

}  // namespace ecfvol
