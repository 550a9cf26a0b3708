// ecfvol command-line front end.
//
// Exit codes: 0 success, 2 usage/config error, 3 data error, 4 undefined statistic.
// stdout carries only the path of the main artifact; diagnostics go to stderr.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ecfvol/config.hpp"
#include "ecfvol/error.hpp"
#include "ecfvol/inference.hpp"
#include "ecfvol/ingest.hpp"
#include "ecfvol/lev_vov.hpp"
#include "ecfvol/mc_harness.hpp"
#include "ecfvol/model_sim.hpp"
#include "ecfvol/serialize.hpp"
#include "ecfvol/version.hpp"

namespace fs = std::filesystem;
using namespace ecfvol;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kDataError = 3, kUndefined = 4 };

struct Common {
  std::string config_file;
  std::string preset;
  std::string out_dir = "ecfvol-out";
  std::optional<std::uint64_t> seed;
};

Config load_config(const Common& c) {
  return c.config_file.empty() ? Config{} : Config::load(c.config_file);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw DataError("cannot write " + p.string());
  return f;
}

void write_json(const fs::path& p, const Json& j) { open_out(p) << j.dump(2) << "\n"; }

void write_manifest(const fs::path& dir, const std::string& command, const Common& c,
                    const Json& resolved, const std::vector<std::string>& artifacts,
                    const std::vector<std::string>& argv) {
  Json m;
  m["tool"] = "ecfvol";
  m["version"] = kVersion;
  m["command"] = command;
  m["argv"] = argv;
  m["config_file"] = c.config_file.empty() ? Json(nullptr) : Json(c.config_file);
  m["preset"] = c.preset.empty() ? Json(nullptr) : Json(c.preset);
  m["resolved"] = resolved;
  m["artifacts"] = artifacts;
  write_json(dir / "run-manifest.json", m);
}

PricePath load_path(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open input '" + file + "'");
  return read_path_csv(in);
}

EstimatorConfig estimator_preset(const std::string& name) {
  if (name.empty() || name == "monte-carlo") return EstimatorConfig::monte_carlo();
  if (name == "empirical") return EstimatorConfig::empirical();
  throw ParameterError("unknown estimator preset '" + name + "' (monte-carlo, empirical)");
}

std::string input_file(const std::string& flag, const Config& cfg) {
  std::string f = flag.empty() ? cfg.get_string("input", "path", "") : flag;
  if (f.empty()) throw ParameterError("no input file given (--input or [input] path)");
  return f;
}

int cmd_simulate(const Common& c, const std::vector<std::string>& argv) {
  const Config cfg = load_config(c);
  cfg.check_keys("simulate", {"n", "horizon", "seed"});
  if (c.preset.empty() && c.config_file.empty())
    throw ParameterError("simulate needs --preset or --config");
  int n = 0;
  double horizon = 1.0;
  ModelParams model = ModelParams::baseline(-0.6, 0.3);
  if (c.preset == "paper-month") {
    n = 2730;
  } else if (c.preset == "paper-dense") {
    n = 2730 * 12;
  } else if (!c.preset.empty()) {
    throw ParameterError("unknown simulate preset '" + c.preset + "' (paper-month, paper-dense)");
  }
  n = static_cast<int>(cfg.get_long("simulate", "n", n));
  horizon = cfg.get_double("simulate", "horizon", horizon);
  if (n < 2) throw ParameterError("simulate.n must be given and at least 2");
  model = model_from_config(cfg, model);
  const std::uint64_t seed =
      c.seed ? *c.seed : static_cast<std::uint64_t>(cfg.get_long("simulate", "seed", 1));

  const SimulatedPath sp = simulate(model, n, horizon, seed);
  fs::create_directories(c.out_dir);
  const fs::path out = fs::path(c.out_dir) / "path.csv";
  {
    auto f = open_out(out);
    write_path_csv(f, sp);
  }
  Json truths;
  truths["leverage"] = sp.true_leverage;
  truths["vov"] = sp.true_vov;
  truths["integrated_variance"] = sp.integrated_variance;
  write_json(fs::path(c.out_dir) / "truth.json", truths);

  Json resolved;
  resolved["model"] = to_json(model);
  resolved["n"] = n;
  resolved["horizon"] = horizon;
  resolved["seed"] = seed;
  write_manifest(c.out_dir, "simulate", c, resolved, {"path.csv", "truth.json"}, argv);
  std::cout << out.string() << "\n";
  return kOk;
}

int cmd_ingest(const Common& c, const std::string& ticks_flag, const std::string& symbol,
               const std::vector<std::string>& argv) {
  const Config cfg = load_config(c);
  cfg.check_keys("input", {"path", "ticks", "symbol"});
  std::string ticks_file = ticks_flag.empty() ? cfg.get_string("input", "ticks", "") : ticks_flag;
  if (ticks_file.empty()) throw ParameterError("no tick file given (--ticks or [input] ticks)");
  const SessionSpec session = session_from_config(cfg, SessionSpec{});
  std::ifstream in(ticks_file);
  if (!in) throw DataError("cannot open tick file '" + ticks_file + "'");
  const TickSeries ticks =
      load_ticks(in, symbol.empty() ? cfg.get_string("input", "symbol", "") : symbol);
  const PricePath path = previous_tick_resample(ticks, session);

  fs::create_directories(c.out_dir);
  const fs::path out = fs::path(c.out_dir) / "path.csv";
  {
    auto f = open_out(out);
    write_path_csv(f, path);
  }
  Json resolved;
  resolved["ticks"] = ticks_file;
  resolved["symbol"] = ticks.symbol;
  resolved["tick_count"] = ticks.size();
  resolved["session"] = to_json(session);
  resolved["n"] = path.n();
  resolved["sessions"] = path.session_starts().size();
  resolved["session_starts"] =
      std::vector<int>(path.session_starts().begin(), path.session_starts().end());
  write_manifest(c.out_dir, "ingest", c, resolved, {"path.csv"}, argv);
  std::cout << out.string() << "\n";
  return kOk;
}

int cmd_estimate(const Common& c, const std::string& input_flag,
                 const std::vector<std::string>& estimator_names,
                 const std::vector<std::string>& argv) {
  const Config cfg = load_config(c);
  cfg.check_keys("input", {"path", "ticks", "symbol"});
  const std::string file = input_file(input_flag, cfg);
  const EstimatorConfig ecfg = estimator_from_config(cfg, estimator_preset(c.preset));
  const double alpha_level = cfg.get_double("estimator", "alpha_level", 0.05);

  std::vector<EstimatorId> ids;
  std::vector<std::string> names =
      estimator_names.empty() ? cfg.get_list("estimator", "estimators") : estimator_names;
  if (names.empty())
    for (auto id : all_estimators())
      if (id != EstimatorId::LevFunc) names.emplace_back(to_string(id));
  for (const auto& name : names) {
    const auto id = estimator_from_string(name);
    if (!id) throw ParameterError("unknown estimator '" + name + "'");
    ids.push_back(*id);
  }

  const PricePath path = load_path(file);
  const PathEstimators est(path, ecfg);
  Json out;
  out["input"] = file;
  out["n"] = path.n();
  out["delta_n"] = path.delta_n();
  out["config"] = to_json(ecfg);
  out["resolved"] = to_json(est.resolved());
  Json rows = Json::array();
  for (auto id : ids) {
    try {
      rows.push_back(to_json(est.estimate(id)));
    } catch (const UndefinedStatistic& e) {
      Json row;
      row["estimator"] = std::string(to_string(id));
      row["value"] = nullptr;
      row["undefined"] = e.component();
      rows.push_back(row);
    }
  }
  out["estimates"] = rows;
  out["variance_components"] = to_json(variance_components(est.spot(), est.resolved()));
  for (const auto& [key, fn] :
       {std::pair{"leverage_report", &lev_test}, std::pair{"vov_report", &vov_test}}) {
    try {
      out[key] = to_json(fn(path, ecfg, alpha_level));
    } catch (const UndefinedStatistic& e) {
      Json u;
      u["undefined"] = e.component();
      u["value"] = number_or_null(e.value());
      out[key] = u;
    }
  }

  fs::create_directories(c.out_dir);
  const fs::path target = fs::path(c.out_dir) / "estimates.json";
  write_json(target, out);
  Json resolved;
  resolved["input"] = file;
  resolved["estimator_config"] = to_json(ecfg);
  resolved["alpha_level"] = alpha_level;
  write_manifest(c.out_dir, "estimate", c, resolved, {"estimates.json"}, argv);
  std::cout << target.string() << "\n";
  return kOk;
}

int cmd_test(const Common& c, const std::string& input_flag, const std::string& target_name,
             std::optional<double> alpha_flag, const std::vector<std::string>& argv) {
  const Config cfg = load_config(c);
  cfg.check_keys("input", {"path", "ticks", "symbol"});
  const std::string file = input_file(input_flag, cfg);
  const EstimatorConfig ecfg = estimator_from_config(cfg, estimator_preset(c.preset));
  const double alpha_level =
      alpha_flag ? *alpha_flag : cfg.get_double("estimator", "alpha_level", 0.05);
  if (target_name != "leverage" && target_name != "vov")
    throw ParameterError("--target must be 'leverage' or 'vov'");

  const PricePath path = load_path(file);
  const EstimateReport r = target_name == "leverage" ? lev_test(path, ecfg, alpha_level)
                                                     : vov_test(path, ecfg, alpha_level);
  fs::create_directories(c.out_dir);
  const fs::path target = fs::path(c.out_dir) / "test.json";
  Json out = to_json(r);
  out["input"] = file;
  out["config"] = to_json(ecfg);
  write_json(target, out);
  Json resolved;
  resolved["input"] = file;
  resolved["target"] = target_name;
  resolved["estimator_config"] = to_json(ecfg);
  resolved["alpha_level"] = alpha_level;
  write_manifest(c.out_dir, "test", c, resolved, {"test.json"}, argv);
  std::cout << target.string() << "\n";
  return kOk;
}

int cmd_montecarlo(const Common& c, unsigned jobs, std::optional<int> reps, bool list,
                   const std::vector<std::string>& argv) {
  if (list) {
    for (const auto& name : preset_names()) std::cerr << name << "\n";
    return kOk;
  }
  const Config cfg = load_config(c);
  if (c.preset.empty() && c.config_file.empty())
    throw ParameterError("montecarlo needs --preset or --config");
  ExperimentSpec spec = c.preset.empty() ? ExperimentSpec{} : preset(c.preset);
  spec = experiment_from_config(cfg, spec);
  if (c.seed) spec.base_seed = *c.seed;
  if (reps) spec.reps = *reps;
  spec.validate();

  const McSummary summary = run_experiment(spec, jobs);
  write_artifacts(summary, c.out_dir);
  std::vector<std::string> artifacts{"summary.json", "samples.csv"};
  if (spec.mode != ExperimentMode::RelativeBias) {
    artifacts.insert(artifacts.end(), {"hist.csv", "qq.csv"});
    for (const auto& e : summary.estimators) {
      artifacts.push_back("hist_" + std::string(to_string(e.id)) + ".csv");
      artifacts.push_back("qq_" + std::string(to_string(e.id)) + ".csv");
    }
  }
  Json resolved;
  resolved["experiment"] = to_json(summary.spec);
  resolved["jobs"] = jobs;
  write_manifest(c.out_dir, "montecarlo", c, resolved, artifacts, argv);
  std::cout << (fs::path(c.out_dir) / "summary.json").string() << "\n";
  return kOk;
}

void add_common(CLI::App* sub, Common& c, bool with_seed) {
  sub->add_option("--config", c.config_file, "Config file ([section] key = value)");
  sub->add_option("--preset", c.preset, "Named preset");
  sub->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  if (with_seed) sub->add_option("--seed", c.seed, "Random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jump-robust leverage and volatility-of-volatility estimation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common common;
  std::string ticks, symbol, input, target = "leverage";
  std::vector<std::string> estimator_names;
  std::optional<double> alpha_level;
  unsigned jobs = 0;
  std::optional<int> reps;
  bool list = false;

  auto* sim = app.add_subcommand("simulate", "Simulate a log-price path");
  add_common(sim, common, true);

  auto* ing = app.add_subcommand("ingest", "Previous-tick resample a tick CSV onto a session grid");
  add_common(ing, common, false);
  ing->add_option("--ticks", ticks, "Tick CSV (timestamp,price)");
  ing->add_option("--symbol", symbol, "Symbol label");

  auto* est = app.add_subcommand("estimate", "Run estimators, plug-in variances and CIs on a path");
  add_common(est, common, false);
  est->add_option("--input", input, "Path CSV (t,logprice[,sigma2])");
  est->add_option("--estimators", estimator_names, "Estimator ids")->delimiter(',');

  auto* tst = app.add_subcommand("test", "Zero-leverage or zero vol-of-vol test");
  add_common(tst, common, false);
  tst->add_option("--input", input, "Path CSV (t,logprice[,sigma2])");
  tst->add_option("--target", target, "leverage or vov")->capture_default_str();
  tst->add_option("--alpha", alpha_level, "Significance level");

  auto* mc = app.add_subcommand("montecarlo", "Run a Monte Carlo experiment");
  add_common(mc, common, true);
  mc->add_option("--jobs", jobs, "Worker threads (0 = available parallelism)");
  mc->add_option("--reps", reps, "Override the replication count");
  mc->add_flag("--list", list, "List preset names on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version go to stdout with exit 0; real parse errors are usage errors.
    const int rc = app.exit(e, std::cout, std::cerr);
    return rc == 0 ? kOk : kConfigError;
  }

  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (sim->parsed()) return cmd_simulate(common, args);
    if (ing->parsed()) return cmd_ingest(common, ticks, symbol, args);
    if (est->parsed()) return cmd_estimate(common, input, estimator_names, args);
    if (tst->parsed()) return cmd_test(common, input, target, alpha_level, args);
    if (mc->parsed()) return cmd_montecarlo(common, jobs, reps, list, args);
  } catch (const UndefinedStatistic& e) {
    std::cerr << "ecfvol: " << e.what() << "\n";
    return kUndefined;
  } catch (const ParameterError& e) {
    std::cerr << "ecfvol: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "ecfvol: data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "ecfvol: " << e.what() << "\n";
    return kDataError;
  }
  return kConfigError;
}
