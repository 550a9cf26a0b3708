#include "ecfvol/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "ecfvol/error.hpp"

namespace ecfvol {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ParameterError("config key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ParameterError("config key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

int time_of_day(const std::string& key, const std::string& v) {
  if (v.find(':') == std::string::npos) return static_cast<int>(to_long(key, v));
  int parts[3] = {0, 0, 0};
  std::size_t start = 0;
  int idx = 0;
  while (start <= v.size() && idx < 3) {
    const auto colon = v.find(':', start);
    const std::string piece = v.substr(start, colon == std::string::npos ? std::string::npos
                                                                        : colon - start);
    parts[idx++] = static_cast<int>(to_long(key, piece));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  return parts[0] * 3600 + parts[1] * 60 + parts[2];
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config c;
  std::string line, section;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParameterError("config line " + std::to_string(line_no) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty())
      throw ParameterError("config line " + std::to_string(line_no) + ": empty key");
    c.data_[section][key] = value;
  }
  return c;
}

Config Config::load(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ParameterError("cannot open config file '" + file + "'");
  return parse(in);
}

bool Config::has(const std::string& section, const std::string& key) const {
  return get(section, key).has_value();
}

std::optional<std::string> Config::get(const std::string& section, const std::string& key) const {
  const auto s = data_.find(section);
  if (s == data_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  const auto v = get(section, key);
  return v ? to_double(section + "." + key, *v) : fallback;
}

long Config::get_long(const std::string& section, const std::string& key, long fallback) const {
  const auto v = get(section, key);
  return v ? to_long(section + "." + key, *v) : fallback;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

std::vector<std::string> Config::get_list(const std::string& section,
                                          const std::string& key) const {
  std::vector<std::string> out;
  const auto v = get(section, key);
  if (!v) return out;
  std::size_t start = 0;
  while (start <= v->size()) {
    const auto comma = v->find(',', start);
    const std::string item =
        trim(v->substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  data_[section][key] = value;
}

void Config::check_keys(const std::string& section, const std::set<std::string>& allowed) const {
  const auto s = data_.find(section);
  if (s == data_.end()) return;
  for (const auto& [k, v] : s->second)
    if (!allowed.count(k)) throw ParameterError("unknown config key '" + section + "." + k + "'");
}

ModelParams model_from_config(const Config& c, ModelParams p) {
  c.check_keys("model", {"x0", "sigma2_0", "v", "zeta", "theta", "eta", "rho", "gamma", "beta",
                         "lambda_cp", "jump_sd"});
  p.x0 = c.get_double("model", "x0", p.x0);
  p.sigma2_0 = c.get_double("model", "sigma2_0", p.sigma2_0);
  p.v = c.get_double("model", "v", p.v);
  p.zeta = c.get_double("model", "zeta", p.zeta);
  p.theta = c.get_double("model", "theta", p.theta);
  p.eta = c.get_double("model", "eta", p.eta);
  p.rho = c.get_double("model", "rho", p.rho);
  p.gamma = c.get_double("model", "gamma", p.gamma);
  p.beta = c.get_double("model", "beta", p.beta);
  p.lambda_cp = c.get_double("model", "lambda_cp", p.lambda_cp);
  p.jump_sd = c.get_double("model", "jump_sd", p.jump_sd);
  p.validate();
  return p;
}

EstimatorConfig estimator_from_config(const Config& c, EstimatorConfig e) {
  c.check_keys("estimator", {"u", "u_rule", "b", "kappa", "k_n", "alpha_multiplier", "alpha",
                             "omega", "estimators", "alpha_level"});
  e.u = c.get_double("estimator", "u", e.u);
  if (const auto r = c.get("estimator", "u_rule")) {
    if (*r == "fixed")
      e.u_rule = FrequencyRule::Fixed;
    else if (*r == "data-driven")
      e.u_rule = FrequencyRule::DataDriven;
    else
      throw ParameterError("estimator.u_rule must be 'fixed' or 'data-driven'");
  }
  if (const auto b = c.get("estimator", "b")) e.b = Exponent::parse(*b);
  e.kappa = c.get_double("estimator", "kappa", e.kappa);
  if (c.has("estimator", "k_n")) e.k_n = static_cast<int>(c.get_long("estimator", "k_n", 0));
  e.alpha_multiplier = c.get_double("estimator", "alpha_multiplier", e.alpha_multiplier);
  if (c.has("estimator", "alpha")) e.alpha = c.get_double("estimator", "alpha", 0.0);
  e.omega = c.get_double("estimator", "omega", e.omega);
  e.validate();
  return e;
}

SessionSpec session_from_config(const Config& c, SessionSpec s) {
  c.check_keys("session", {"open_time", "close_time", "grid_step", "utc_offset_seconds",
                           "exclusions", "sessions_per_unit"});
  if (const auto v = c.get("session", "open_time")) s.open_time = time_of_day("open_time", *v);
  if (const auto v = c.get("session", "close_time")) s.close_time = time_of_day("close_time", *v);
  s.grid_step = static_cast<int>(c.get_long("session", "grid_step", s.grid_step));
  s.utc_offset_seconds =
      static_cast<int>(c.get_long("session", "utc_offset_seconds", s.utc_offset_seconds));
  for (const auto& d : c.get_list("session", "exclusions")) s.exclusions.insert(parse_date(d));
  s.sessions_per_unit =
      static_cast<int>(c.get_long("session", "sessions_per_unit", s.sessions_per_unit));
  s.validate();
  return s;
}

ExperimentSpec experiment_from_config(const Config& c, ExperimentSpec s) {
  c.check_keys("experiment", {"name", "mode", "n", "horizon", "reps", "estimators",
                              "kappa_rule", "base_seed", "hist_bins"});
  s.name = c.get_string("experiment", "name", s.name);
  if (const auto m = c.get("experiment", "mode")) s.mode = experiment_mode_from_string(*m);
  s.n = static_cast<int>(c.get_long("experiment", "n", s.n));
  s.horizon = c.get_double("experiment", "horizon", s.horizon);
  s.reps = static_cast<int>(c.get_long("experiment", "reps", s.reps));
  if (c.has("experiment", "estimators")) {
    s.estimators.clear();
    for (const auto& name : c.get_list("experiment", "estimators")) {
      const auto id = estimator_from_string(name);
      if (!id) throw ParameterError("unknown estimator '" + name + "'");
      s.estimators.push_back(*id);
    }
  }
  if (const auto k = c.get("experiment", "kappa_rule")) {
    if (*k == "fixed")
      s.kappa_rule = KappaRule::Fixed;
    else if (*k == "pilot-opt")
      s.kappa_rule = KappaRule::PilotOpt;
    else
      throw ParameterError("experiment.kappa_rule must be 'fixed' or 'pilot-opt'");
  }
  if (c.has("experiment", "base_seed"))
    s.base_seed = static_cast<std::uint64_t>(c.get_long("experiment", "base_seed", 0));
  s.hist_bins = static_cast<int>(c.get_long("experiment", "hist_bins", s.hist_bins));
  s.model = model_from_config(c, s.model);
  s.cfg = estimator_from_config(c, s.cfg);
  s.validate();
  return s;
}

}  // namespace ecfvol
