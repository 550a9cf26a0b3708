#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecfvol/estimator_config.hpp"
#include "ecfvol/ingest.hpp"
#include "ecfvol/mc_harness.hpp"
#include "ecfvol/model_sim.hpp"

namespace ecfvol {

/// Flat "[section]" / "key = value" file. '#' starts a comment; values may be
/// double-quoted. Keys outside any section land in section "".
class Config {
 public:
  static Config parse(std::istream& in);
  static Config load(const std::string& file);

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  /// Comma-separated list, items trimmed.
  std::vector<std::string> get_list(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  /// Throws ParameterError naming the first key of `section` not in `allowed`.
  void check_keys(const std::string& section, const std::set<std::string>& allowed) const;
  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return data_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

/// Overlay the [model] section onto `base`.
ModelParams model_from_config(const Config& c, ModelParams base);
/// Overlay the [estimator] section onto `base`.
EstimatorConfig estimator_from_config(const Config& c, EstimatorConfig base);
/// Overlay the [session] section onto `base`. Times of day are "HH:MM[:SS]" or seconds.
SessionSpec session_from_config(const Config& c, SessionSpec base);
/// Overlay [experiment], [model] and [estimator] onto `base`.
ExperimentSpec experiment_from_config(const Config& c, ExperimentSpec base);

}  // namespace ecfvol
