#pragma once

#include <json.hpp>

#include "ecfvol/estimator_config.hpp"
#include "ecfvol/inference.hpp"
#include "ecfvol/ingest.hpp"
#include "ecfvol/lev_vov.hpp"
#include "ecfvol/mc_harness.hpp"
#include "ecfvol/model_sim.hpp"

namespace ecfvol {

// JSON views used by manifests and reports. Keys keep insertion order so the
// output bytes are stable.
using Json = nlohmann::ordered_json;

Json to_json(const ModelParams& p);
Json to_json(const EstimatorConfig& c);
Json to_json(const ResolvedConfig& c);
Json to_json(const LevVovEstimate& e);
Json to_json(const EstimateReport& r);
Json to_json(const VarianceComponents& v);
Json to_json(const SessionSpec& s);
Json to_json(const ExperimentSpec& s);
Json to_json(const EstimatorSummary& s);
Json to_json(const McSummary& s);

/// A finite double, or null for NaN / infinity.
Json number_or_null(double x);

}  // namespace ecfvol
