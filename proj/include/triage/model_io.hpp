#pragma once

#include <string>

#include <json.hpp>

#include "triage/ensemble.hpp"
#include "triage/experiment.hpp"

namespace triage {

// JSON forms are deterministic: keys serialize in sorted order and doubles
// use the shortest round-trip decimal form, so equal models give equal
// bytes. The from_json functions validate structure and throw DataError on
// anything malformed.

nlohmann::json tree_to_json(const DecisionTree& t);
DecisionTree tree_from_json(const nlohmann::json& j);

nlohmann::json forest_to_json(const RandomForest& f);
RandomForest forest_from_json(const nlohmann::json& j);

nlohmann::json ensemble_to_json(const GraderDeferralEnsemble& e);
GraderDeferralEnsemble ensemble_from_json(const nlohmann::json& j);

void save_ensemble(const std::string& path, const GraderDeferralEnsemble& e);
GraderDeferralEnsemble load_ensemble(const std::string& path);

// Cross validation reports: a machine-readable JSON document, a percent
// table for terminals, and a per-run CSV (fractions, full precision).
nlohmann::json cv_report_to_json(const CvReport& r, const std::string& dataset_label);
std::string cv_report_table(const CvReport& r, const std::string& dataset_label);
std::string cv_runs_csv(const CvReport& r);

// Cell-per-line CSV with header x,y,route,label.
std::string boundary_grid_csv(const BoundaryGrid& g);

}  // namespace triage
