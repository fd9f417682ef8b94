#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "triage/dataset.hpp"
#include "triage/forest.hpp"
#include "triage/smote.hpp"
#include "triage/tree.hpp"

namespace triage {

struct EnsembleConfig {
  TreeParams base_params{};     // shallow, interpretable
  TreeParams grader_params{};   // shallow, interpretable
  ForestParams deferral_params{};
  SmoteParams smote{};
  uint64_t seed = 0;
};

// Grader classes are fixed: easy rows go to the base tree, hard rows to
// the deferral forest.
inline constexpr int kGradeEasy = 0;
inline constexpr int kGradeHard = 1;
const std::vector<std::string>& grader_class_names();

enum class Route { Easy, Hard };

struct FitStats {
  double base_train_accuracy = 0.0;
  size_t easy_count = 0;          // before resampling
  size_t hard_count = 0;          // before resampling
  size_t synthetic_count = 0;     // rows added by resampling
  bool trivial_grader = false;    // relabeling was one-class
};

struct RoutedPrediction {
  int label = -1;
  Route route = Route::Easy;
  // Grader conditions that decided the route; empty for a trivial grader.
  std::vector<PathStep> grader_path;
  // Base-tree conditions behind the label; absent on deferred inputs.
  std::optional<std::vector<PathStep>> base_path;
};

// The fitted triple: an interpretable base tree answering easy inputs, a
// random forest answering hard ones, and a grader tree routing between
// them.
struct GraderDeferralEnsemble {
  DecisionTree base;
  RandomForest deferral;
  DecisionTree grader;
  FitStats fit_stats;
  EnsembleConfig config;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
};

// Copy of `d` over the grader classes: row i is easy exactly when the base
// tree reproduces its label, hard otherwise. The easy fraction therefore
// equals the base tree's training accuracy.
Dataset relabel_easy_hard(const DecisionTree& base, const Dataset& d);

// Fits base and deferral model on the training data, relabels it by base
// correctness, balances the relabeling and fits the grader on the result.
// The forest seed and the resampling stream are derived from cfg.seed
// (cfg.deferral_params.seed is overridden). When every row relabels the
// same way there is nothing to grade: resampling is skipped and the grader
// degenerates to a single leaf, flagged in fit_stats.
GraderDeferralEnsemble fit_ensemble(const Dataset& d, const EnsembleConfig& cfg);

// Routes x through the grader, then answers with the base tree (easy) or
// the deferral forest (hard).
RoutedPrediction predict_ensemble(const GraderDeferralEnsemble& e,
                                  std::span<const double> x);

// Human-readable account of one prediction: the predicted class, the
// route, the grader conditions that picked it, and either the base tree's
// conditions or a deferral notice.
std::string explain(const GraderDeferralEnsemble& e, std::span<const double> x);

}  // namespace triage
