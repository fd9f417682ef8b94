#include "triage/ensemble.hpp"

#include <stdexcept>
#include <utility>

#include "triage/text.hpp"

namespace triage {

namespace {

// Namespaced sub-seed labels so the forest and the resampler never share a
// stream even when configured alike.
constexpr uint64_t kForestSeedLabel = 1;
constexpr uint64_t kSmoteSeedLabel = 2;

void append_indented(std::string& out, const std::string& lines) {
  size_t begin = 0;
  while (begin < lines.size()) {
    size_t end = lines.find('\n', begin);
    if (end == std::string::npos) {
      end = lines.size();
    }
    out += "  ";
    out.append(lines, begin, end - begin);
    out += '\n';
    begin = end + 1;
  }
}

}  // namespace

const std::vector<std::string>& grader_class_names() {
  static const std::vector<std::string> names{"easy", "hard"};
  return names;
}

Dataset relabel_easy_hard(const DecisionTree& base, const Dataset& d) {
  std::vector<int> grades(d.n_rows());
  for (size_t i = 0; i < d.n_rows(); ++i) {
    const int predicted = predict_tree(base, d.row(i));
    grades[i] = predicted == d.label(i) ? kGradeEasy : kGradeHard;
  }
  return d.with_labels(std::move(grades), grader_class_names());
}

GraderDeferralEnsemble fit_ensemble(const Dataset& d, const EnsembleConfig& cfg) {
  GraderDeferralEnsemble e;
  e.config = cfg;
  e.feature_names = d.feature_names();
  e.class_names = d.class_names();

  e.base = fit_tree(d, cfg.base_params);

  ForestParams fp = cfg.deferral_params;
  fp.seed = mix_seed(cfg.seed, {kForestSeedLabel});
  e.deferral = fit_forest(d, fp);

  const Dataset relabeled = relabel_easy_hard(e.base, d);
  const std::vector<size_t> grade_counts = relabeled.class_counts();
  e.fit_stats.easy_count = grade_counts[static_cast<size_t>(kGradeEasy)];
  e.fit_stats.hard_count = grade_counts[static_cast<size_t>(kGradeHard)];
  e.fit_stats.base_train_accuracy =
      static_cast<double>(e.fit_stats.easy_count) /
      static_cast<double>(d.n_rows());

  if (e.fit_stats.easy_count == 0 || e.fit_stats.hard_count == 0) {
    // One-class relabeling: nothing to balance, and greedy growth on a
    // pure set is a single leaf that always answers that class.
    e.fit_stats.trivial_grader = true;
    e.grader = fit_tree(relabeled, cfg.grader_params);
  } else {
    DeterministicRng smote_rng(mix_seed(cfg.seed, {kSmoteSeedLabel}));
    const SmoteResult balanced = smote_balance(relabeled, cfg.smote, smote_rng);
    e.fit_stats.synthetic_count = balanced.synthetics.size();
    e.grader = fit_tree(balanced.data, cfg.grader_params);
  }
  return e;
}

RoutedPrediction predict_ensemble(const GraderDeferralEnsemble& e,
                                  std::span<const double> x) {
  RoutedPrediction p;
  p.grader_path = decision_path(e.grader, x);
  const int grade = predict_tree(e.grader, x);
  if (grade == kGradeEasy) {
    p.route = Route::Easy;
    p.label = predict_tree(e.base, x);
    p.base_path = decision_path(e.base, x);
  } else {
    p.route = Route::Hard;
    p.label = predict_forest(e.deferral, x);
  }
  return p;
}

std::string explain(const GraderDeferralEnsemble& e, std::span<const double> x) {
  const RoutedPrediction p = predict_ensemble(e, x);
  std::string out = "prediction: ";
  out += e.class_names[static_cast<size_t>(p.label)];
  out += '\n';
  out += p.route == Route::Easy ? "route: easy (answered by the base tree)\n"
                                : "route: hard (deferred to the forest)\n";
  if (e.fit_stats.trivial_grader) {
    out += "note: trivial grader, every training row graded ";
    out += grader_class_names()[static_cast<size_t>(
        predict_tree(e.grader, x))];
    out += '\n';
  }
  out += "grader conditions:\n";
  if (p.grader_path.empty()) {
    out += "  (none)\n";
  } else {
    append_indented(out, format_path(p.grader_path, e.feature_names));
  }
  if (p.base_path) {
    out += "base tree conditions:\n";
    if (p.base_path->empty()) {
      out += "  (none)\n";
    } else {
      append_indented(out, format_path(*p.base_path, e.feature_names));
    }
  } else {
    out += "deferred: answered by the ";
    out += std::to_string(e.deferral.trees.size());
    out += "-tree forest vote\n";
  }
  return out;
}

}  // namespace triage
