#include "triage/model_io.hpp"

#include <fstream>
#include <limits>
#include <utility>

#include "triage/text.hpp"

namespace triage {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw DataError("malformed model document: " + what);
}

// at() with json's errors folded into DataError.
const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (!j.is_object() || it == j.end()) {
    malformed(std::string("missing field '") + key + "'");
  }
  return *it;
}

template <typename T>
T as(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception&) {
    malformed(std::string("field '") + key + "' has the wrong type");
  }
}

json depth_to_json(int max_depth) {
  if (max_depth == TreeParams::unlimited_depth()) {
    return nullptr;
  }
  return max_depth;
}

int depth_from_json(const json& j, const char* key) {
  const json& v = field(j, key);
  if (v.is_null()) {
    return TreeParams::unlimited_depth();
  }
  if (!v.is_number_integer()) {
    malformed(std::string("field '") + key + "' must be an integer or null");
  }
  return v.get<int>();
}

json tree_params_to_json(const TreeParams& p) {
  return {{"max_depth", depth_to_json(p.max_depth)},
          {"min_samples_split", p.min_samples_split},
          {"min_samples_leaf", p.min_samples_leaf}};
}

TreeParams tree_params_from_json(const json& j) {
  TreeParams p;
  p.max_depth = depth_from_json(j, "max_depth");
  p.min_samples_split = as<int>(j, "min_samples_split");
  p.min_samples_leaf = as<int>(j, "min_samples_leaf");
  return p;
}

json forest_params_to_json(const ForestParams& p) {
  return {{"n_trees", p.n_trees},
          {"max_depth", p.max_depth ? json(*p.max_depth) : json(nullptr)},
          {"features_per_split",
           p.features_per_split ? json(*p.features_per_split) : json(nullptr)},
          {"bootstrap", p.bootstrap},
          {"seed", p.seed},
          {"min_samples_split", p.min_samples_split},
          {"min_samples_leaf", p.min_samples_leaf}};
}

ForestParams forest_params_from_json(const json& j) {
  ForestParams p;
  p.n_trees = as<int>(j, "n_trees");
  const json& depth = field(j, "max_depth");
  p.max_depth = depth.is_null() ? std::nullopt : std::optional<int>(depth.get<int>());
  const json& feats = field(j, "features_per_split");
  p.features_per_split =
      feats.is_null() ? std::nullopt : std::optional<int>(feats.get<int>());
  p.bootstrap = as<bool>(j, "bootstrap");
  p.seed = as<uint64_t>(j, "seed");
  p.min_samples_split = as<int>(j, "min_samples_split");
  p.min_samples_leaf = as<int>(j, "min_samples_leaf");
  return p;
}

// Walks the node array from the root and checks that it is a proper
// binary tree: every reachable index valid, each node either a leaf or
// fully internal, every node reachable exactly once.
void check_tree_structure(const DecisionTree& t) {
  const auto n = static_cast<int>(t.nodes.size());
  if (n == 0) {
    malformed("tree has no nodes");
  }
  std::vector<char> seen(t.nodes.size(), 0);
  std::vector<int> stack{0};
  int visited = 0;
  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    if (idx < 0 || idx >= n) {
      malformed("tree child index out of range");
    }
    if (seen[static_cast<size_t>(idx)]) {
      malformed("tree node referenced twice");
    }
    seen[static_cast<size_t>(idx)] = 1;
    ++visited;
    const TreeNode& node = t.nodes[static_cast<size_t>(idx)];
    if (node.class_counts.size() != static_cast<size_t>(t.n_classes)) {
      malformed("tree node class count length mismatch");
    }
    if (node.predicted_class < 0 || node.predicted_class >= t.n_classes) {
      malformed("tree node predicted class out of range");
    }
    if (node.is_leaf()) {
      if (node.left != -1 || node.right != -1) {
        malformed("leaf with children");
      }
    } else {
      if (node.feature >= t.n_features) {
        malformed("tree split feature out of range");
      }
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  if (visited != n) {
    malformed("tree has unreachable nodes");
  }
}

}  // namespace

json tree_to_json(const DecisionTree& t) {
  json nodes = json::array();
  for (const TreeNode& n : t.nodes) {
    nodes.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"class_counts", n.class_counts},
                     {"predicted_class", n.predicted_class}});
  }
  return {{"params", tree_params_to_json(t.params)},
          {"n_features", t.n_features},
          {"n_classes", t.n_classes},
          {"depth", t.depth},
          {"nodes", std::move(nodes)}};
}

DecisionTree tree_from_json(const json& j) {
  try {
    DecisionTree t;
    t.params = tree_params_from_json(field(j, "params"));
    t.n_features = as<int>(j, "n_features");
    t.n_classes = as<int>(j, "n_classes");
    t.depth = as<int>(j, "depth");
    if (t.n_features < 1 || t.n_classes < 1 || t.depth < 0) {
      malformed("tree dimensions out of range");
    }
    const json& nodes = field(j, "nodes");
    if (!nodes.is_array()) {
      malformed("field 'nodes' must be an array");
    }
    for (const json& nj : nodes) {
      TreeNode n;
      n.feature = as<int>(nj, "feature");
      n.threshold = as<double>(nj, "threshold");
      n.left = as<int>(nj, "left");
      n.right = as<int>(nj, "right");
      n.class_counts = as<std::vector<size_t>>(nj, "class_counts");
      n.predicted_class = as<int>(nj, "predicted_class");
      if (n.feature < -1) {
        malformed("tree split feature out of range");
      }
      t.nodes.push_back(std::move(n));
    }
    check_tree_structure(t);
    return t;
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

json forest_to_json(const RandomForest& f) {
  json trees = json::array();
  for (const DecisionTree& t : f.trees) {
    trees.push_back(tree_to_json(t));
  }
  return {{"params", forest_params_to_json(f.params)},
          {"n_features", f.n_features},
          {"n_classes", f.n_classes},
          {"trees", std::move(trees)}};
}

RandomForest forest_from_json(const json& j) {
  try {
    RandomForest f;
    f.params = forest_params_from_json(field(j, "params"));
    f.n_features = as<int>(j, "n_features");
    f.n_classes = as<int>(j, "n_classes");
    const json& trees = field(j, "trees");
    if (!trees.is_array() || trees.empty()) {
      malformed("forest needs a non-empty tree array");
    }
    for (const json& tj : trees) {
      DecisionTree t = tree_from_json(tj);
      if (t.n_features != f.n_features || t.n_classes != f.n_classes) {
        malformed("forest tree dimensions disagree");
      }
      f.trees.push_back(std::move(t));
    }
    return f;
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

json ensemble_to_json(const GraderDeferralEnsemble& e) {
  return {{"format", "grader-deferral-ensemble"},
          {"version", 1},
          {"feature_names", e.feature_names},
          {"class_names", e.class_names},
          {"config",
           {{"base_params", tree_params_to_json(e.config.base_params)},
            {"grader_params", tree_params_to_json(e.config.grader_params)},
            {"deferral_params", forest_params_to_json(e.config.deferral_params)},
            {"smote", {{"k_neighbors", e.config.smote.k_neighbors}}},
            {"seed", e.config.seed}}},
          {"fit_stats",
           {{"base_train_accuracy", e.fit_stats.base_train_accuracy},
            {"easy_count", e.fit_stats.easy_count},
            {"hard_count", e.fit_stats.hard_count},
            {"synthetic_count", e.fit_stats.synthetic_count},
            {"trivial_grader", e.fit_stats.trivial_grader}}},
          {"base", tree_to_json(e.base)},
          {"grader", tree_to_json(e.grader)},
          {"deferral", forest_to_json(e.deferral)}};
}

GraderDeferralEnsemble ensemble_from_json(const json& j) {
  try {
    if (as<std::string>(j, "format") != "grader-deferral-ensemble") {
      malformed("unknown format tag");
    }
    if (as<int>(j, "version") != 1) {
      malformed("unsupported version");
    }
    GraderDeferralEnsemble e;
    e.feature_names = as<std::vector<std::string>>(j, "feature_names");
    e.class_names = as<std::vector<std::string>>(j, "class_names");

    const json& cfg = field(j, "config");
    e.config.base_params = tree_params_from_json(field(cfg, "base_params"));
    e.config.grader_params = tree_params_from_json(field(cfg, "grader_params"));
    e.config.deferral_params =
        forest_params_from_json(field(cfg, "deferral_params"));
    e.config.smote.k_neighbors = as<int>(field(cfg, "smote"), "k_neighbors");
    e.config.seed = as<uint64_t>(cfg, "seed");

    const json& stats = field(j, "fit_stats");
    e.fit_stats.base_train_accuracy = as<double>(stats, "base_train_accuracy");
    e.fit_stats.easy_count = as<size_t>(stats, "easy_count");
    e.fit_stats.hard_count = as<size_t>(stats, "hard_count");
    e.fit_stats.synthetic_count = as<size_t>(stats, "synthetic_count");
    e.fit_stats.trivial_grader = as<bool>(stats, "trivial_grader");

    e.base = tree_from_json(field(j, "base"));
    e.grader = tree_from_json(field(j, "grader"));
    e.deferral = forest_from_json(field(j, "deferral"));

    const auto p = static_cast<int>(e.feature_names.size());
    const auto c = static_cast<int>(e.class_names.size());
    if (e.base.n_features != p || e.grader.n_features != p ||
        e.deferral.n_features != p) {
      malformed("model feature counts disagree with feature_names");
    }
    if (e.base.n_classes != c || e.deferral.n_classes != c) {
      malformed("model class counts disagree with class_names");
    }
    if (e.grader.n_classes != 2) {
      malformed("grader must have exactly two classes");
    }
    return e;
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

void save_ensemble(const std::string& path, const GraderDeferralEnsemble& e) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write file: " + path);
  }
  out << ensemble_to_json(e).dump(2) << '\n';
  if (!out) {
    throw DataError("write failed: " + path);
  }
}

GraderDeferralEnsemble load_ensemble(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open file: " + path);
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  return ensemble_from_json(j);
}

json cv_report_to_json(const CvReport& r, const std::string& dataset_label) {
  const auto agg = [](const Aggregate& a) {
    return json{{"mean", a.mean}, {"stddev", a.stddev}};
  };
  json runs = json::array();
  for (const RunReport& run : r.runs) {
    runs.push_back({{"repeat", run.repeat},
                    {"fold", run.fold},
                    {"train_rows", run.train_rows},
                    {"test_rows", run.test_rows},
                    {"base_train_accuracy", run.base_train_accuracy},
                    {"base_test_accuracy", run.base_test_accuracy},
                    {"final_train_accuracy", run.final_train_accuracy},
                    {"final_test_accuracy", run.final_test_accuracy},
                    {"deferral_train_rate", run.deferral_train_rate},
                    {"deferral_test_rate", run.deferral_test_rate},
                    {"trivial_grader", run.trivial_grader}});
  }
  return {{"dataset", dataset_label},
          {"k", r.k},
          {"repeats", r.repeats},
          {"seed", r.seed},
          {"aggregates",
           {{"base_train_accuracy", agg(r.base_train)},
            {"base_test_accuracy", agg(r.base_test)},
            {"final_train_accuracy", agg(r.final_train)},
            {"final_test_accuracy", agg(r.final_test)},
            {"deferral_train_rate", agg(r.deferral_train)},
            {"deferral_test_rate", agg(r.deferral_test)}}},
          {"runs", std::move(runs)}};
}

std::string cv_report_table(const CvReport& r, const std::string& dataset_label) {
  const auto pad_left = [](const std::string& s, size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
  };
  const auto pad_right = [](const std::string& s, size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
  };
  const auto pct = [&](double fraction) {
    return pad_left(format_fixed(100.0 * fraction, 2), 10);
  };

  std::string out = "dataset: " + dataset_label + "\n";
  out += "cross validation: k=" + std::to_string(r.k) +
         ", repeats=" + std::to_string(r.repeats) +
         ", seed=" + std::to_string(r.seed) +
         ", runs=" + std::to_string(r.runs.size()) + "\n\n";
  out += pad_right("metric", 20) + pad_left("train mean", 10) +
         pad_left("train sd", 10) + pad_left("test mean", 11) +
         pad_left("test sd", 10) + "\n";
  const auto row = [&](const std::string& name, const Aggregate& train,
                       const Aggregate& test) {
    out += pad_right(name, 20) + pct(train.mean) + pct(train.stddev) +
           pad_left(format_fixed(100.0 * test.mean, 2), 11) + pct(test.stddev) +
           "\n";
  };
  row("base accuracy [%]", r.base_train, r.base_test);
  row("final accuracy [%]", r.final_train, r.final_test);
  row("deferral rate [%]", r.deferral_train, r.deferral_test);
  return out;
}

std::string cv_runs_csv(const CvReport& r) {
  std::string out =
      "repeat,fold,train_rows,test_rows,base_train_accuracy,base_test_accuracy,"
      "final_train_accuracy,final_test_accuracy,deferral_train_rate,"
      "deferral_test_rate,trivial_grader\n";
  for (const RunReport& run : r.runs) {
    out += std::to_string(run.repeat);
    out += ',';
    out += std::to_string(run.fold);
    out += ',';
    out += std::to_string(run.train_rows);
    out += ',';
    out += std::to_string(run.test_rows);
    out += ',';
    out += format_double(run.base_train_accuracy);
    out += ',';
    out += format_double(run.base_test_accuracy);
    out += ',';
    out += format_double(run.final_train_accuracy);
    out += ',';
    out += format_double(run.final_test_accuracy);
    out += ',';
    out += format_double(run.deferral_train_rate);
    out += ',';
    out += format_double(run.deferral_test_rate);
    out += ',';
    out += run.trivial_grader ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string boundary_grid_csv(const BoundaryGrid& g) {
  std::string out = "x,y,route,label\n";
  for (const BoundaryCell& c : g.cells) {
    out += format_double(c.x);
    out += ',';
    out += format_double(c.y);
    out += ',';
    out += c.route == Route::Easy ? "easy" : "hard";
    out += ',';
    out += g.class_names[static_cast<size_t>(c.label)];
    out += '\n';
  }
  return out;
}

}  // namespace triage
