#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "triage/dataset.hpp"
#include "triage/ensemble.hpp"
#include "triage/experiment.hpp"
#include "triage/model_io.hpp"
#include "triage/text.hpp"

namespace {

using nlohmann::json;

// Exit codes: 0 success (and --help), 1 data or IO failure, 2 usage or
// contract violation.
constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct HyperOpts {
  int base_depth = 4;
  int grader_depth = 4;
  int n_trees = 100;
  int forest_depth = -1;       // -1: unlimited
  int features_per_split = 0;  // 0: floor(sqrt(n_features))
  bool no_bootstrap = false;
  int smote_k = 5;
  uint64_t seed = 0;

  CLI::Option* base_depth_opt = nullptr;
  CLI::Option* grader_depth_opt = nullptr;
  CLI::Option* n_trees_opt = nullptr;
  CLI::Option* forest_depth_opt = nullptr;
  CLI::Option* features_opt = nullptr;
  CLI::Option* no_bootstrap_opt = nullptr;
  CLI::Option* smote_k_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

void add_hyper_flags(CLI::App& cmd, HyperOpts& h) {
  h.base_depth_opt =
      cmd.add_option("--base-depth", h.base_depth, "Base tree depth limit");
  h.grader_depth_opt =
      cmd.add_option("--grader-depth", h.grader_depth, "Grader tree depth limit");
  h.n_trees_opt = cmd.add_option("--trees", h.n_trees, "Trees in the deferral forest");
  h.forest_depth_opt = cmd.add_option(
      "--forest-depth", h.forest_depth, "Forest tree depth limit, -1 for unlimited");
  h.features_opt = cmd.add_option("--features-per-split", h.features_per_split,
                                  "Features sampled per split, 0 for sqrt rule");
  h.no_bootstrap_opt = cmd.add_flag("--no-bootstrap", h.no_bootstrap,
                                    "Fit forest trees on the full training set");
  h.smote_k_opt = cmd.add_option("--smote-k", h.smote_k,
                                 "Neighbours considered when oversampling");
  h.seed_opt = cmd.add_option("--seed", h.seed, "Top-level random seed");
}

json load_config(const std::string& path) {
  if (path.empty()) {
    return json::object();
  }
  std::ifstream in(path);
  if (!in) {
    throw triage::DataError("cannot open config file: " + path);
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw triage::DataError(path + ": invalid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) {
    throw triage::DataError(path + ": config must be a JSON object");
  }
  return j;
}

// Config fills in any setting the command line left untouched.
template <typename T>
void fall_back(const CLI::Option* opt, T& value, const json& cfg,
               std::initializer_list<const char*> path) {
  if (opt != nullptr && opt->count() > 0) {
    return;
  }
  const json* cur = &cfg;
  for (const char* key : path) {
    if (!cur->is_object() || !cur->contains(key)) {
      return;
    }
    cur = &(*cur)[key];
  }
  try {
    if constexpr (std::is_same_v<T, int>) {
      // null means "no limit" for depth-like settings
      if (cur->is_null()) {
        value = -1;
        return;
      }
    }
    value = cur->get<T>();
  } catch (const json::exception&) {
    throw triage::DataError("config: bad value type at '" +
                            std::string(*std::rbegin(path)) + "'");
  }
}

void apply_hyper_config(HyperOpts& h, const json& cfg) {
  fall_back(h.base_depth_opt, h.base_depth, cfg, {"base", "max_depth"});
  fall_back(h.grader_depth_opt, h.grader_depth, cfg, {"grader", "max_depth"});
  fall_back(h.n_trees_opt, h.n_trees, cfg, {"forest", "n_trees"});
  fall_back(h.forest_depth_opt, h.forest_depth, cfg, {"forest", "max_depth"});
  fall_back(h.features_opt, h.features_per_split, cfg,
            {"forest", "features_per_split"});
  if (h.no_bootstrap_opt == nullptr || h.no_bootstrap_opt->count() == 0) {
    bool bootstrap = true;
    const CLI::Option* none = nullptr;
    fall_back(none, bootstrap, cfg, {"forest", "bootstrap"});
    h.no_bootstrap = !bootstrap;
  }
  fall_back(h.smote_k_opt, h.smote_k, cfg, {"smote", "k_neighbors"});
  fall_back(h.seed_opt, h.seed, cfg, {"seed"});
}

triage::EnsembleConfig to_ensemble_config(const HyperOpts& h) {
  triage::EnsembleConfig cfg;
  cfg.base_params.max_depth = h.base_depth;
  cfg.grader_params.max_depth = h.grader_depth;
  cfg.deferral_params.n_trees = h.n_trees;
  cfg.deferral_params.max_depth =
      h.forest_depth < 0 ? std::nullopt : std::optional<int>(h.forest_depth);
  cfg.deferral_params.features_per_split =
      h.features_per_split <= 0 ? std::nullopt
                                : std::optional<int>(h.features_per_split);
  cfg.deferral_params.bootstrap = !h.no_bootstrap;
  cfg.smote.k_neighbors = h.smote_k;
  cfg.seed = h.seed;
  return cfg;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> values;
  size_t begin = 0;
  while (begin <= list.size()) {
    size_t end = list.find(',', begin);
    if (end == std::string::npos) {
      end = list.size();
    }
    const std::string cell = list.substr(begin, end - begin);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
      throw std::invalid_argument("--values: cannot parse number '" + cell + "'");
    }
    values.push_back(v);
    begin = end + 1;
  }
  return values;
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw triage::DataError("cannot write file: " + path);
  }
  out << content;
  if (!out) {
    throw triage::DataError("write failed: " + path);
  }
}

int cmd_fit(const std::string& data_path, const std::string& label_column,
            const std::string& out_path, const HyperOpts& h) {
  const triage::Dataset d = triage::load_csv(data_path, label_column);
  const triage::GraderDeferralEnsemble e =
      triage::fit_ensemble(d, to_ensemble_config(h));
  triage::save_ensemble(out_path, e);
  std::cout << "fitted on " << d.n_rows() << " rows, " << d.n_features()
            << " features, " << d.n_classes() << " classes\n"
            << "base training accuracy: "
            << triage::format_double(e.fit_stats.base_train_accuracy) << "\n"
            << "graded easy: " << e.fit_stats.easy_count
            << ", hard: " << e.fit_stats.hard_count
            << ", synthetic rows added: " << e.fit_stats.synthetic_count << "\n";
  if (e.fit_stats.trivial_grader) {
    std::cout << "note: trivial grader, every row graded the same way\n";
  }
  std::cout << "model written to: " << out_path << "\n";
  return kExitOk;
}

int cmd_cv(const std::string& data_path, const std::string& label_column,
           int k, int repeats, const HyperOpts& h, const std::string& json_path,
           const std::string& runs_csv_path) {
  const triage::Dataset d = triage::load_csv(data_path, label_column);
  const triage::CvReport report =
      triage::run_cv(d, to_ensemble_config(h), k, repeats, h.seed);
  std::cout << triage::cv_report_table(report, data_path);
  if (!json_path.empty()) {
    write_text(json_path, triage::cv_report_to_json(report, data_path).dump(2) + "\n");
  }
  if (!runs_csv_path.empty()) {
    write_text(runs_csv_path, triage::cv_runs_csv(report));
  }
  return kExitOk;
}

int cmd_explain(const std::string& model_path, const std::string& values,
                const std::string& data_path, int row,
                const std::string& label_column) {
  const triage::GraderDeferralEnsemble e = triage::load_ensemble(model_path);
  std::vector<double> x;
  if (!values.empty()) {
    if (!data_path.empty()) {
      throw std::invalid_argument("give either --values or --data, not both");
    }
    x = parse_values(values);
  } else if (!data_path.empty()) {
    const triage::Dataset d = triage::load_csv(data_path, label_column);
    if (row < 0 || static_cast<size_t>(row) >= d.n_rows()) {
      throw std::invalid_argument("--row out of range, dataset has " +
                                  std::to_string(d.n_rows()) + " rows");
    }
    const auto r = d.row(static_cast<size_t>(row));
    x.assign(r.begin(), r.end());
  } else {
    throw std::invalid_argument("one of --values or --data is required");
  }
  std::cout << triage::explain(e, x);
  return kExitOk;
}

int cmd_boundary(const std::string& model_path, double x_min, double x_max,
                 double y_min, double y_max, int nx, int ny,
                 const std::string& out_path) {
  const triage::GraderDeferralEnsemble e = triage::load_ensemble(model_path);
  const triage::BoundaryGrid g =
      triage::boundary_grid(e, x_min, x_max, y_min, y_max, nx, ny);
  write_text(out_path, triage::boundary_grid_csv(g));
  return kExitOk;
}

int cmd_export_tree(const std::string& model_path, const std::string& which) {
  const triage::GraderDeferralEnsemble e = triage::load_ensemble(model_path);
  if (which == "base") {
    std::cout << triage::export_text(e.base, e.feature_names, e.class_names);
  } else if (which == "grader") {
    std::cout << triage::export_text(e.grader, e.feature_names,
                                     triage::grader_class_names());
    if (e.fit_stats.trivial_grader) {
      std::cerr << "note: trivial grader, every training row graded the same way\n";
    }
  } else {
    throw std::invalid_argument("--tree must be 'base' or 'grader'");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grader-deferral classifier: shallow tree for easy inputs, "
               "random forest for hard ones"};
  app.require_subcommand(1);

  std::string config_path;
  std::string data_path;
  std::string label_column;
  std::string out_path;
  std::string model_path;
  std::string values;
  std::string json_path;
  std::string runs_csv_path;
  std::string which_tree = "base";
  int row = -1;
  int k = 10;
  int repeats = 5;
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
  int nx = 100, ny = 100;
  HyperOpts hyper;
  CLI::Option* k_opt = nullptr;
  CLI::Option* repeats_opt = nullptr;
  CLI::Option* label_opt = nullptr;

  CLI::App* fit = app.add_subcommand("fit", "Fit an ensemble and save it as JSON");
  fit->add_option("--data", data_path, "Training CSV")->required();
  label_opt = fit->add_option("--label-column", label_column,
                              "Label column name, default last column");
  fit->add_option("--out", out_path, "Model output path")->required();
  add_hyper_flags(*fit, hyper);
  fit->add_option("--config", config_path, "JSON config with defaults");

  CLI::App* cv = app.add_subcommand("cv", "Repeated stratified cross validation");
  cv->add_option("--data", data_path, "Dataset CSV")->required();
  CLI::Option* cv_label_opt = cv->add_option("--label-column", label_column,
                                             "Label column name, default last column");
  k_opt = cv->add_option("--k", k, "Folds per repeat");
  repeats_opt = cv->add_option("--repeats", repeats, "Repeats");
  HyperOpts cv_hyper;
  add_hyper_flags(*cv, cv_hyper);
  cv->add_option("--json", json_path, "Write the full report as JSON here");
  cv->add_option("--runs-csv", runs_csv_path, "Write the per-run metrics CSV here");
  cv->add_option("--config", config_path, "JSON config with defaults");

  CLI::App* explain = app.add_subcommand("explain", "Explain one prediction");
  explain->add_option("--model", model_path, "Model JSON")->required();
  explain->add_option("--values", values, "Comma-separated feature values");
  explain->add_option("--data", data_path, "CSV to take the instance from");
  explain->add_option("--row", row, "Zero-based row within --data");
  CLI::Option* explain_label_opt = explain->add_option(
      "--label-column", label_column, "Label column name, default last column");
  explain->add_option("--config", config_path, "JSON config with defaults");

  CLI::App* boundary = app.add_subcommand(
      "boundary", "Probe a two-feature model on a grid, CSV out");
  boundary->add_option("--model", model_path, "Model JSON")->required();
  boundary->add_option("--x-min", x_min, "Grid lower x bound")->required();
  boundary->add_option("--x-max", x_max, "Grid upper x bound")->required();
  boundary->add_option("--y-min", y_min, "Grid lower y bound")->required();
  boundary->add_option("--y-max", y_max, "Grid upper y bound")->required();
  boundary->add_option("--nx", nx, "Cells along x");
  boundary->add_option("--ny", ny, "Cells along y");
  boundary->add_option("--out", out_path, "CSV path, '-' for stdout");
  boundary->add_option("--config", config_path, "JSON config with defaults");

  CLI::App* export_tree =
      app.add_subcommand("export-tree", "Print a tree as indented text");
  export_tree->add_option("--model", model_path, "Model JSON")->required();
  export_tree->add_option("--tree", which_tree, "Which tree: base or grader");
  export_tree->add_option("--config", config_path, "JSON config with defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const json cfg = load_config(config_path);
    fall_back(label_opt, label_column, cfg, {"label_column"});
    fall_back(cv_label_opt, label_column, cfg, {"label_column"});
    fall_back(explain_label_opt, label_column, cfg, {"label_column"});
    fall_back(k_opt, k, cfg, {"cv", "k"});
    fall_back(repeats_opt, repeats, cfg, {"cv", "repeats"});
    apply_hyper_config(hyper, cfg);
    apply_hyper_config(cv_hyper, cfg);

    if (fit->parsed()) {
      return cmd_fit(data_path, label_column, out_path, hyper);
    }
    if (cv->parsed()) {
      return cmd_cv(data_path, label_column, k, repeats, cv_hyper, json_path,
                    runs_csv_path);
    }
    if (explain->parsed()) {
      return cmd_explain(model_path, values, data_path, row, label_column);
    }
    if (boundary->parsed()) {
      return cmd_boundary(model_path, x_min, x_max, y_min, y_max, nx, ny,
                          out_path);
    }
    if (export_tree->parsed()) {
      return cmd_export_tree(model_path, which_tree);
    }
    std::cerr << "no subcommand given\n";
    return kExitUsage;
  } catch (const triage::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
