#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "geoforest/boundary.hpp"
#include "geoforest/evaluation.hpp"
#include "geoforest/parallel.hpp"

namespace geoforest::cli {

namespace {

namespace fs = std::filesystem;

/// Bad flag values or combinations found after parsing; exits 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string num(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

fs::path manifest_path_for(const fs::path& output) { return fs::path(output.string() + ".manifest.json"); }

/// Everything needed to rerun a command: the argv, resolved settings, seeds,
/// file paths and when it ran.
struct RunManifest {
  Json doc;

  RunManifest(const std::string& command, const std::vector<std::string>& args, const std::string& started) {
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["command"] = command;
    doc["args"] = args;
    doc["started_at"] = started;
    doc["config"] = Json::object();
    doc["seeds"] = Json::object();
    doc["inputs"] = Json::array();
    doc["outputs"] = Json::array();
  }

  void write(const fs::path& path) const { write_text_file(path, doc.dump(2) + "\n"); }
};

Json stream_notes(const std::string& what) {
  Json s = Json::object();
  if (what == "mixture") {
    s["class_parameters"] = "stream(seed, mixture_class, k) for class k";
    s["class_weights"] = "stream(seed, mixture_weights, 0)";
    s["samples"] = "stream(seed, mixture_sample, i) for row i";
  } else if (what == "fit") {
    s["tree"] = "stream(seed, tree, 0) drives feature subsampling";
    s["forest_tree_seed"] = "derive(seed, tree, i) for tree i";
    s["bootstrap"] = "stream(seed, bootstrap, i) for tree i";
  } else if (what == "evaluate") {
    s["folds"] = "stream(s, cv_shuffle, 0) for each CV seed s";
    s["fit"] = "each predictor is fitted with the CV seed s";
  } else if (what == "sweep") {
    s["trial_data"] = "derive(seed, sweep_trial, t) seeds the mixture and forest of trial t";
  }
  return s;
}

CoordinateModel coords_of(const std::string& s) { return coordinate_model_from_string(s); }

/// Manifold whose dimension is taken from the file's column count.
ManifoldSpec open_hyperboloid(double curvature) { return {0, curvature, GeometryKind::hyperboloid}; }
ManifoldSpec open_euclidean() { return {0, 1.0, GeometryKind::euclidean}; }

const std::vector<std::string> kGeometries{"hyperboloid", "euclidean"};
const std::vector<std::string> kModels{"tree", "forest"};
const std::vector<std::string> kImpurities{"gini", "entropy", "mse"};
const std::vector<std::string> kMidpoints{"geodesic", "naive"};
const std::vector<std::string> kCoords{"hyperboloid", "poincare", "klein"};
const std::vector<std::string> kTasks{"classification", "regression"};
const std::vector<std::string> kAxes{"n_samples", "dim", "n_trees", "max_depth"};

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  int classes = 2;
  int dim = 2;
  double curvature = 1.0;
  double noise = 1.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string coords = "hyperboloid";
  std::string out;
  int jobs = 0;
};

void add_generate(CLI::App& app, GenerateArgs& a) {
  app.add_option("--classes", a.classes, "Number of mixture components")->capture_default_str()
      ->check(CLI::Range(2, 1 << 20));
  app.add_option("--dim", a.dim, "Manifold dimension D")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--curvature", a.curvature, "Curvature magnitude K")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--noise", a.noise, "Covariance scale a")->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--n", a.n, "Number of samples")->required()->check(CLI::PositiveNumber);
  app.add_option("--seed", a.seed, "Random seed")->capture_default_str();
  app.add_option("--coords", a.coords, "Coordinates written to the CSV")->capture_default_str()
      ->check(CLI::IsMember(kCoords));
  app.add_option("--out", a.out, "Output CSV (.gz compresses)")->required();
  app.add_option("--jobs", a.jobs, "Worker threads (default: GEODESIC_FOREST_JOBS or all cores)");
}

int cmd_generate(const GenerateArgs& a, RunManifest& m, std::ostream& out) {
  GaussianMixtureSpec spec{a.classes, a.dim, a.curvature, a.noise, a.seed};
  const int jobs = resolve_jobs(a.jobs);
  const Dataset data = sample_gaussian_mixture(spec, a.n, jobs);
  save_dataset(data, a.out, coords_of(a.coords));

  m.doc["config"] = {{"classes", a.classes}, {"dim", a.dim},     {"curvature", a.curvature},
                     {"noise", a.noise},     {"n", a.n},         {"coords", a.coords},
                     {"jobs", jobs}};
  m.doc["seeds"] = {{"seed", a.seed}, {"streams", stream_notes("mixture")}};
  m.doc["outputs"].push_back(a.out);
  m.write(manifest_path_for(a.out));
  out << "wrote " << data.size() << " rows to " << a.out << "\n";
  return kSuccess;
}

// --------------------------------------------------------------------- fit

struct FitArgs {
  std::string data;
  std::string geometry = "hyperboloid";
  std::string model = "tree";
  int max_depth = 3;
  int trees = 12;
  std::string impurity;
  std::string midpoint = "geodesic";
  std::string coords = "hyperboloid";
  std::string task;
  double curvature = 1.0;
  int min_samples_leaf = 1;
  int min_samples_split = 2;
  std::string max_features = "all";
  bool hard_vote = false;
  bool no_bootstrap = false;
  bool strict = false;
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 0;
};

void add_fit(CLI::App& app, FitArgs& a) {
  app.add_option("--data", a.data, "Training CSV")->required()->check(CLI::ExistingFile);
  app.add_option("--geometry", a.geometry, "Split geometry")->capture_default_str()->check(CLI::IsMember(kGeometries));
  app.add_option("--model", a.model, "Single tree or forest")->capture_default_str()->check(CLI::IsMember(kModels));
  app.add_option("--max-depth", a.max_depth, "Maximum tree depth")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--trees", a.trees, "Trees in a forest")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--impurity", a.impurity, "gini|entropy|mse (default: gini, or mse for regression)")
      ->check(CLI::IsMember(kImpurities));
  app.add_option("--midpoint", a.midpoint, "Candidate threshold rule")->capture_default_str()
      ->check(CLI::IsMember(kMidpoints));
  app.add_option("--coords", a.coords, "Coordinates used in the CSV")->capture_default_str()
      ->check(CLI::IsMember(kCoords));
  app.add_option("--task", a.task, "classification|regression (default from impurity)")->check(CLI::IsMember(kTasks));
  app.add_option("--curvature", a.curvature, "Curvature magnitude K of the data")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--min-samples-leaf", a.min_samples_leaf)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--min-samples-split", a.min_samples_split)->capture_default_str()->check(CLI::Range(2, 1 << 30));
  app.add_option("--max-features", a.max_features, "Dimensions tried per split: all or a count")
      ->capture_default_str();
  app.add_flag("--hard-vote", a.hard_vote, "Forest majority vote instead of averaged probabilities");
  app.add_flag("--no-bootstrap", a.no_bootstrap, "Train every forest tree on all rows");
  app.add_flag("--strict", a.strict, "Tight on-manifold tolerance");
  app.add_option("--seed", a.seed, "Random seed")->capture_default_str();
  app.add_option("--out", a.out, "Output model JSON")->required();
  app.add_option("--jobs", a.jobs, "Worker threads (default: GEODESIC_FOREST_JOBS or all cores)");
}

Task resolve_task(const std::string& task, const std::string& impurity) {
  if (!task.empty()) {
    const Task t = task_from_string(task);
    if (!impurity.empty() && (impurity == "mse") != (t == Task::regression))
      throw UsageError("--impurity " + impurity + " does not fit --task " + task);
    return t;
  }
  return impurity == "mse" ? Task::regression : Task::classification;
}

PredictorSpec predictor_from(const FitArgs& a, Task task) {
  PredictorSpec spec;
  spec.geometry = geometry_kind_from_string(a.geometry);
  spec.model = model_kind_from_string(a.model);
  auto& tc = spec.forest.tree;
  tc.task = task;
  tc.impurity = a.impurity.empty() ? (task == Task::regression ? Impurity::mse : Impurity::gini)
                                   : impurity_from_string(a.impurity);
  tc.max_depth = a.max_depth;
  tc.min_samples_leaf = a.min_samples_leaf;
  tc.min_samples_split = a.min_samples_split;
  tc.midpoint_mode = midpoint_mode_from_string(a.midpoint);
  if (a.max_features == "all") {
    tc.max_features = 0;
  } else {
    int v = 0;
    const auto* end = a.max_features.data() + a.max_features.size();
    const auto [ptr, ec] = std::from_chars(a.max_features.data(), end, v);
    if (ec != std::errc{} || ptr != end || v < 1) throw UsageError("--max-features must be 'all' or a positive count");
    tc.max_features = v;
  }
  spec.forest.n_trees = a.trees;
  spec.forest.bootstrap = !a.no_bootstrap;
  spec.forest.hard_vote = a.hard_vote;
  spec.name = (spec.geometry == GeometryKind::hyperboloid ? "hyper" : "euclid") +
              std::string(spec.model == ModelKind::tree ? "dt" : "rf");
  try {
    spec.forest.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

/// Loads a CSV for `target`. Euclidean targets read raw columns, except when
/// the file holds Poincare or Klein coordinates, which go through the hyperboloid.
Dataset load_for(const std::string& path, const ManifoldSpec& target, CoordinateModel coords, Task task,
                 Strictness strictness, double curvature) {
  LoadOptions opt;
  opt.coords = coords;
  opt.task = task;
  opt.strictness = strictness;
  if (target.is_hyperboloid()) return load_dataset(path, target, opt);
  if (coords == CoordinateModel::hyperboloid) {
    opt.validate_manifold = false;
    return load_dataset(path, target, opt);
  }
  const int dim = target.dim > 0 ? target.dim - 1 : 0;
  return with_geometry(load_dataset(path, ManifoldSpec{dim, curvature, GeometryKind::hyperboloid}, opt), GeometryKind::euclidean);
}

double training_score(const FittedModel& model, const Dataset& data, int jobs) {
  const auto pred = model.predict(data.points, Strictness::lenient, jobs);
  if (data.task == Task::classification) return accuracy(data.labels, pred);
  double sse = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) sse += (pred[i] - data.labels[i]) * (pred[i] - data.labels[i]);
  return sse / static_cast<double>(pred.size());
}

int cmd_fit(const FitArgs& a, RunManifest& m, std::ostream& out) {
  const Task task = resolve_task(a.task, a.impurity);
  const PredictorSpec spec = predictor_from(a, task);
  const int jobs = resolve_jobs(a.jobs);
  const Strictness strictness = a.strict ? Strictness::strict : Strictness::lenient;

  const ManifoldSpec target = spec.geometry == GeometryKind::hyperboloid ? open_hyperboloid(a.curvature)
                                                                         : open_euclidean();
  const Dataset data = load_for(a.data, target, coords_of(a.coords), task, strictness, a.curvature);
  const FittedModel model = fit_predictor(data, spec, a.seed, jobs);
  save_model(model, a.out);

  const double score = training_score(model, data, jobs);
  m.doc["config"] = {{"predictor", spec.to_text()}, {"task", to_string(task)}, {"coords", a.coords},
                     {"curvature", a.curvature},   {"strict", a.strict},       {"jobs", jobs}};
  m.doc["seeds"] = {{"seed", a.seed}, {"streams", stream_notes("fit")}};
  m.doc["inputs"].push_back(a.data);
  m.doc["outputs"].push_back(a.out);
  m.doc["results"] = {{"n_train", data.size()}};
  if (task == Task::classification)
    m.doc["results"]["training_accuracy"] = score;
  else
    m.doc["results"]["training_mse"] = score;
  m.write(manifest_path_for(a.out));
  out << "fitted " << spec.name << " on " << data.size() << " rows; training "
      << (task == Task::classification ? "accuracy " : "mse ") << num(score) << "\n";
  return kSuccess;
}

// ----------------------------------------------------------------- predict

struct PredictArgs {
  std::string model;
  std::string data;
  std::string out;
  std::string coords = "hyperboloid";
  double curvature = 1.0;
  bool proba = false;
  bool strict = false;
  int jobs = 0;
};

void add_predict(CLI::App& app, PredictArgs& a) {
  app.add_option("--model", a.model, "Model JSON from fit")->required()->check(CLI::ExistingFile);
  app.add_option("--data", a.data, "CSV to predict (label column is used for accuracy)")->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", a.out, "Output CSV of predictions")->required();
  app.add_option("--coords", a.coords, "Coordinates used in the CSV")->capture_default_str()
      ->check(CLI::IsMember(kCoords));
  app.add_option("--curvature", a.curvature, "K for converting Poincare/Klein input of Euclidean models")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_flag("--proba", a.proba, "Also write class probabilities");
  app.add_flag("--strict", a.strict, "Reject off-manifold rows");
  app.add_option("--jobs", a.jobs, "Worker threads (default: GEODESIC_FOREST_JOBS or all cores)");
}

int cmd_predict(const PredictArgs& a, RunManifest& m, std::ostream& out) {
  const FittedModel model = load_model(a.model);
  const int jobs = resolve_jobs(a.jobs);
  const Strictness strictness = a.strict ? Strictness::strict : Strictness::lenient;
  const Task task = model.task();
  const Dataset data = load_for(a.data, model.manifold(), coords_of(a.coords), task, strictness, a.curvature);
  if (a.proba && task != Task::classification) throw UsageError("--proba needs a classification model");

  const auto pred = model.predict(data.points, strictness, jobs);
  PointMatrix proba;
  if (a.proba) proba = model.predict_proba(data.points, strictness, jobs);

  const auto& classes = model.classes();
  std::ostringstream csv;
  csv << "prediction";
  if (a.proba)
    for (const auto& c : classes) csv << ",p_" << c;
  csv << '\n';
  std::size_t hits = 0;
  double sse = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (task == Task::classification) {
      const std::string& name = classes.at(static_cast<std::size_t>(pred[i]));
      csv << name;
      hits += name == data.class_names[static_cast<std::size_t>(data.labels[i])];
    } else {
      csv << num(pred[i]);
      sse += (pred[i] - data.labels[i]) * (pred[i] - data.labels[i]);
    }
    if (a.proba)
      for (std::size_t c = 0; c < proba.cols(); ++c) csv << ',' << num(proba(i, c));
    csv << '\n';
  }
  write_text_file(a.out, csv.str());

  const double n = static_cast<double>(pred.size());
  m.doc["config"] = {{"coords", a.coords}, {"proba", a.proba}, {"strict", a.strict}, {"jobs", jobs}};
  m.doc["inputs"] = {a.model, a.data};
  m.doc["outputs"].push_back(a.out);
  if (task == Task::classification) {
    m.doc["results"] = {{"n", pred.size()}, {"accuracy", static_cast<double>(hits) / n}};
    out << "accuracy " << num(static_cast<double>(hits) / n) << " on " << pred.size() << " rows\n";
  } else {
    m.doc["results"] = {{"n", pred.size()}, {"mse", sse / n}};
    out << "mse " << num(sse / n) << " on " << pred.size() << " rows\n";
  }
  m.write(manifest_path_for(a.out));
  return kSuccess;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string data;
  std::vector<std::string> predictors;
  std::size_t folds = 5;
  std::size_t seeds = 10;
  std::uint64_t seed = 0;
  std::string coords = "hyperboloid";
  double curvature = 1.0;
  std::string out_dir;
  int jobs = 0;
};

void add_evaluate(CLI::App& app, EvaluateArgs& a) {
  app.add_option("--data", a.data, "Hyperboloid dataset CSV")->required()->check(CLI::ExistingFile);
  app.add_option("--predictor", a.predictors,
                 "Predictor spec, e.g. geometry=euclidean,model=forest,trees=12 (repeatable; "
                 "default: hyperdt, eucliddt, hyperrf, euclidrf)");
  app.add_option("--folds", a.folds, "CV folds")->capture_default_str()->check(CLI::Range(2, 1 << 20));
  app.add_option("--seeds", a.seeds, "Number of CV seeds (seed, seed+1, ...)")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", a.seed, "First CV seed")->capture_default_str();
  app.add_option("--coords", a.coords, "Coordinates used in the CSV")->capture_default_str()
      ->check(CLI::IsMember(kCoords));
  app.add_option("--curvature", a.curvature, "Curvature magnitude K of the data")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--out-dir", a.out_dir, "Directory for cv_records.csv, summary.json, manifest.json")->required();
  app.add_option("--jobs", a.jobs, "Worker threads (default: GEODESIC_FOREST_JOBS or all cores)");
}

int cmd_evaluate(const EvaluateArgs& a, RunManifest& m, std::ostream& out) {
  std::vector<PredictorSpec> specs;
  const std::vector<std::string> texts =
      a.predictors.empty() ? std::vector<std::string>{"geometry=hyperboloid,model=tree", "geometry=euclidean,model=tree",
                                                      "geometry=hyperboloid,model=forest",
                                                      "geometry=euclidean,model=forest"}
                           : a.predictors;
  for (const auto& t : texts) {
    PredictorSpec spec;
    try {
      spec = PredictorSpec::parse(t);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--predictor: ") + e.what());
    }
    // Repeated names get a numeric suffix so each spec keeps its own scores.
    const std::string base = spec.name;
    for (int k = 2;; ++k) {
      const bool taken = std::any_of(specs.begin(), specs.end(), [&](const auto& s) { return s.name == spec.name; });
      if (!taken) break;
      spec.name = base + "_" + std::to_string(k);
    }
    specs.push_back(spec);
  }
  const int jobs = resolve_jobs(a.jobs);
  LoadOptions opt;
  opt.coords = coords_of(a.coords);
  const Dataset data = load_dataset(a.data, open_hyperboloid(a.curvature), opt);

  std::vector<std::uint64_t> seeds;
  for (std::size_t s = 0; s < a.seeds; ++s) seeds.push_back(a.seed + s);
  const CVResult result = cross_validate(data, specs, a.folds, seeds, jobs);

  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  write_text_file(dir / "cv_records.csv", cv_records_csv(result));
  Json summary = cv_summary_json(result);
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");

  Json preds = Json::array();
  for (const auto& s : specs) preds.push_back(s.to_text());
  m.doc["config"] = {{"predictors", preds}, {"folds", a.folds}, {"coords", a.coords},
                     {"curvature", a.curvature}, {"jobs", jobs}};
  m.doc["seeds"] = {{"cv_seeds", seeds}, {"streams", stream_notes("evaluate")}};
  m.doc["inputs"].push_back(a.data);
  m.doc["outputs"] = {(dir / "cv_records.csv").string(), (dir / "summary.json").string()};
  m.write(dir / "manifest.json");

  for (const auto& s : specs) {
    const auto& mean = summary["means"][s.name];
    out << std::left << std::setw(16) << s.name << " micro-F1 " << std::fixed << std::setprecision(4)
        << mean["micro_f1"].get<double>() << " +- " << summary["stds"][s.name]["micro_f1"].get<double>()
        << "  macro-F1 " << mean["macro_f1"].get<double>() << "  fit " << std::setprecision(6)
        << mean["fit_seconds"].get<double>() << "s\n";
  }
  out.unsetf(std::ios::floatfield);
  for (const auto& t : summary["t_tests"]) {
    out << "t-test " << t["a"].get<std::string>() << " vs " << t["b"].get<std::string>() << ": ";
    if (t["status"] == "identical")
      out << "identical\n";
    else
      out << "t=" << t["t"].dump() << " p=" << t["p"].dump() << "\n";
  }
  return kSuccess;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string axis = "n_samples";
  std::vector<double> values;
  int trials = 20;
  int classes = 5;
  int dim = 2;
  double curvature = 1.0;
  double noise = 1.0;
  std::size_t n = 1000;
  std::size_t n_test = 200;
  int trees = 12;
  int max_depth = 3;
  std::string geometry = "hyperboloid";
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 0;
};

void add_sweep(CLI::App& app, SweepArgs& a) {
  app.add_option("--axis", a.axis, "Swept quantity")->capture_default_str()->check(CLI::IsMember(kAxes));
  app.add_option("--values", a.values, "Grid values, comma separated")->required()->delimiter(',');
  app.add_option("--trials", a.trials, "Fresh datasets per grid value")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--classes", a.classes)->capture_default_str()->check(CLI::Range(2, 1 << 20));
  app.add_option("--dim", a.dim)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--curvature", a.curvature)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--noise", a.noise)->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--n", a.n, "Training samples")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--n-test", a.n_test, "Held-out samples for micro-F1")->capture_default_str();
  app.add_option("--trees", a.trees)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--max-depth", a.max_depth)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--geometry", a.geometry)->capture_default_str()->check(CLI::IsMember(kGeometries));
  app.add_option("--seed", a.seed)->capture_default_str();
  app.add_option("--out", a.out, "Output CSV")->required();
  app.add_option("--jobs", a.jobs, "Worker threads (default: GEODESIC_FOREST_JOBS or all cores)");
}

int cmd_sweep(const SweepArgs& a, RunManifest& m, std::ostream& out) {
  if (a.geometry != "hyperboloid") throw UsageError("sweep trains hyperboloid forests only");
  SweepSpec spec;
  spec.n_classes = a.classes;
  spec.dim = a.dim;
  spec.curvature = a.curvature;
  spec.noise_scale = a.noise;
  spec.n_samples = a.n;
  spec.n_test = a.n_test;
  spec.forest.n_trees = a.trees;
  spec.forest.tree.max_depth = a.max_depth;
  spec.trials = a.trials;
  spec.seed = a.seed;
  const SweepAxis axis = sweep_axis_from_string(a.axis);
  const int jobs = resolve_jobs(a.jobs);
  const auto rows = scaling_sweep(axis, a.values, spec, jobs);
  write_text_file(a.out, sweep_csv(axis, rows));

  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(r.value);
    ys.push_back(r.fit_seconds.mean);
  }
  m.doc["config"] = {{"axis", a.axis}, {"values", a.values}, {"trials", a.trials}, {"classes", a.classes},
                     {"dim", a.dim},   {"curvature", a.curvature}, {"noise", a.noise}, {"n", a.n},
                     {"n_test", a.n_test}, {"trees", a.trees}, {"max_depth", a.max_depth}, {"jobs", jobs}};
  m.doc["seeds"] = {{"seed", a.seed}, {"streams", stream_notes("sweep")}};
  m.doc["outputs"].push_back(a.out);
  if (rows.size() >= 2) {
    const auto fit = least_squares_line(xs, ys);
    m.doc["results"] = {{"fit_seconds_slope", fit.slope}, {"fit_seconds_intercept", fit.intercept},
                        {"fit_seconds_r_squared", fit.r_squared}};
    out << "fit time vs " << a.axis << ": slope " << num(fit.slope) << " s/unit, R^2 " << num(fit.r_squared) << "\n";
  }
  m.write(manifest_path_for(a.out));
  return kSuccess;
}

// -------------------------------------------------------------- boundaries

struct BoundariesArgs {
  std::string model;
  std::string out;
  std::size_t resolution = 512;
  std::size_t samples = 1000;
  double extent = 10.0;
};

void add_boundaries(CLI::App& app, BoundariesArgs& a) {
  app.add_option("--model", a.model, "Tree model JSON fitted on D=2 hyperboloid data")->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", a.out, "Output JSON")->required();
  app.add_option("--resolution", a.resolution, "Class grid cells per side")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--samples", a.samples, "Points sampled per boundary")->capture_default_str()
      ->check(CLI::Range(2, 1 << 24));
  app.add_option("--extent", a.extent, "Geodesic parameter range (-extent, extent)")->capture_default_str()
      ->check(CLI::PositiveNumber);
}

int cmd_boundaries(const BoundariesArgs& a, RunManifest& m, std::ostream& out) {
  const FittedModel model = load_model(a.model);
  if (!model.tree()) throw std::runtime_error("boundaries needs a single-tree model, got a forest");
  BoundaryOptions opt;
  opt.grid_resolution = a.resolution;
  opt.samples = a.samples;
  opt.t_extent = a.extent;
  const auto exported = export_boundaries(*model.tree(), opt);
  write_text_file(a.out, to_json(exported).dump() + "\n");

  m.doc["config"] = {{"resolution", a.resolution}, {"samples", a.samples}, {"extent", a.extent}};
  m.doc["inputs"].push_back(a.model);
  m.doc["outputs"].push_back(a.out);
  m.write(manifest_path_for(a.out));
  out << "wrote " << exported.boundaries.size() << " boundaries to " << a.out << "\n";
  return kSuccess;
}

// ----------------------------------------------------------------- convert

struct ConvertArgs {
  std::string data;
  std::string from = "hyperboloid";
  std::string to;
  double curvature = 1.0;
  std::string out;
};

void add_convert(CLI::App& app, ConvertArgs& a) {
  app.add_option("--data", a.data, "Input CSV")->required()->check(CLI::ExistingFile);
  app.add_option("--from", a.from, "Coordinates of the input")->capture_default_str()->check(CLI::IsMember(kCoords));
  app.add_option("--to", a.to, "Coordinates of the output")->required()->check(CLI::IsMember(kCoords));
  app.add_option("--curvature", a.curvature, "Curvature magnitude K")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--out", a.out, "Output CSV")->required();
}

int cmd_convert(const ConvertArgs& a, RunManifest& m, std::ostream& out) {
  LoadOptions opt;
  opt.coords = coords_of(a.from);
  const Dataset data = load_dataset(a.data, open_hyperboloid(a.curvature), opt);
  save_dataset(data, a.out, coords_of(a.to));
  m.doc["config"] = {{"from", a.from}, {"to", a.to}, {"curvature", a.curvature}};
  m.doc["inputs"].push_back(a.data);
  m.doc["outputs"].push_back(a.out);
  m.write(manifest_path_for(a.out));
  out << "converted " << data.size() << " rows from " << a.from << " to " << a.to << "\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::string started = utc_now();
  CLI::App app{"Decision trees and random forests on the hyperboloid model of hyperbolic space", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  GenerateArgs gen;
  FitArgs fit;
  PredictArgs pred;
  EvaluateArgs eval;
  SweepArgs sweep;
  BoundariesArgs bounds;
  ConvertArgs conv;
  auto* c_gen = app.add_subcommand("generate", "Sample a wrapped-normal mixture on the hyperboloid");
  auto* c_fit = app.add_subcommand("fit", "Fit a tree or forest");
  auto* c_pred = app.add_subcommand("predict", "Predict with a fitted model");
  auto* c_eval = app.add_subcommand("evaluate", "Cross-validate predictors and compare them with paired t-tests");
  auto* c_sweep = app.add_subcommand("sweep", "Forest fit-time and accuracy scaling sweep");
  auto* c_bounds = app.add_subcommand("boundaries", "Export a D=2 tree's boundaries on the Poincare disk");
  auto* c_conv = app.add_subcommand("convert", "Convert a CSV between hyperboloid, Poincare and Klein coordinates");
  add_generate(*c_gen, gen);
  add_fit(*c_fit, fit);
  add_predict(*c_pred, pred);
  add_evaluate(*c_eval, eval);
  add_sweep(*c_sweep, sweep);
  add_boundaries(*c_bounds, bounds);
  add_convert(*c_conv, conv);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  auto* chosen = app.get_subcommands().front();
  RunManifest manifest(chosen->get_name(), args, started);
  try {
    if (chosen == c_gen) return cmd_generate(gen, manifest, out);
    if (chosen == c_fit) return cmd_fit(fit, manifest, out);
    if (chosen == c_pred) return cmd_predict(pred, manifest, out);
    if (chosen == c_eval) return cmd_evaluate(eval, manifest, out);
    if (chosen == c_sweep) return cmd_sweep(sweep, manifest, out);
    if (chosen == c_bounds) return cmd_boundaries(bounds, manifest, out);
    return cmd_convert(conv, manifest, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << chosen->help();
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

}  // namespace geoforest::cli
