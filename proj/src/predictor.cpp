#include "geoforest/predictor.hpp"

#include <sstream>

namespace geoforest {

std::string to_string(ModelKind kind) { return kind == ModelKind::tree ? "tree" : "forest"; }

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "tree") return ModelKind::tree;
  if (name == "forest") return ModelKind::forest;
  throw std::invalid_argument("unknown model kind '" + name + "'");
}

const ManifoldSpec& FittedModel::manifold() const {
  return tree() ? tree()->manifold() : forest()->manifold();
}

const std::vector<std::string>& FittedModel::classes() const {
  return tree() ? tree()->classes() : forest()->classes();
}

Task FittedModel::task() const { return tree() ? tree()->config().task : forest()->task(); }

std::vector<double> FittedModel::predict(const PointMatrix& points, Strictness s, int jobs) const {
  return tree() ? tree()->predict(points, s) : forest()->predict(points, s, jobs);
}

PointMatrix FittedModel::predict_proba(const PointMatrix& points, Strictness s, int jobs) const {
  return tree() ? tree()->predict_proba(points, s) : forest()->predict_proba(points, s, jobs);
}

Json FittedModel::to_json() const { return tree() ? tree()->to_json() : forest()->to_json(); }

FittedModel FittedModel::from_json(const Json& j) {
  if (j.contains("trees")) return ForestModel::from_json(j);
  return TreeModel::from_json(j);
}

namespace {

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(v, &used);
  } catch (...) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument("predictor key '" + key + "' expects an integer");
  return out;
}

}  // namespace

PredictorSpec PredictorSpec::parse(const std::string& text) {
  PredictorSpec spec;
  bool named = false;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("predictor item '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string v = item.substr(eq + 1);
    auto& tc = spec.forest.tree;
    if (key == "name") {
      spec.name = v;
      named = true;
    } else if (key == "geometry") {
      spec.geometry = geometry_kind_from_string(v);
    } else if (key == "model") {
      spec.model = model_kind_from_string(v);
    } else if (key == "max_depth" || key == "max-depth") {
      tc.max_depth = parse_int(key, v);
    } else if (key == "min_samples_leaf" || key == "min-samples-leaf") {
      tc.min_samples_leaf = parse_int(key, v);
    } else if (key == "min_samples_split" || key == "min-samples-split") {
      tc.min_samples_split = parse_int(key, v);
    } else if (key == "impurity") {
      tc.impurity = impurity_from_string(v);
      tc.task = tc.impurity == Impurity::mse ? Task::regression : Task::classification;
    } else if (key == "midpoint") {
      tc.midpoint_mode = midpoint_mode_from_string(v);
    } else if (key == "max_features" || key == "max-features") {
      tc.max_features = v == "all" ? 0 : parse_int(key, v);
    } else if (key == "trees") {
      spec.forest.n_trees = parse_int(key, v);
    } else if (key == "bootstrap") {
      spec.forest.bootstrap = parse_bool(v);
    } else if (key == "vote") {
      if (v != "soft" && v != "hard") throw std::invalid_argument("vote must be soft or hard");
      spec.forest.hard_vote = v == "hard";
    } else {
      throw std::invalid_argument("unknown predictor key '" + key + "'");
    }
  }
  spec.forest.validate();
  if (!named) {
    spec.name = (spec.geometry == GeometryKind::hyperboloid ? "hyper" : "euclid") +
                std::string(spec.model == ModelKind::tree ? "dt" : "rf");
  }
  return spec;
}

std::string PredictorSpec::to_text() const {
  const auto& tc = forest.tree;
  std::ostringstream os;
  os << "name=" << name << ",geometry=" << to_string(geometry) << ",model=" << to_string(model)
     << ",max_depth=" << tc.max_depth << ",min_samples_leaf=" << tc.min_samples_leaf
     << ",min_samples_split=" << tc.min_samples_split << ",impurity=" << to_string(tc.impurity)
     << ",midpoint=" << to_string(tc.midpoint_mode) << ",max_features=" << tc.max_features;
  if (model == ModelKind::forest)
    os << ",trees=" << forest.n_trees << ",bootstrap=" << (forest.bootstrap ? "true" : "false")
       << ",vote=" << (forest.hard_vote ? "hard" : "soft");
  return os.str();
}

Dataset with_geometry(const Dataset& data, GeometryKind geometry) {
  if (data.manifold.kind == geometry) return data;
  if (geometry == GeometryKind::hyperboloid)
    throw std::invalid_argument("cannot reinterpret Euclidean features as hyperboloid points");
  Dataset out = data;
  out.manifold = ManifoldSpec::euclidean(static_cast<int>(data.points.cols()));
  return out;
}

FittedModel fit_predictor(const Dataset& data, const PredictorSpec& spec, std::uint64_t seed, int jobs) {
  const Dataset view = with_geometry(data, spec.geometry);
  if (spec.model == ModelKind::tree) {
    TreeConfig tc = spec.forest.tree;
    tc.seed = seed;
    return fit_tree(view, tc);
  }
  ForestConfig fc = spec.forest;
  fc.seed = seed;
  return fit_forest(view, fc, jobs);
}

void save_model(const FittedModel& model, const std::filesystem::path& path) {
  write_text_file(path, model.to_json().dump(2) + "\n");
}

FittedModel load_model(const std::filesystem::path& path) {
  return FittedModel::from_json(Json::parse(read_text_file(path)));
}

}  // namespace geoforest
