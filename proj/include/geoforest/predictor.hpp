#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "geoforest/forest.hpp"

namespace geoforest {

enum class ModelKind { tree, forest };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// A fitted tree or forest behind one interface.
class FittedModel {
 public:
  FittedModel(TreeModel tree) : model_(std::move(tree)) {}
  FittedModel(ForestModel forest) : model_(std::move(forest)) {}

  ModelKind kind() const { return std::holds_alternative<TreeModel>(model_) ? ModelKind::tree : ModelKind::forest; }
  const TreeModel* tree() const { return std::get_if<TreeModel>(&model_); }
  const ForestModel* forest() const { return std::get_if<ForestModel>(&model_); }

  const ManifoldSpec& manifold() const;
  const std::vector<std::string>& classes() const;
  Task task() const;

  std::vector<double> predict(const PointMatrix& points, Strictness s = Strictness::lenient, int jobs = 1) const;
  PointMatrix predict_proba(const PointMatrix& points, Strictness s = Strictness::lenient, int jobs = 1) const;

  Json to_json() const;
  /// Documents with a "trees" array load as forests, others as trees.
  static FittedModel from_json(const Json& j);

  friend bool operator==(const FittedModel&, const FittedModel&) = default;

 private:
  std::variant<TreeModel, ForestModel> model_;
};

/// What to train: geometry, tree or forest, and the hyperparameters.
/// Text form: comma-separated key=value pairs, e.g.
/// "name=hyperrf,geometry=hyperboloid,model=forest,max_depth=3,trees=12".
struct PredictorSpec {
  std::string name = "hyperdt";
  GeometryKind geometry = GeometryKind::hyperboloid;
  ModelKind model = ModelKind::tree;
  ForestConfig forest;  // forest.tree configures single trees too

  static PredictorSpec parse(const std::string& text);
  std::string to_text() const;
  friend bool operator==(const PredictorSpec&, const PredictorSpec&) = default;
};

/// Reinterprets hyperboloid data for `geometry`. Euclidean treats the D+1
/// ambient coordinates as raw features.
Dataset with_geometry(const Dataset& data, GeometryKind geometry);

/// Fits per spec; `seed` overrides the tree/forest seeds.
FittedModel fit_predictor(const Dataset& data, const PredictorSpec& spec, std::uint64_t seed, int jobs = 0);

void save_model(const FittedModel& model, const std::filesystem::path& path);
FittedModel load_model(const std::filesystem::path& path);

}  // namespace geoforest
