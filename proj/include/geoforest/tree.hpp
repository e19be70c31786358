#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoforest/dataset.hpp"
#include "geoforest/split.hpp"

namespace geoforest {

using Json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;

/// Flat node storage. Internal nodes have children; leaves carry `value`
/// (class probabilities, or {mean} for regression).
struct TreeNode {
  SplitRule split;
  int left = -1;
  int right = -1;
  std::vector<double> value;
  std::size_t n_train = 0;
  double sin_param = 0.0;
  double cos_param = 0.0;

  bool is_leaf() const { return left < 0; }
};

class TreeModel {
 public:
  TreeModel() = default;
  TreeModel(ManifoldSpec manifold, TreeConfig config, std::vector<std::string> classes,
            std::vector<TreeNode> nodes);

  const ManifoldSpec& manifold() const { return manifold_; }
  const TreeConfig& config() const { return config_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t n_outputs() const;

  std::size_t depth() const;
  std::size_t n_leaves() const;

  /// Index of the leaf `x` lands in; no input validation.
  std::size_t leaf_index(std::span<const double> x) const;
  std::span<const double> leaf_value(std::span<const double> x) const {
    return nodes_[leaf_index(x)].value;
  }

  /// Class ids (classification) or predicted means (regression).
  std::vector<double> predict(const PointMatrix& points, Strictness s = Strictness::lenient) const;
  /// n x C class probabilities. Classification only.
  PointMatrix predict_proba(const PointMatrix& points, Strictness s = Strictness::lenient) const;

  Json to_json() const;
  static TreeModel from_json(const Json& j);

  friend bool operator==(const TreeModel& a, const TreeModel& b);

 private:
  ManifoldSpec manifold_;
  TreeConfig config_;
  std::vector<std::string> classes_;
  std::vector<TreeNode> nodes_;
};

/// Greedy CART fit. Rows in `sample` (repeats allowed; empty means all rows)
/// form the training multiset.
TreeModel fit_tree(const Dataset& data, const TreeConfig& config,
                   std::span<const std::size_t> sample = {});

/// Argmax with ties to the smallest class id.
std::size_t argmax_class(std::span<const double> probs);

/// Checks that `points` match the model geometry. Throws on a dimension
/// mismatch; off-manifold rows throw in strict mode and warn once otherwise.
void check_prediction_input(const PointMatrix& points, const ManifoldSpec& m, Strictness s);

Json to_json(const ManifoldSpec& m);
ManifoldSpec manifold_from_json(const Json& j);
Json to_json(const TreeConfig& c);
TreeConfig tree_config_from_json(const Json& j);

}  // namespace geoforest
