#pragma once

#include <cstdint>
#include <vector>

#include "geoforest/tree.hpp"

namespace geoforest {

struct ForestConfig {
  int n_trees = 12;
  TreeConfig tree;
  bool bootstrap = true;
  /// Majority of per-tree argmax votes instead of averaged probabilities.
  bool hard_vote = false;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(ForestConfig config, std::vector<TreeModel> trees);

  const ForestConfig& config() const { return config_; }
  const std::vector<TreeModel>& trees() const { return trees_; }
  const ManifoldSpec& manifold() const { return trees_.front().manifold(); }
  const std::vector<std::string>& classes() const { return trees_.front().classes(); }
  Task task() const { return config_.tree.task; }

  std::vector<double> predict(const PointMatrix& points, Strictness s = Strictness::lenient,
                              int jobs = 1) const;
  PointMatrix predict_proba(const PointMatrix& points, Strictness s = Strictness::lenient,
                            int jobs = 1) const;

  Json to_json() const;
  static ForestModel from_json(const Json& j);

  friend bool operator==(const ForestModel&, const ForestModel&) = default;

 private:
  ForestConfig config_;
  std::vector<TreeModel> trees_;
};

/// Row indices of tree `tree_index`'s training multiset: n draws with
/// replacement from stream(seed, tree_index), or every row when bootstrap is off.
std::vector<std::size_t> bootstrap_sample(std::size_t n, const ForestConfig& config, std::size_t tree_index);

/// Trains trees concurrently on `jobs` workers. The model is the same for any
/// worker count.
ForestModel fit_forest(const Dataset& data, const ForestConfig& config, int jobs = 0);

/// Plain loop without any parallel region; the baseline fit_forest must match.
ForestModel fit_forest_reference(const Dataset& data, const ForestConfig& config);

Json to_json(const ForestConfig& c);
ForestConfig forest_config_from_json(const Json& j);

}  // namespace geoforest
