#include "geoforest/forest.hpp"

#include <boost/random/uniform_int_distribution.hpp>

#include <numeric>
#include <stdexcept>

#include "geoforest/parallel.hpp"
#include "geoforest/rng.hpp"

namespace geoforest {

void ForestConfig::validate() const {
  if (n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
  tree.validate();
}

ForestModel::ForestModel(ForestConfig config, std::vector<TreeModel> trees)
    : config_(std::move(config)), trees_(std::move(trees)) {
  if (trees_.empty()) throw std::invalid_argument("forest needs at least one tree");
  for (const auto& t : trees_) {
    if (!(t.manifold() == trees_.front().manifold()) || t.classes() != trees_.front().classes())
      throw std::invalid_argument("forest trees disagree on manifold or class vocabulary");
  }
}

std::vector<std::size_t> bootstrap_sample(std::size_t n, const ForestConfig& config, std::size_t tree_index) {
  std::vector<std::size_t> rows(n);
  if (!config.bootstrap) {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
  }
  auto gen = make_stream(config.seed, StreamDomain::bootstrap, tree_index);
  boost::random::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (auto& r : rows) r = pick(gen);
  return rows;
}

namespace {

TreeModel fit_member(const Dataset& data, const ForestConfig& config, std::size_t i) {
  TreeConfig tree_config = config.tree;
  tree_config.seed = derive_seed(config.seed, StreamDomain::tree, i);
  return fit_tree(data, tree_config, bootstrap_sample(data.size(), config, i));
}

void check_forest_input(const Dataset& data, const ForestConfig& config) {
  config.validate();
  if (data.size() == 0) throw std::invalid_argument("fit_forest: empty dataset");
  data.validate();
}

}  // namespace

ForestModel fit_forest(const Dataset& data, const ForestConfig& config, int jobs) {
  check_forest_input(data, config);
  const auto n_trees = static_cast<std::ptrdiff_t>(config.n_trees);
  std::vector<TreeModel> trees(static_cast<std::size_t>(n_trees));
  ExceptionCollector errors;
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_jobs(jobs))
  for (std::ptrdiff_t t = 0; t < n_trees; ++t) errors.capture([&] {
    const auto i = static_cast<std::size_t>(t);
    trees[i] = fit_member(data, config, i);
  });
  errors.rethrow();
  return ForestModel(config, std::move(trees));
}

ForestModel fit_forest_reference(const Dataset& data, const ForestConfig& config) {
  check_forest_input(data, config);
  std::vector<TreeModel> trees;
  for (std::size_t i = 0; i < static_cast<std::size_t>(config.n_trees); ++i) trees.push_back(fit_member(data, config, i));
  return ForestModel(config, std::move(trees));
}

PointMatrix ForestModel::predict_proba(const PointMatrix& points, Strictness s, int jobs) const {
  if (task() != Task::classification)
    throw std::logic_error("predict_proba is only defined for classification forests");
  check_prediction_input(points, manifold(), s);
  const std::size_t C = classes().size();
  const double n_trees = static_cast<double>(trees_.size());
  PointMatrix out(points.rows(), C);

  const auto n = static_cast<std::ptrdiff_t>(points.rows());
#pragma omp parallel for schedule(static) num_threads(resolve_jobs(jobs))
  for (std::ptrdiff_t pi = 0; pi < n; ++pi) {
    const auto i = static_cast<std::size_t>(pi);
    const auto x = points.row(i);
    auto acc = out.row(i);
    for (const auto& tree : trees_) {
      const auto v = tree.leaf_value(x);
      if (config_.hard_vote) {
        acc[argmax_class(v)] += 1.0;
      } else {
        for (std::size_t c = 0; c < C; ++c) acc[c] += v[c];
      }
    }
    for (double& a : acc) a /= n_trees;
  }
  return out;
}

std::vector<double> ForestModel::predict(const PointMatrix& points, Strictness s, int jobs) const {
  std::vector<double> out(points.rows());
  if (task() == Task::classification) {
    const auto proba = predict_proba(points, s, jobs);
    for (std::size_t i = 0; i < points.rows(); ++i) out[i] = static_cast<double>(argmax_class(proba.row(i)));
    return out;
  }
  check_prediction_input(points, manifold(), s);
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
#pragma omp parallel for schedule(static) num_threads(resolve_jobs(jobs))
  for (std::ptrdiff_t pi = 0; pi < n; ++pi) {
    const auto i = static_cast<std::size_t>(pi);
    double sum = 0;
    for (const auto& tree : trees_) sum += tree.leaf_value(points.row(i))[0];
    out[i] = sum / static_cast<double>(trees_.size());
  }
  return out;
}

Json to_json(const ForestConfig& c) {
  Json j;
  j["n_trees"] = c.n_trees;
  j["bootstrap"] = c.bootstrap;
  j["hard_vote"] = c.hard_vote;
  j["seed"] = c.seed;
  j["tree"] = to_json(c.tree);
  return j;
}

ForestConfig forest_config_from_json(const Json& j) {
  ForestConfig c;
  c.n_trees = j.at("n_trees").get<int>();
  c.bootstrap = j.at("bootstrap").get<bool>();
  c.hard_vote = j.value("hard_vote", false);
  c.seed = j.at("seed").get<std::uint64_t>();
  c.tree = tree_config_from_json(j.at("tree"));
  c.validate();
  return c;
}

Json ForestModel::to_json() const {
  Json j;
  j["format_version"] = kModelFormatVersion;
  j["config"] = geoforest::to_json(config_);
  Json trees = Json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  j["trees"] = std::move(trees);
  return j;
}

ForestModel ForestModel::from_json(const Json& j) {
  const int version = j.at("format_version").get<int>();
  if (version != kModelFormatVersion)
    throw std::runtime_error("unsupported forest format_version " + std::to_string(version));
  auto config = forest_config_from_json(j.at("config"));
  std::vector<TreeModel> trees;
  for (const auto& t : j.at("trees")) trees.push_back(TreeModel::from_json(t));
  return ForestModel(std::move(config), std::move(trees));
}

}  // namespace geoforest
