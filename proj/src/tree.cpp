#include "geoforest/tree.hpp"

#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

#include "geoforest/rng.hpp"

namespace geoforest {

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const TreeConfig& config)
      : data_(data),
        config_(config),
        classification_(config.task == Task::classification),
        dims_(split_dimensions(data.manifold)),
        rng_(make_stream(config.seed, StreamDomain::tree, 0)) {}

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::vector<std::size_t> rows, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[id].n_train = rows.size();

    std::optional<SplitChoice> choice;
    if (depth < config_.max_depth && rows.size() >= static_cast<std::size_t>(config_.min_samples_split) &&
        !is_pure(rows)) {
      const auto dims = node_dimensions();
      choice = best_split(data_, config_, rows, dims);
    }
    if (!choice) {
      make_leaf(id, rows);
      return id;
    }

    const SplitRule rule = choice->rule;
    const double s = std::sin(rule.param);
    const double c = std::cos(rule.param);
    std::vector<std::size_t> left, right;
    for (auto i : rows) {
      if (split_decide_cached(data_.points.row(i), rule.dim, rule.param, s, c, data_.manifold.kind) == 1)
        right.push_back(i);
      else
        left.push_back(i);
    }
    const auto min_leaf = static_cast<std::size_t>(config_.min_samples_leaf);
    if (left.size() < min_leaf || right.size() < min_leaf) {
      make_leaf(id, rows);
      return id;
    }
    rows.clear();
    rows.shrink_to_fit();

    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    TreeNode& node = nodes_[id];
    node.split = rule;
    node.sin_param = s;
    node.cos_param = c;
    node.left = l;
    node.right = r;
    return id;
  }

  bool is_pure(const std::vector<std::size_t>& rows) const {
    const double first = data_.labels[rows.front()];
    return std::all_of(rows.begin(), rows.end(), [&](std::size_t i) { return data_.labels[i] == first; });
  }

  std::vector<int> node_dimensions() {
    const auto k = static_cast<std::size_t>(config_.max_features);
    if (k == 0 || k >= dims_.size()) return dims_;
    std::vector<int> pool = dims_;
    // Partial Fisher-Yates; the chosen subset is kept in ascending order.
    for (std::size_t i = 0; i < k; ++i) {
      boost::random::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng_)]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  void make_leaf(int id, const std::vector<std::size_t>& rows) {
    TreeNode& node = nodes_[id];
    const double n = static_cast<double>(rows.size());
    if (classification_) {
      node.value.assign(data_.n_classes(), 0.0);
      for (auto i : rows) node.value[static_cast<std::size_t>(data_.labels[i])] += 1.0;
      for (double& v : node.value) v /= n;
    } else {
      double sum = 0;
      for (auto i : rows) sum += data_.labels[i];
      node.value = {sum / n};
    }
  }

  const Dataset& data_;
  const TreeConfig& config_;
  bool classification_;
  std::vector<int> dims_;
  SplitMix64 rng_;
  std::vector<TreeNode> nodes_;
};

std::atomic<bool> g_warned_off_manifold{false};

Json node_to_json(const std::vector<TreeNode>& nodes, int id, bool classification) {
  const TreeNode& n = nodes[static_cast<std::size_t>(id)];
  Json j;
  if (n.is_leaf()) {
    if (classification)
      j["probs"] = n.value;
    else
      j["value"] = n.value.at(0);
    j["n_train"] = n.n_train;
    return j;
  }
  j["dim"] = n.split.dim;
  j["param"] = n.split.param;
  j["left"] = node_to_json(nodes, n.left, classification);
  j["right"] = node_to_json(nodes, n.right, classification);
  return j;
}

int node_from_json(const Json& j, std::vector<TreeNode>& nodes, bool classification) {
  const int id = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (j.contains("dim")) {
    SplitRule rule{j.at("dim").get<int>(), j.at("param").get<double>()};
    const int l = node_from_json(j.at("left"), nodes, classification);
    const int r = node_from_json(j.at("right"), nodes, classification);
    TreeNode& n = nodes[static_cast<std::size_t>(id)];
    n.split = rule;
    n.sin_param = std::sin(rule.param);
    n.cos_param = std::cos(rule.param);
    n.left = l;
    n.right = r;
    n.n_train = nodes[static_cast<std::size_t>(l)].n_train + nodes[static_cast<std::size_t>(r)].n_train;
    return id;
  }
  TreeNode& n = nodes[static_cast<std::size_t>(id)];
  if (classification)
    n.value = j.at("probs").get<std::vector<double>>();
  else
    n.value = {j.at("value").get<double>()};
  n.n_train = j.at("n_train").get<std::size_t>();
  return id;
}

std::size_t subtree_depth(const std::vector<TreeNode>& nodes, int id) {
  const auto& n = nodes[static_cast<std::size_t>(id)];
  if (n.is_leaf()) return 0;
  return 1 + std::max(subtree_depth(nodes, n.left), subtree_depth(nodes, n.right));
}

}  // namespace

TreeModel::TreeModel(ManifoldSpec manifold, TreeConfig config, std::vector<std::string> classes,
                     std::vector<TreeNode> nodes)
    : manifold_(manifold), config_(config), classes_(std::move(classes)), nodes_(std::move(nodes)) {
  for (auto& n : nodes_) {
    if (n.is_leaf()) continue;
    validate_rule(n.split, manifold_);
    n.sin_param = std::sin(n.split.param);
    n.cos_param = std::cos(n.split.param);
  }
}

std::size_t TreeModel::n_outputs() const {
  return config_.task == Task::classification ? classes_.size() : 1;
}

std::size_t TreeModel::depth() const { return nodes_.empty() ? 0 : subtree_depth(nodes_, 0); }

std::size_t TreeModel::n_leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t TreeModel::leaf_index(std::span<const double> x) const {
  std::size_t id = 0;
  const auto kind = manifold_.kind;
  while (!nodes_[id].is_leaf()) {
    const TreeNode& n = nodes_[id];
    const int side = split_decide_cached(x, n.split.dim, n.split.param, n.sin_param, n.cos_param, kind);
    id = static_cast<std::size_t>(side == 1 ? n.right : n.left);
  }
  return id;
}

std::size_t argmax_class(std::span<const double> probs) {
  return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

void check_prediction_input(const PointMatrix& points, const ManifoldSpec& m, Strictness s) {
  if (!points.empty() && points.cols() != m.ambient_dim()) {
    std::ostringstream os;
    os << "prediction input has " << points.cols() << " columns, model expects " << m.ambient_dim();
    throw std::invalid_argument(os.str());
  }
  if (!m.is_hyperboloid()) return;
  const double tol = manifold_tolerance(s);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    if (on_manifold(points.row(i), m, tol)) continue;
    if (s == Strictness::strict) {
      std::ostringstream os;
      os << "row " << i << ": point is off the hyperboloid (residual " << manifold_residual(points.row(i), m)
         << ")";
      throw GeometryError(os.str());
    }
    if (!g_warned_off_manifold.exchange(true))
      std::clog << "warning: row " << i << " of prediction input is off the hyperboloid; predicting anyway\n";
    return;
  }
}

std::vector<double> TreeModel::predict(const PointMatrix& points, Strictness s) const {
  check_prediction_input(points, manifold_, s);
  std::vector<double> out(points.rows());
  const bool classification = config_.task == Task::classification;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto v = leaf_value(points.row(i));
    out[i] = classification ? static_cast<double>(argmax_class(v)) : v[0];
  }
  return out;
}

PointMatrix TreeModel::predict_proba(const PointMatrix& points, Strictness s) const {
  if (config_.task != Task::classification)
    throw std::logic_error("predict_proba is only defined for classification trees");
  check_prediction_input(points, manifold_, s);
  PointMatrix out(points.rows(), classes_.size());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto v = leaf_value(points.row(i));
    std::copy(v.begin(), v.end(), out.row(i).begin());
  }
  return out;
}

bool operator==(const TreeModel& a, const TreeModel& b) {
  if (!(a.manifold_ == b.manifold_ && a.config_ == b.config_ && a.classes_ == b.classes_)) return false;
  if (a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[i];
    if (x.left != y.left || x.right != y.right || x.n_train != y.n_train || x.value != y.value) return false;
    if (!x.is_leaf() && !(x.split == y.split)) return false;
  }
  return true;
}

TreeModel fit_tree(const Dataset& data, const TreeConfig& config, std::span<const std::size_t> sample) {
  config.validate();
  if (data.size() == 0) throw std::invalid_argument("fit_tree: empty dataset");
  if (data.task != config.task) throw std::invalid_argument("fit_tree: dataset task does not match config");
  data.validate();

  std::vector<std::size_t> rows;
  if (sample.empty()) {
    rows.resize(data.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  } else {
    rows.assign(sample.begin(), sample.end());
  }
  TreeBuilder builder(data, config);
  auto nodes = builder.build(std::move(rows));
  return TreeModel(data.manifold, config, data.class_names, std::move(nodes));
}

Json to_json(const ManifoldSpec& m) {
  Json j;
  j["kind"] = to_string(m.kind);
  j["D"] = m.dim;
  j["K"] = m.curvature;
  return j;
}

ManifoldSpec manifold_from_json(const Json& j) {
  ManifoldSpec m;
  m.kind = geometry_kind_from_string(j.at("kind").get<std::string>());
  m.dim = j.at("D").get<int>();
  m.curvature = j.at("K").get<double>();
  m.validate();
  return m;
}

Json to_json(const TreeConfig& c) {
  Json j;
  j["max_depth"] = c.max_depth;
  j["min_samples_leaf"] = c.min_samples_leaf;
  j["min_samples_split"] = c.min_samples_split;
  j["impurity"] = to_string(c.impurity);
  j["task"] = to_string(c.task);
  j["midpoint_mode"] = to_string(c.midpoint_mode);
  j["max_features"] = c.max_features;
  j["seed"] = c.seed;
  return j;
}

TreeConfig tree_config_from_json(const Json& j) {
  TreeConfig c;
  c.max_depth = j.at("max_depth").get<int>();
  c.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  c.min_samples_split = j.at("min_samples_split").get<int>();
  c.impurity = impurity_from_string(j.at("impurity").get<std::string>());
  c.task = task_from_string(j.at("task").get<std::string>());
  c.midpoint_mode = midpoint_mode_from_string(j.at("midpoint_mode").get<std::string>());
  c.max_features = j.value("max_features", 0);
  c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

Json TreeModel::to_json() const {
  Json j;
  j["format_version"] = kModelFormatVersion;
  j["manifold"] = geoforest::to_json(manifold_);
  j["config"] = geoforest::to_json(config_);
  j["classes"] = classes_;
  j["nodes"] = nodes_.empty() ? Json() : node_to_json(nodes_, 0, config_.task == Task::classification);
  return j;
}

TreeModel TreeModel::from_json(const Json& j) {
  const int version = j.at("format_version").get<int>();
  if (version != kModelFormatVersion)
    throw std::runtime_error("unsupported model format_version " + std::to_string(version));
  const auto manifold = manifold_from_json(j.at("manifold"));
  const auto config = tree_config_from_json(j.at("config"));
  auto classes = j.at("classes").get<std::vector<std::string>>();
  std::vector<TreeNode> nodes;
  node_from_json(j.at("nodes"), nodes, config.task == Task::classification);
  return TreeModel(manifold, config, std::move(classes), std::move(nodes));
}

}  // namespace geoforest
