#include "geoforest/split.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace geoforest {

namespace {

std::vector<std::size_t> all_rows(const Dataset& data, std::span<const std::size_t> indices) {
  if (!indices.empty()) return {indices.begin(), indices.end()};
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

std::vector<int> resolve_dims(const Dataset& data, std::span<const int> dims) {
  if (!dims.empty()) return {dims.begin(), dims.end()};
  return split_dimensions(data.manifold);
}

bool is_classification(const TreeConfig& config) { return config.task == Task::classification; }

/// Running statistics for one side of a split.
struct SideStats {
  std::vector<double> counts;
  double n = 0;
  double sum = 0;
  double sum_sq = 0;

  explicit SideStats(std::size_t n_classes) : counts(n_classes, 0.0) {}

  void add(double y, bool classification) {
    n += 1;
    if (classification) {
      counts[static_cast<std::size_t>(y)] += 1;
    } else {
      sum += y;
      sum_sq += y * y;
    }
  }
  void remove(double y, bool classification) {
    n -= 1;
    if (classification) {
      counts[static_cast<std::size_t>(y)] -= 1;
    } else {
      sum -= y;
      sum_sq -= y * y;
    }
  }
  double impurity(const TreeConfig& config) const {
    return is_classification(config) ? class_impurity(counts, n, config.impurity)
                                     : variance_impurity(n, sum, sum_sq);
  }
};

void check_config_task(const Dataset& data, const TreeConfig& config) {
  if (data.task != config.task)
    throw std::invalid_argument("dataset task does not match tree config task");
}

}  // namespace

std::string to_string(MidpointMode mode) {
  return mode == MidpointMode::geodesic ? "geodesic" : "naive";
}

MidpointMode midpoint_mode_from_string(const std::string& name) {
  if (name == "geodesic") return MidpointMode::geodesic;
  if (name == "naive") return MidpointMode::naive;
  throw std::invalid_argument("unknown midpoint mode '" + name + "'");
}

void TreeConfig::validate() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (min_samples_leaf < 1) throw std::invalid_argument("min_samples_leaf must be >= 1");
  if (min_samples_split < 2) throw std::invalid_argument("min_samples_split must be >= 2");
  if (max_features < 0) throw std::invalid_argument("max_features must be >= 0");
  const bool regression_impurity = impurity == Impurity::mse;
  if (regression_impurity != (task == Task::regression))
    throw std::invalid_argument("impurity '" + to_string(impurity) + "' does not fit task '" +
                                to_string(task) + "'");
}

void validate_rule(const SplitRule& rule, const ManifoldSpec& m) {
  if (m.is_hyperboloid()) {
    if (rule.dim < 1 || rule.dim > m.dim)
      throw std::invalid_argument("hyperbolic split dimension must be in [1, D]");
    if (!valid_split_angle(rule.param))
      throw GeometryError("hyperbolic split angle outside (pi/4, 3pi/4)");
  } else if (rule.dim < 0 || rule.dim >= m.dim) {
    throw std::invalid_argument("euclidean split dimension must be in [0, D-1]");
  }
}

int split_decide(std::span<const double> x, const SplitRule& rule, GeometryKind kind) {
  const int lo = kind == GeometryKind::hyperboloid ? 1 : 0;
  if (rule.dim < lo || static_cast<std::size_t>(rule.dim) >= x.size()) {
    std::ostringstream os;
    os << "split_decide: dimension " << rule.dim << " out of range for a point with " << x.size()
       << " coordinates";
    throw std::invalid_argument(os.str());
  }
  if (kind == GeometryKind::euclidean)
    return split_decide_cached(x, rule.dim, rule.param, 0.0, 0.0, kind);
  return split_decide_cached(x, rule.dim, rule.param, std::sin(rule.param), std::cos(rule.param), kind);
}

int split_decide_minkowski(std::span<const double> x, int dim, double theta) {
  const double v = std::sin(theta) * x[static_cast<std::size_t>(dim)] + std::cos(theta) * x[0];
  return std::max(0.0, v) > 0.0 ? 1 : 0;
}

double split_key(std::span<const double> x, int dim, GeometryKind kind) {
  const auto d = static_cast<std::size_t>(dim);
  return kind == GeometryKind::hyperboloid ? point_angle(x, d) : x[d];
}

double candidate_between(double a, double b, GeometryKind kind, MidpointMode mode) {
  if (kind == GeometryKind::hyperboloid && mode == MidpointMode::geodesic) return midpoint_angle(a, b);
  double mid = a + (b - a) / 2.0;
  // a and b one ulp apart: keep the threshold strictly below b.
  if (mid >= b) mid = a;
  return mid;
}

std::vector<int> split_dimensions(const ManifoldSpec& m) {
  std::vector<int> dims;
  if (m.is_hyperboloid()) {
    for (int d = 1; d <= m.dim; ++d) dims.push_back(d);
  } else {
    for (int d = 0; d < m.dim; ++d) dims.push_back(d);
  }
  return dims;
}

std::vector<SplitRule> candidate_splits(const Dataset& data, int dim, const TreeConfig& config,
                                        std::span<const std::size_t> indices) {
  const auto kind = data.manifold.kind;
  const auto rows = all_rows(data, indices);
  std::vector<double> keys;
  keys.reserve(rows.size());
  for (auto i : rows) keys.push_back(split_key(data.points.row(i), dim, kind));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  std::vector<SplitRule> out;
  if (keys.size() < 2) return out;
  out.reserve(keys.size() - 1);
  for (std::size_t i = 0; i + 1 < keys.size(); ++i)
    out.push_back({dim, candidate_between(keys[i], keys[i + 1], kind, config.midpoint_mode)});
  return out;
}

std::optional<SplitChoice> best_split(const Dataset& data, const TreeConfig& config,
                                      std::span<const std::size_t> indices, std::span<const int> dims_in) {
  check_config_task(data, config);
  const auto rows = all_rows(data, indices);
  if (rows.size() < static_cast<std::size_t>(std::max(2, config.min_samples_split))) return std::nullopt;

  const bool classification = is_classification(config);
  const std::size_t n_classes = classification ? data.n_classes() : 0;
  const auto kind = data.manifold.kind;
  const bool hyperbolic = kind == GeometryKind::hyperboloid;
  const double min_leaf = static_cast<double>(config.min_samples_leaf);

  SideStats parent(n_classes);
  for (auto i : rows) parent.add(data.labels[i], classification);
  const double parent_impurity = parent.impurity(config);
  if (parent_impurity <= 0.0) return std::nullopt;

  std::optional<SplitChoice> best;
  std::vector<std::pair<double, double>> keyed(rows.size());  // (key, label)

  for (int dim : resolve_dims(data, dims_in)) {
    for (std::size_t r = 0; r < rows.size(); ++r)
      keyed[r] = {split_key(data.points.row(rows[r]), dim, kind), data.labels[rows[r]]};
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // The prefix keyed[0..i] is the "low-key" side. On the hyperboloid, low
    // angles satisfy sin(t) x_d - cos(t) x0 > 0 and go right; in Euclidean
    // space low values go left.
    SideStats low(n_classes);
    SideStats high = parent;
    for (std::size_t i = 0; i + 1 < keyed.size(); ++i) {
      low.add(keyed[i].second, classification);
      high.remove(keyed[i].second, classification);
      if (keyed[i].first == keyed[i + 1].first) continue;
      if (low.n < min_leaf || high.n < min_leaf) continue;

      const double param = candidate_between(keyed[i].first, keyed[i + 1].first, kind, config.midpoint_mode);
      const SideStats& left = hyperbolic ? high : low;
      const SideStats& right = hyperbolic ? low : high;
      const double gain = information_gain(parent_impurity, left.n, left.impurity(config), right.n,
                                           right.impurity(config));
      if (gain > kGainTolerance && better_split(gain, dim, param, best)) best = SplitChoice{{dim, param}, gain};
    }
  }
  return best;
}

std::optional<SplitChoice> best_split_reference(const Dataset& data, const TreeConfig& config,
                                                std::span<const std::size_t> indices,
                                                std::span<const int> dims_in) {
  check_config_task(data, config);
  const auto rows = all_rows(data, indices);
  if (rows.size() < static_cast<std::size_t>(std::max(2, config.min_samples_split))) return std::nullopt;

  const bool classification = is_classification(config);
  const std::size_t n_classes = classification ? data.n_classes() : 0;

  SideStats parent(n_classes);
  for (auto i : rows) parent.add(data.labels[i], classification);
  const double parent_impurity = parent.impurity(config);
  if (parent_impurity <= 0.0) return std::nullopt;

  std::optional<SplitChoice> best;
  for (int dim : resolve_dims(data, dims_in)) {
    for (const auto& rule : candidate_splits(data, dim, config, rows)) {
      SideStats left(n_classes), right(n_classes);
      for (auto i : rows) {
        if (split_decide(data.points.row(i), rule, data.manifold.kind) == 1)
          right.add(data.labels[i], classification);
        else
          left.add(data.labels[i], classification);
      }
      if (left.n < config.min_samples_leaf || right.n < config.min_samples_leaf) continue;
      const double gain = information_gain(parent_impurity, left.n, left.impurity(config), right.n,
                                           right.impurity(config));
      if (gain > kGainTolerance && better_split(gain, rule.dim, rule.param, best))
        best = SplitChoice{rule, gain};
    }
  }
  return best;
}

}  // namespace geoforest
