#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geoforest/dataset.hpp"
#include "geoforest/geometry.hpp"
#include "geoforest/impurity.hpp"

namespace geoforest {

enum class MidpointMode { geodesic, naive };

std::string to_string(MidpointMode mode);
MidpointMode midpoint_mode_from_string(const std::string& name);

struct TreeConfig {
  int max_depth = 3;
  int min_samples_leaf = 1;
  int min_samples_split = 2;
  Impurity impurity = Impurity::gini;
  Task task = Task::classification;
  MidpointMode midpoint_mode = MidpointMode::geodesic;
  /// Dimensions considered per node; 0 means all of them.
  int max_features = 0;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const TreeConfig&, const TreeConfig&) = default;
};

/// Hyperboloid: the plane x0 cos(param) - x_dim sin(param) = 0, param in
/// (pi/4, 3pi/4), dim in [1, D]. Euclidean: the threshold x_dim = param,
/// dim in [0, D-1].
struct SplitRule {
  int dim = 1;
  double param = 0.0;

  friend bool operator==(const SplitRule&, const SplitRule&) = default;
};

void validate_rule(const SplitRule& rule, const ManifoldSpec& m);

/// Returns 1 (right) iff sin(param) x_d - cos(param) x0 > 0 on the hyperboloid,
/// or x_d > param in Euclidean space. Only the two touched coordinates are read.
int split_decide(std::span<const double> x, const SplitRule& rule, GeometryKind kind);

/// split_decide with sin/cos of the angle precomputed; used on hot paths.
inline int split_decide_cached(std::span<const double> x, int dim, double param, double sin_t,
                               double cos_t, GeometryKind kind) {
  const double xd = x[static_cast<std::size_t>(dim)];
  if (kind == GeometryKind::euclidean) return xd > param ? 1 : 0;
  return sin_t * xd - cos_t * x[0] > 0.0 ? 1 : 0;
}

/// The same hyperplane evaluated with Minkowski products at angle `theta`:
/// sign(max(0, sin(theta) x_d + cos(theta) x0)).
int split_decide_minkowski(std::span<const double> x, int dim, double theta);

/// Per-point sort key along `dim`: point_angle for the hyperboloid, the raw
/// coordinate otherwise.
double split_key(std::span<const double> x, int dim, GeometryKind kind);

/// Midpoint between consecutive distinct keys a < b.
double candidate_between(double a, double b, GeometryKind kind, MidpointMode mode);

/// Dimensions eligible as split axes.
std::vector<int> split_dimensions(const ManifoldSpec& m);

/// Candidate rules along `dim` for the rows in `indices` (all rows if empty):
/// one per pair of consecutive distinct keys.
std::vector<SplitRule> candidate_splits(const Dataset& data, int dim, const TreeConfig& config,
                                        std::span<const std::size_t> indices = {});

struct SplitChoice {
  SplitRule rule;
  double gain = 0.0;
};

/// Gains within this distance are ties; ties go to the lowest dimension, then
/// the smallest parameter. A split must also gain more than this to be taken.
inline constexpr double kGainTolerance = 1e-12;

/// Gain-maximizing split by a sorted sweep: O(n log n) per dimension.
/// `indices` selects the node's rows (repeats allowed); empty means all rows.
/// `dims` restricts the candidate axes (empty means all).
std::optional<SplitChoice> best_split(const Dataset& data, const TreeConfig& config,
                                      std::span<const std::size_t> indices = {},
                                      std::span<const int> dims = {});

/// Reference implementation: enumerates candidate_splits and scores each by
/// routing every row through split_decide. O(n^2) per dimension; kept for
/// testing and benchmarking the sweep against.
std::optional<SplitChoice> best_split_reference(const Dataset& data, const TreeConfig& config,
                                                std::span<const std::size_t> indices = {},
                                                std::span<const int> dims = {});

/// Lexicographic comparison used by both split searches.
inline bool better_split(double gain, int dim, double param, const std::optional<SplitChoice>& best) {
  if (!best) return true;
  if (gain > best->gain + kGainTolerance) return true;
  if (gain < best->gain - kGainTolerance) return false;
  if (dim != best->rule.dim) return dim < best->rule.dim;
  return param < best->rule.param;
}

}  // namespace geoforest
