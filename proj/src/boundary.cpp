#include "geoforest/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geoforest {

namespace {

struct Constraint {
  std::size_t node;
  int side;
};

void walk(const TreeModel& model, std::size_t id, std::size_t depth, std::vector<Constraint>& path,
          const BoundaryOptions& opt, std::vector<GeodesicBoundary>& out) {
  const auto& nodes = model.nodes();
  const TreeNode& node = nodes[id];
  if (node.is_leaf()) return;
  const auto& m = model.manifold();

  GeodesicBoundary b;
  b.split = node.split;
  b.depth = depth;
  b.active_mask_id = id;
  const double span = 2.0 * opt.t_extent;
  for (std::size_t s = 0; s < opt.samples; ++s) {
    const double t = -opt.t_extent + span * (static_cast<double>(s) + 0.5) / static_cast<double>(opt.samples);
    const double params[1] = {t};
    Vector x = geodesic_point(node.split.param, static_cast<std::size_t>(node.split.dim), params, m);
    const bool active = std::all_of(path.begin(), path.end(), [&](const Constraint& c) {
      const TreeNode& a = nodes[c.node];
      return split_decide_cached(x, a.split.dim, a.split.param, a.sin_param, a.cos_param, m.kind) == c.side;
    });
    if (!active) continue;
    const Vector p = to_poincare(x, m);
    b.polyline.push_back({p[0], p[1]});
    b.preimages.push_back(std::move(x));
  }
  out.push_back(std::move(b));

  path.push_back({id, 0});
  walk(model, static_cast<std::size_t>(node.left), depth + 1, path, opt, out);
  path.back().side = 1;
  walk(model, static_cast<std::size_t>(node.right), depth + 1, path, opt, out);
  path.pop_back();
}

}  // namespace

std::array<std::size_t, 2> ClassGrid::cell_of(double u, double v) const {
  auto index = [&](double c) {
    const double f = std::floor((c + 1.0) / 2.0 * static_cast<double>(resolution));
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(resolution - 1)));
  };
  return {index(v), index(u)};
}

std::array<double, 2> ClassGrid::cell_center(std::size_t row, std::size_t col) const {
  const double r = static_cast<double>(resolution);
  return {-1.0 + (2.0 * static_cast<double>(col) + 1.0) / r, -1.0 + (2.0 * static_cast<double>(row) + 1.0) / r};
}

BoundaryExport export_boundaries(const TreeModel& model, const BoundaryOptions& options) {
  const auto& m = model.manifold();
  if (!m.is_hyperboloid() || m.dim != 2)
    throw std::invalid_argument("boundary export needs a tree fitted on a 2-dimensional hyperboloid");
  if (model.config().task != Task::classification)
    throw std::invalid_argument("boundary export needs a classification tree");
  if (options.samples < 2 || options.grid_resolution < 1)
    throw std::invalid_argument("boundary export: bad sampling options");

  BoundaryExport e;
  std::vector<Constraint> path;
  walk(model, 0, 0, path, options, e.boundaries);

  ClassGrid& g = e.grid;
  g.resolution = options.grid_resolution;
  g.classes.assign(g.resolution * g.resolution, -1);
  for (std::size_t row = 0; row < g.resolution; ++row) {
    for (std::size_t col = 0; col < g.resolution; ++col) {
      const auto [u, v] = g.cell_center(row, col);
      if (u * u + v * v >= 1.0 - 1e-9) continue;
      const double p[2] = {u, v};
      const Vector x = from_poincare(p, m);
      g.classes[row * g.resolution + col] = static_cast<int>(argmax_class(model.leaf_value(x)));
    }
  }
  return e;
}

Json to_json(const BoundaryExport& e) {
  Json j;
  Json bs = Json::array();
  for (const auto& b : e.boundaries) {
    Json poly = Json::array();
    for (const auto& v : b.polyline) poly.push_back({v[0], v[1]});
    bs.push_back({{"dim", b.split.dim},
                  {"angle", b.split.param},
                  {"depth", b.depth},
                  {"active_mask_id", b.active_mask_id},
                  {"polyline", std::move(poly)}});
  }
  j["boundaries"] = std::move(bs);
  j["grid"] = {{"resolution", e.grid.resolution}, {"classes", e.grid.classes}};
  return j;
}

}  // namespace geoforest
