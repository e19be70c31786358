#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "geoforest/tree.hpp"

namespace geoforest {

/// One fitted split drawn on the Poincare disk, clipped to the region where
/// its node is active.
struct GeodesicBoundary {
  SplitRule split;
  std::size_t depth = 0;
  /// Index of the node in the tree; identifies the active region.
  std::size_t active_mask_id = 0;
  std::vector<std::array<double, 2>> polyline;
  /// Hyperboloid points the polyline vertices were projected from.
  std::vector<Vector> preimages;
};

struct ClassGrid {
  std::size_t resolution = 0;
  /// Row-major; row i covers v = -1 + (2i+1)/resolution, column j covers
  /// u likewise. -1 marks cells whose center is outside the disk.
  std::vector<int> classes;

  int at(std::size_t row, std::size_t col) const { return classes[row * resolution + col]; }
  /// Cell containing disk point (u, v).
  std::array<std::size_t, 2> cell_of(double u, double v) const;
  std::array<double, 2> cell_center(std::size_t row, std::size_t col) const;
};

struct BoundaryExport {
  std::vector<GeodesicBoundary> boundaries;
  ClassGrid grid;
};

struct BoundaryOptions {
  std::size_t samples = 1000;
  double t_extent = 10.0;
  std::size_t grid_resolution = 512;
};

/// Requires a classification tree on H^{2,K}.
BoundaryExport export_boundaries(const TreeModel& model, const BoundaryOptions& options = {});

/// {boundaries: [{dim, angle, depth, polyline}], grid: {resolution, classes}}
Json to_json(const BoundaryExport& e);

}  // namespace geoforest
