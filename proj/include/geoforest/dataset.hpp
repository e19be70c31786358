#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "geoforest/geometry.hpp"

namespace geoforest {

enum class Task { classification, regression };

std::string to_string(Task task);
Task task_from_string(const std::string& name);

/// Row-major n x cols matrix of points.
class PointMatrix {
 public:
  PointMatrix() = default;
  PointMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  void push_row(std::span<const double> r);
  PointMatrix select(std::span<const std::size_t> indices) const;

  const std::vector<double>& data() const { return data_; }
  friend bool operator==(const PointMatrix&, const PointMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Labeled points. For classification `labels` holds contiguous class ids
/// 0..C-1 and `class_names[c]` is the label text as read from / written to file.
/// For regression `labels` holds the targets and `class_names` is empty.
struct Dataset {
  ManifoldSpec manifold;
  Task task = Task::classification;
  PointMatrix points;
  std::vector<double> labels;
  std::vector<std::string> class_names;

  std::size_t size() const { return points.rows(); }
  std::size_t n_classes() const { return class_names.size(); }
  int class_id(std::size_t i) const { return static_cast<int>(labels[i]); }

  Dataset subset(std::span<const std::size_t> indices) const;
  /// Throws on shape mismatch, non-finite coordinates, label ids out of range,
  /// or off-manifold rows (hyperboloid only, reporting the row index).
  void validate(double tol = kLenientManifoldTol) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Class names "0".."C-1" for generated data.
std::vector<std::string> default_class_names(std::size_t n_classes);

enum class CoordinateModel { hyperboloid, poincare, klein };

std::string to_string(CoordinateModel c);
CoordinateModel coordinate_model_from_string(const std::string& name);

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadOptions {
  /// Coordinates in the file; poincare/klein rows are converted to the
  /// hyperboloid on load (requires a hyperboloid manifold).
  CoordinateModel coords = CoordinateModel::hyperboloid;
  Task task = Task::classification;
  Strictness strictness = Strictness::lenient;
  /// Skip the on-manifold check entirely (used by --geometry euclidean).
  bool validate_manifold = true;
};

/// CSV with header `label,x0,x1,...`. Files ending in .gz are read through zlib.
/// The manifold's dimension is inferred from the column count when `dim` is 0.
Dataset load_dataset(const std::filesystem::path& path, ManifoldSpec manifold,
                     const LoadOptions& options = {});
Dataset parse_dataset(const std::string& text, ManifoldSpec manifold,
                      const LoadOptions& options = {}, const std::string& source = "<memory>");

/// Writes `label,x0,...` with 17 significant digits; `.gz` paths are compressed.
/// `coords` re-expresses hyperboloid rows in another model.
void save_dataset(const Dataset& data, const std::filesystem::path& path,
                  CoordinateModel coords = CoordinateModel::hyperboloid);
std::string format_dataset(const Dataset& data,
                           CoordinateModel coords = CoordinateModel::hyperboloid);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace geoforest
