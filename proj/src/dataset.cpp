#include "geoforest/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace geoforest {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_gzip(const std::filesystem::path& path) { return ends_with(path.string(), ".gz"); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string row_error(const std::string& source, std::size_t line_no, const std::string& what) {
  std::ostringstream os;
  os << source << ": line " << line_no << ": " << what;
  return os.str();
}

}  // namespace

std::string to_string(Task task) {
  return task == Task::classification ? "classification" : "regression";
}

Task task_from_string(const std::string& name) {
  if (name == "classification") return Task::classification;
  if (name == "regression") return Task::regression;
  throw std::invalid_argument("unknown task '" + name + "'");
}

std::string to_string(CoordinateModel c) {
  switch (c) {
    case CoordinateModel::hyperboloid: return "hyperboloid";
    case CoordinateModel::poincare: return "poincare";
    case CoordinateModel::klein: return "klein";
  }
  return "?";
}

CoordinateModel coordinate_model_from_string(const std::string& name) {
  if (name == "hyperboloid") return CoordinateModel::hyperboloid;
  if (name == "poincare") return CoordinateModel::poincare;
  if (name == "klein") return CoordinateModel::klein;
  throw std::invalid_argument("unknown coordinate model '" + name + "'");
}

void PointMatrix::push_row(std::span<const double> r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw std::invalid_argument("PointMatrix::push_row: width mismatch");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

PointMatrix PointMatrix::select(std::span<const std::size_t> indices) const {
  PointMatrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.manifold = manifold;
  out.task = task;
  out.class_names = class_names;
  out.points = points.select(indices);
  out.labels.reserve(indices.size());
  for (auto i : indices) out.labels.push_back(labels[i]);
  return out;
}

void Dataset::validate(double tol) const {
  manifold.validate();
  if (points.cols() != manifold.ambient_dim() && !points.empty()) {
    std::ostringstream os;
    os << "dataset has " << points.cols() << " coordinate columns, manifold expects "
       << manifold.ambient_dim();
    throw DatasetError(os.str());
  }
  if (labels.size() != points.rows()) throw DatasetError("dataset label count does not match rows");
  for (std::size_t i = 0; i < size(); ++i) {
    const auto x = points.row(i);
    for (double v : x)
      if (!std::isfinite(v))
        throw DatasetError("row " + std::to_string(i) + ": non-finite coordinate");
    if (task == Task::classification) {
      const double y = labels[i];
      if (y != std::floor(y) || y < 0 || y >= static_cast<double>(class_names.size()))
        throw DatasetError("row " + std::to_string(i) + ": class id out of range");
    } else if (!std::isfinite(labels[i])) {
      throw DatasetError("row " + std::to_string(i) + ": non-finite target");
    }
    if (manifold.is_hyperboloid() && !on_manifold(x, manifold, tol)) {
      std::ostringstream os;
      os << "row " << i << ": point is off the hyperboloid (residual "
         << manifold_residual(x, manifold) << ")";
      throw DatasetError(os.str());
    }
  }
}

std::vector<std::string> default_class_names(std::size_t n_classes) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < n_classes; ++c) names.push_back(std::to_string(c));
  return names;
}

std::string read_text_file(const std::filesystem::path& path) {
  if (is_gzip(path)) {
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (!f) throw DatasetError("cannot open " + path.string());
    std::string out;
    char buf[1 << 16];
    int got = 0;
    while ((got = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(got));
    const bool failed = got < 0;
    gzclose(f);
    if (failed) throw DatasetError("gzip read error in " + path.string());
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (is_gzip(path)) {
    gzFile f = gzopen(path.string().c_str(), "wb");
    if (!f) throw DatasetError("cannot write " + path.string());
    const int wrote = text.empty() ? 0 : gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
    gzclose(f);
    if (!text.empty() && wrote <= 0) throw DatasetError("gzip write error in " + path.string());
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot write " + path.string());
  out << text;
  if (!out) throw DatasetError("write error in " + path.string());
}

Dataset parse_dataset(const std::string& text, ManifoldSpec manifold, const LoadOptions& options,
                      const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  std::size_t n_coords = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto header = split_fields(line);
    if (header.empty() || header[0] != "label")
      throw DatasetError(row_error(source, line_no, "header must start with 'label'"));
    n_coords = header.size() - 1;
    break;
  }
  if (n_coords == 0) throw DatasetError(source + ": missing header or coordinate columns");

  const bool converted = options.coords != CoordinateModel::hyperboloid;
  if (converted && !manifold.is_hyperboloid())
    throw DatasetError(source + ": --coords conversion requires hyperboloid geometry");

  // Column count fixes the dimension when the caller left it open.
  const std::size_t ambient = converted ? n_coords + 1 : n_coords;
  if (manifold.dim <= 0)
    manifold.dim = static_cast<int>(manifold.is_hyperboloid() ? ambient - 1 : ambient);
  manifold.validate();
  if (ambient != manifold.ambient_dim()) {
    std::ostringstream os;
    os << source << ": " << n_coords << " coordinate columns do not match manifold dimension "
       << manifold.dim;
    throw DatasetError(os.str());
  }

  Dataset data;
  data.manifold = manifold;
  data.task = options.task;
  std::vector<std::string> raw_labels;
  std::vector<double> row(n_coords);
  const double tol = manifold_tolerance(options.strictness);

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    const std::size_t row_index = data.points.rows();
    if (fields.size() != n_coords + 1) {
      std::ostringstream os;
      os << "row " << row_index << ": expected " << n_coords + 1 << " fields, got " << fields.size();
      throw DatasetError(row_error(source, line_no, os.str()));
    }
    if (fields[0].empty())
      throw DatasetError(row_error(source, line_no, "row " + std::to_string(row_index) + ": missing label"));
    for (std::size_t j = 0; j < n_coords; ++j) {
      if (!parse_double(fields[j + 1], row[j]) || !std::isfinite(row[j]))
        throw DatasetError(row_error(source, line_no,
                                     "row " + std::to_string(row_index) + ": bad coordinate '" +
                                         std::string(fields[j + 1]) + "'"));
    }
    Vector point;
    try {
      switch (options.coords) {
        case CoordinateModel::hyperboloid: point = row; break;
        case CoordinateModel::poincare: point = from_poincare(row, manifold); break;
        case CoordinateModel::klein: point = from_klein(row, manifold); break;
      }
    } catch (const GeometryError& e) {
      throw DatasetError(row_error(source, line_no, "row " + std::to_string(row_index) + ": " + e.what()));
    }
    if (manifold.is_hyperboloid() && options.validate_manifold && !on_manifold(point, manifold, tol)) {
      std::ostringstream os;
      os << "row " << row_index << ": point is off the hyperboloid H^{" << manifold.dim << ","
         << manifold.curvature << "} (residual " << manifold_residual(point, manifold) << ")";
      throw DatasetError(row_error(source, line_no, os.str()));
    }
    data.points.push_row(point);
    raw_labels.emplace_back(fields[0]);
  }
  if (data.points.empty()) throw DatasetError(source + ": no data rows");

  if (options.task == Task::regression) {
    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
      double y = 0;
      if (!parse_double(raw_labels[i], y) || !std::isfinite(y))
        throw DatasetError(source + ": row " + std::to_string(i) + ": regression target is not a number");
      data.labels.push_back(y);
    }
    return data;
  }

  // Class ids follow numeric order when every label is numeric, else lexicographic.
  std::vector<std::string> names = raw_labels;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  const bool numeric = std::all_of(names.begin(), names.end(), [](const std::string& s) {
    double v;
    return parse_double(s, v);
  });
  if (numeric) {
    std::stable_sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
      double va = 0, vb = 0;
      parse_double(a, va);
      parse_double(b, vb);
      return va < vb;
    });
  }
  std::map<std::string, std::size_t> id_of;
  for (std::size_t c = 0; c < names.size(); ++c) id_of.emplace(names[c], c);
  for (const auto& l : raw_labels) data.labels.push_back(static_cast<double>(id_of.at(l)));
  data.class_names = std::move(names);
  return data;
}

Dataset load_dataset(const std::filesystem::path& path, ManifoldSpec manifold, const LoadOptions& options) {
  return parse_dataset(read_text_file(path), manifold, options, path.string());
}

std::string format_dataset(const Dataset& data, CoordinateModel coords) {
  if (coords != CoordinateModel::hyperboloid && !data.manifold.is_hyperboloid())
    throw DatasetError("coordinate conversion requires hyperboloid geometry");
  std::ostringstream os;
  const std::size_t width = coords == CoordinateModel::hyperboloid ? data.points.cols()
                                                                   : data.points.cols() - 1;
  const char prefix = coords == CoordinateModel::poincare ? 'p'
                      : coords == CoordinateModel::klein  ? 'k'
                                                          : 'x';
  const std::size_t first = coords == CoordinateModel::hyperboloid ? 0 : 1;
  os << "label";
  for (std::size_t j = 0; j < width; ++j) os << ',' << prefix << (j + first);
  os << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.task == Task::classification)
      os << data.class_names.at(static_cast<std::size_t>(data.labels[i]));
    else
      os << format_double(data.labels[i]);
    Vector out;
    const auto x = data.points.row(i);
    switch (coords) {
      case CoordinateModel::hyperboloid: out.assign(x.begin(), x.end()); break;
      case CoordinateModel::poincare: out = to_poincare(x, data.manifold); break;
      case CoordinateModel::klein: out = to_klein(x, data.manifold); break;
    }
    for (double v : out) os << ',' << format_double(v);
    os << '\n';
  }
  return os.str();
}

void save_dataset(const Dataset& data, const std::filesystem::path& path, CoordinateModel coords) {
  write_text_file(path, format_dataset(data, coords));
}

}  // namespace geoforest
