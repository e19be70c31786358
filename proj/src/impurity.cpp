#include "geoforest/impurity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace geoforest {

std::string to_string(Impurity kind) {
  switch (kind) {
    case Impurity::gini: return "gini";
    case Impurity::entropy: return "entropy";
    case Impurity::mse: return "mse";
  }
  return "?";
}

Impurity impurity_from_string(const std::string& name) {
  if (name == "gini") return Impurity::gini;
  if (name == "entropy") return Impurity::entropy;
  if (name == "mse") return Impurity::mse;
  throw std::invalid_argument("unknown impurity '" + name + "'");
}

double class_impurity(std::span<const double> counts, double total, Impurity kind) {
  if (!(total > 0)) throw std::invalid_argument("impurity of an empty set");
  switch (kind) {
    case Impurity::gini: {
      double s = 0;
      for (double c : counts) {
        const double p = c / total;
        s += p * p;
      }
      return 1.0 - s;
    }
    case Impurity::entropy: {
      double h = 0;
      for (double c : counts) {
        if (c <= 0) continue;
        const double p = c / total;
        h -= p * std::log2(p);
      }
      return h;
    }
    case Impurity::mse: break;
  }
  throw std::invalid_argument("class_impurity: mse needs real targets");
}

double variance_impurity(double n, double sum, double sum_sq) {
  if (!(n > 0)) throw std::invalid_argument("impurity of an empty set");
  const double mean = sum / n;
  return std::max(0.0, sum_sq / n - mean * mean);
}

double impurity(std::span<const double> labels, Impurity kind, std::size_t n_classes) {
  if (labels.empty()) throw std::invalid_argument("impurity of an empty set");
  const double n = static_cast<double>(labels.size());
  if (kind == Impurity::mse) {
    double mean = 0;
    for (double y : labels) mean += y;
    mean /= n;
    double s = 0;
    for (double y : labels) s += (y - mean) * (y - mean);
    return s / n;
  }
  if (n_classes == 0) {
    for (double y : labels) n_classes = std::max(n_classes, static_cast<std::size_t>(y) + 1);
  }
  std::vector<double> counts(n_classes, 0.0);
  for (double y : labels) counts.at(static_cast<std::size_t>(y)) += 1.0;
  return class_impurity(counts, n, kind);
}

double information_gain(double parent_impurity, double n_left, double left_impurity, double n_right,
                        double right_impurity) {
  const double n = n_left + n_right;
  return parent_impurity - (n_left / n) * left_impurity - (n_right / n) * right_impurity;
}

double information_gain(std::span<const double> parent, std::span<const double> left,
                        std::span<const double> right, Impurity kind, std::size_t n_classes) {
  if (left.empty() || right.empty()) throw std::invalid_argument("information_gain: empty child");
  if (left.size() + right.size() != parent.size())
    throw std::invalid_argument("information_gain: children do not partition the parent");
  if (n_classes == 0 && kind != Impurity::mse) {
    for (double y : parent) n_classes = std::max(n_classes, static_cast<std::size_t>(y) + 1);
  }
  return information_gain(impurity(parent, kind, n_classes), static_cast<double>(left.size()),
                          impurity(left, kind, n_classes), static_cast<double>(right.size()),
                          impurity(right, kind, n_classes));
}

}  // namespace geoforest
