#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace geoforest {

enum class Impurity { gini, entropy, mse };

std::string to_string(Impurity kind);
Impurity impurity_from_string(const std::string& name);

/// Gini or entropy (bits) of a class-count histogram with `total` members.
double class_impurity(std::span<const double> counts, double total, Impurity kind);

/// Mean squared deviation from the mean, from running sums.
double variance_impurity(double n, double sum, double sum_sq);

/// Impurity of a label set. Classification labels are class ids in
/// [0, n_classes); `mse` treats labels as real targets. Throws on empty input.
double impurity(std::span<const double> labels, Impurity kind, std::size_t n_classes = 0);

/// C(parent) - f0 C(left) - f1 C(right), with f_i the child fractions.
double information_gain(double parent_impurity, double n_left, double left_impurity,
                        double n_right, double right_impurity);

/// Label-set form. `left` and `right` must be nonempty and partition `parent`.
double information_gain(std::span<const double> parent, std::span<const double> left,
                        std::span<const double> right, Impurity kind, std::size_t n_classes = 0);

}  // namespace geoforest
