#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace geoforest {

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
};

/// Micro- and macro-averaged F1 for single-label multiclass predictions.
/// Macro averages over classes present in y_true or y_pred; with
/// `n_classes` > 0 and `count_absent_classes`, every class id below
/// n_classes participates and absent ones score 0.
F1Scores f1_scores(std::span<const double> y_true, std::span<const double> y_pred,
                   std::size_t n_classes = 0, bool count_absent_classes = false);

double accuracy(std::span<const double> y_true, std::span<const double> y_pred);

/// Average precision of scores for the positive class (label 1) of a binary task.
double average_precision(std::span<const double> y_true, std::span<const double> scores);

struct TTestResult {
  enum class Status { ok, identical, zero_variance };
  Status status = Status::ok;
  double t = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

std::string to_string(TTestResult::Status s);

/// Two-tailed paired t-test over a - b with n-1 degrees of freedom.
/// All-zero differences report `identical`; constant nonzero differences
/// report `zero_variance` with t = +-inf and p = 0.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

LinearFit least_squares_line(std::span<const double> x, std::span<const double> y);

struct SummaryStats {
  double mean = 0.0;
  double stddev = 0.0;
  /// Normal-approximation 95% interval of the mean.
  double ci_low = 0.0;
  double ci_high = 0.0;
};

SummaryStats summarize(std::span<const double> values);

}  // namespace geoforest
