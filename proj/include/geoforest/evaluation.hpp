#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoforest/metrics.hpp"
#include "geoforest/mixture.hpp"
#include "geoforest/predictor.hpp"

namespace geoforest {

/// Shuffles 0..n-1 with stream(seed, cv_shuffle) and cuts k contiguous folds
/// whose sizes differ by at most one. Same seed, same folds.
std::vector<std::vector<std::size_t>> fold_indices(std::size_t n, std::size_t k, std::uint64_t seed);

struct CVRecord {
  std::string predictor;
  std::uint64_t seed = 0;
  std::size_t fold = 0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
  /// Sorted test-row indices of this fold.
  std::vector<std::size_t> test_indices;
};

struct CVResult {
  std::vector<CVRecord> records;  // ordered by (seed, fold, predictor order)
  int jobs = 1;

  /// micro_f1 (or macro_f1) for `predictor`, in (seed, fold) order.
  std::vector<double> scores(const std::string& predictor, bool macro = false) const;
  std::vector<std::string> predictor_names() const;
};

/// k-fold cross-validation of every predictor on `data` for each seed; all
/// predictors see the same folds for a given seed. Fit and predict times are
/// taken separately on a monotonic clock.
CVResult cross_validate(const Dataset& data, const std::vector<PredictorSpec>& predictors, std::size_t k,
                        const std::vector<std::uint64_t>& seeds, int jobs = 1);

/// Appends `more` to `into` (used to pool per-seed datasets).
void append_records(CVResult& into, const CVResult& more);

/// CSV rows: predictor,seed,fold,micro_f1,macro_f1,fit_seconds,predict_seconds
std::string cv_records_csv(const CVResult& result);

struct PairwiseTest {
  std::string a;
  std::string b;
  TTestResult test;
};

/// Paired t-tests on micro-F1 for every pair of predictors.
std::vector<PairwiseTest> pairwise_t_tests(const CVResult& result);

/// {jobs, means, stds, t_tests} summary document.
Json cv_summary_json(const CVResult& result);

enum class SweepAxis { n_samples, dim, n_trees, max_depth };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

/// Forest scaling experiment: each trial draws a fresh mixture, fits on
/// n_samples points and scores micro-F1 on n_test held-out points.
struct SweepSpec {
  int n_classes = 5;
  int dim = 2;
  double curvature = 1.0;
  double noise_scale = 1.0;
  std::size_t n_samples = 1000;
  std::size_t n_test = 200;
  ForestConfig forest;
  int trials = 20;
  std::uint64_t seed = 0;
};

struct SweepRow {
  double value = 0.0;
  SummaryStats fit_seconds;
  SummaryStats micro_f1;
  /// Mean depth actually reached by the fitted trees.
  double mean_depth = 0.0;
};

std::vector<SweepRow> scaling_sweep(SweepAxis axis, const std::vector<double>& grid, const SweepSpec& base,
                                    int jobs = 1);

std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows);

}  // namespace geoforest
