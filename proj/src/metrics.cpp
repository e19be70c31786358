#include "geoforest/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace geoforest {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) throw std::invalid_argument(std::string(what) + ": length mismatch");
  if (a.empty()) throw std::invalid_argument(std::string(what) + ": empty input");
}

}  // namespace

F1Scores f1_scores(std::span<const double> y_true, std::span<const double> y_pred, std::size_t n_classes,
                   bool count_absent_classes) {
  require_same_length(y_true, y_pred, "f1_scores");
  std::size_t C = n_classes;
  for (std::size_t i = 0; i < y_true.size(); ++i)
    C = std::max({C, static_cast<std::size_t>(y_true[i]) + 1, static_cast<std::size_t>(y_pred[i]) + 1});

  std::vector<double> tp(C, 0.0), fp(C, 0.0), fn(C, 0.0);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const auto t = static_cast<std::size_t>(y_true[i]);
    const auto p = static_cast<std::size_t>(y_pred[i]);
    if (t == p) {
      tp[t] += 1;
    } else {
      fp[p] += 1;
      fn[t] += 1;
    }
  }
  const double TP = std::accumulate(tp.begin(), tp.end(), 0.0);
  const double FP = std::accumulate(fp.begin(), fp.end(), 0.0);
  const double FN = std::accumulate(fn.begin(), fn.end(), 0.0);

  F1Scores out;
  out.micro = TP / (TP + 0.5 * (FP + FN));
  double sum = 0;
  std::size_t counted = 0;
  for (std::size_t c = 0; c < C; ++c) {
    const double denom = 2 * tp[c] + fp[c] + fn[c];
    if (denom == 0) {
      if (count_absent_classes && c < n_classes) ++counted;
      continue;
    }
    sum += 2 * tp[c] / denom;
    ++counted;
  }
  out.macro = counted ? sum / static_cast<double>(counted) : 0.0;
  return out;
}

double accuracy(std::span<const double> y_true, std::span<const double> y_pred) {
  require_same_length(y_true, y_pred, "accuracy");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i];
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

double average_precision(std::span<const double> y_true, std::span<const double> scores) {
  require_same_length(y_true, scores, "average_precision");
  std::vector<std::size_t> order(y_true.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
  const double positives = static_cast<double>(std::count(y_true.begin(), y_true.end(), 1.0));
  if (positives == 0) throw std::invalid_argument("average_precision: no positive labels");

  double tp = 0, seen = 0, ap = 0, prev_recall = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    tp += y_true[order[k]] == 1.0;
    seen += 1;
    // Tied scores form one threshold.
    if (k + 1 < order.size() && scores[order[k + 1]] == scores[order[k]]) continue;
    const double recall = tp / positives;
    ap += (recall - prev_recall) * (tp / seen);
    prev_recall = recall;
  }
  return ap;
}

std::string to_string(TTestResult::Status s) {
  switch (s) {
    case TTestResult::Status::ok: return "ok";
    case TTestResult::Status::identical: return "identical";
    case TTestResult::Status::zero_variance: return "zero_variance";
  }
  return "?";
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_t_test: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("paired_t_test: need at least 2 pairs");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];

  TTestResult r;
  r.n = n;
  if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) {
    r.status = TTestResult::Status::identical;
    r.t = 0.0;
    r.p = 1.0;
    return r;
  }
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) {
    r.status = TTestResult::Status::zero_variance;
    r.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
    r.p = 0.0;
    return r;
  }
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

LinearFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, "least_squares_line");
  if (x.size() < 2) throw std::invalid_argument("least_squares_line: need at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("least_squares_line: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty input");
  const double n = static_cast<double>(values.size());
  SummaryStats s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  const double half = 1.959963984540054 * s.stddev / std::sqrt(n);
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

}  // namespace geoforest
