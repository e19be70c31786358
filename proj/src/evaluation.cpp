#include "geoforest/evaluation.hpp"

#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "geoforest/rng.hpp"

namespace geoforest {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::vector<std::size_t>> fold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("cross-validation needs k >= 2");
  if (k > n) throw std::invalid_argument("cross-validation needs k <= n");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  auto gen = make_stream(seed, StreamDomain::cv_shuffle, 0);
  for (std::size_t i = n - 1; i > 0; --i) {
    boost::random::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(perm[i], perm[pick(gen)]);
  }
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t start = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(start),
                    perm.begin() + static_cast<std::ptrdiff_t>(start + size));
    std::sort(folds[f].begin(), folds[f].end());
    start += size;
  }
  return folds;
}

std::vector<double> CVResult::scores(const std::string& predictor, bool macro) const {
  std::vector<double> out;
  for (const auto& r : records)
    if (r.predictor == predictor) out.push_back(macro ? r.macro_f1 : r.micro_f1);
  return out;
}

std::vector<std::string> CVResult::predictor_names() const {
  std::vector<std::string> names;
  for (const auto& r : records)
    if (std::find(names.begin(), names.end(), r.predictor) == names.end()) names.push_back(r.predictor);
  return names;
}

CVResult cross_validate(const Dataset& data, const std::vector<PredictorSpec>& predictors, std::size_t k,
                        const std::vector<std::uint64_t>& seeds, int jobs) {
  if (predictors.empty()) throw std::invalid_argument("cross_validate: no predictors");
  if (data.task != Task::classification) throw std::invalid_argument("cross_validate: F1 needs classification");
  CVResult result;
  result.jobs = jobs;
  for (const auto seed : seeds) {
    const auto folds = fold_indices(data.size(), k, seed);
    for (std::size_t f = 0; f < k; ++f) {
      std::vector<std::size_t> train;
      for (std::size_t g = 0; g < k; ++g)
        if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
      std::sort(train.begin(), train.end());
      const Dataset train_set = data.subset(train);
      const Dataset test_set = data.subset(folds[f]);

      for (const auto& spec : predictors) {
        CVRecord rec;
        rec.predictor = spec.name;
        rec.seed = seed;
        rec.fold = f;
        rec.test_indices = folds[f];

        auto t0 = Clock::now();
        const FittedModel model = fit_predictor(train_set, spec, seed, jobs);
        rec.fit_seconds = seconds_since(t0);

        t0 = Clock::now();
        const auto pred = model.predict(test_set.points, Strictness::lenient, jobs);
        rec.predict_seconds = seconds_since(t0);

        const auto f1 = f1_scores(test_set.labels, pred, data.n_classes());
        rec.micro_f1 = f1.micro;
        rec.macro_f1 = f1.macro;
        result.records.push_back(std::move(rec));
      }
    }
  }
  return result;
}

void append_records(CVResult& into, const CVResult& more) {
  into.records.insert(into.records.end(), more.records.begin(), more.records.end());
}

std::string cv_records_csv(const CVResult& result) {
  std::ostringstream os;
  os << "predictor,seed,fold,micro_f1,macro_f1,fit_seconds,predict_seconds\n";
  for (const auto& r : result.records)
    os << r.predictor << ',' << r.seed << ',' << r.fold << ',' << fmt(r.micro_f1) << ',' << fmt(r.macro_f1) << ','
       << fmt(r.fit_seconds) << ',' << fmt(r.predict_seconds) << '\n';
  return os.str();
}

std::vector<PairwiseTest> pairwise_t_tests(const CVResult& result) {
  const auto names = result.predictor_names();
  std::vector<PairwiseTest> out;
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      out.push_back({names[i], names[j], paired_t_test(result.scores(names[i]), result.scores(names[j]))});
  return out;
}

Json cv_summary_json(const CVResult& result) {
  Json j;
  j["jobs"] = result.jobs;
  Json means, stds;
  for (const auto& name : result.predictor_names()) {
    const auto micro = summarize(result.scores(name));
    const auto macro = summarize(result.scores(name, true));
    std::vector<double> fit, pred;
    for (const auto& r : result.records)
      if (r.predictor == name) {
        fit.push_back(r.fit_seconds);
        pred.push_back(r.predict_seconds);
      }
    means[name] = {{"micro_f1", micro.mean},
                   {"macro_f1", macro.mean},
                   {"fit_seconds", summarize(fit).mean},
                   {"predict_seconds", summarize(pred).mean}};
    stds[name] = {{"micro_f1", micro.stddev}, {"macro_f1", macro.stddev}};
  }
  j["means"] = means;
  j["stds"] = stds;
  Json tests = Json::array();
  if (result.records.size() >= 2 * result.predictor_names().size()) {
    for (const auto& t : pairwise_t_tests(result)) {
      Json row{{"a", t.a}, {"b", t.b}, {"status", to_string(t.test.status)}, {"n", t.test.n}};
      if (t.test.status == TTestResult::Status::identical) {
        row["t"] = nullptr;
        row["p"] = nullptr;
      } else {
        row["t"] = std::isfinite(t.test.t) ? Json(t.test.t) : Json(t.test.t > 0 ? "inf" : "-inf");
        row["p"] = t.test.p;
      }
      tests.push_back(std::move(row));
    }
  }
  j["t_tests"] = tests;
  return j;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::n_samples: return "n_samples";
    case SweepAxis::dim: return "dim";
    case SweepAxis::n_trees: return "n_trees";
    case SweepAxis::max_depth: return "max_depth";
  }
  return "?";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "n_samples" || name == "n") return SweepAxis::n_samples;
  if (name == "dim" || name == "D") return SweepAxis::dim;
  if (name == "n_trees" || name == "trees") return SweepAxis::n_trees;
  if (name == "max_depth" || name == "depth") return SweepAxis::max_depth;
  throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

std::vector<SweepRow> scaling_sweep(SweepAxis axis, const std::vector<double>& grid, const SweepSpec& base,
                                    int jobs) {
  if (grid.empty()) throw std::invalid_argument("scaling_sweep: empty grid");
  if (base.trials < 1) throw std::invalid_argument("scaling_sweep: trials must be >= 1");
  std::vector<SweepRow> rows;
  for (const double value : grid) {
    SweepSpec spec = base;
    const auto iv = static_cast<long long>(std::llround(value));
    if (iv < 1) throw std::invalid_argument("scaling_sweep: grid values must be >= 1");
    switch (axis) {
      case SweepAxis::n_samples: spec.n_samples = static_cast<std::size_t>(iv); break;
      case SweepAxis::dim: spec.dim = static_cast<int>(iv); break;
      case SweepAxis::n_trees: spec.forest.n_trees = static_cast<int>(iv); break;
      case SweepAxis::max_depth: spec.forest.tree.max_depth = static_cast<int>(iv); break;
    }

    std::vector<double> times, scores, depths;
    for (int trial = 0; trial < spec.trials; ++trial) {
      GaussianMixtureSpec mix{spec.n_classes, spec.dim, spec.curvature, spec.noise_scale,
                              derive_seed(spec.seed, StreamDomain::sweep_trial, static_cast<std::uint64_t>(trial))};
      const Dataset all = sample_gaussian_mixture(mix, spec.n_samples + spec.n_test, jobs);
      std::vector<std::size_t> train(spec.n_samples), test(spec.n_test);
      std::iota(train.begin(), train.end(), std::size_t{0});
      std::iota(test.begin(), test.end(), spec.n_samples);
      const Dataset train_set = all.subset(train);

      ForestConfig fc = spec.forest;
      fc.seed = mix.seed;
      const auto t0 = Clock::now();
      const ForestModel model = fit_forest(train_set, fc, jobs);
      times.push_back(seconds_since(t0));

      double depth = 0;
      for (const auto& t : model.trees()) depth += static_cast<double>(t.depth());
      depths.push_back(depth / static_cast<double>(model.trees().size()));

      if (spec.n_test > 0) {
        const Dataset test_set = all.subset(test);
        scores.push_back(f1_scores(test_set.labels, model.predict(test_set.points, Strictness::lenient, jobs)).micro);
      }
    }
    SweepRow row;
    row.value = value;
    row.fit_seconds = summarize(times);
    if (!scores.empty()) row.micro_f1 = summarize(scores);
    row.mean_depth = summarize(depths).mean;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << to_string(axis)
     << ",fit_seconds_mean,fit_seconds_ci_low,fit_seconds_ci_high,micro_f1_mean,micro_f1_ci_low,micro_f1_ci_high,"
        "mean_depth\n";
  for (const auto& r : rows)
    os << fmt(r.value) << ',' << fmt(r.fit_seconds.mean) << ',' << fmt(r.fit_seconds.ci_low) << ','
       << fmt(r.fit_seconds.ci_high) << ',' << fmt(r.micro_f1.mean) << ',' << fmt(r.micro_f1.ci_low) << ','
       << fmt(r.micro_f1.ci_high) << ',' << fmt(r.mean_depth) << '\n';
  return os.str();
}

}  // namespace geoforest
