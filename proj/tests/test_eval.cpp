#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <boost/math/distributions/normal.hpp>

#include "geoforest/evaluation.hpp"
#include "support.hpp"

using namespace geoforest;

TEST_CASE("f1 scores") {
  const std::vector<double> y{0, 0, 1, 1};
  auto perfect = f1_scores(y, y);
  CHECK(perfect.micro == 1.0);
  CHECK(perfect.macro == 1.0);

  const std::vector<double> p{0, 1, 1, 1};
  const auto f = f1_scores(y, p);
  CHECK(f.micro == doctest::Approx(0.75).epsilon(1e-15));
  // class 0: tp 1 fp 0 fn 1 -> 2/3; class 1: tp 2 fp 1 fn 0 -> 4/5.
  CHECK(f.macro == doctest::Approx((2.0 / 3.0 + 0.8) / 2).epsilon(1e-15));

  const std::vector<double> ones{1, 1, 1, 1};
  CHECK(f1_scores(y, ones).micro == doctest::Approx(0.5).epsilon(1e-15));

  // A class absent from both vectors only counts when asked to.
  CHECK(f1_scores(y, y, 3, false).macro == 1.0);
  CHECK(f1_scores(y, y, 3, true).macro == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  CHECK_THROWS(f1_scores(y, std::vector<double>{0, 1}));

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> c(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(40), b(40);
    for (auto& v : a) v = c(rng);
    for (auto& v : b) v = c(rng);
    CHECK(f1_scores(a, b).micro == doctest::Approx(accuracy(a, b)).epsilon(1e-15));
  }
}

TEST_CASE("average precision") {
  const std::vector<double> y{0, 0, 1, 1};
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  CHECK(average_precision(y, s) == doctest::Approx(0.5 * 1.0 + 0.5 * (2.0 / 3.0)).epsilon(1e-15));
  CHECK(average_precision(y, std::vector<double>{0, 0, 1, 1}) == 1.0);
}

TEST_CASE("paired t-test") {
  const std::vector<double> a{9, 11, 12, 13, 15};
  const std::vector<double> b{10, 10, 10, 10, 10};
  const auto r = paired_t_test(a, b);
  CHECK(r.status == TTestResult::Status::ok);
  CHECK(r.n == 5);
  CHECK(std::abs(r.t - 2.0) < 1e-9);
  // Student t with 4 degrees of freedom has a closed-form CDF.
  const double t = 2.0;
  const double x = t / std::sqrt(1 + t * t / 4);
  const double cdf = 0.5 + 3.0 / 8.0 * x * (1 - t * t / (12 * (1 + t * t / 4)));
  CHECK(r.p == doctest::Approx(2 * (1 - cdf)).epsilon(1e-12));

  const auto same = paired_t_test(a, a);
  CHECK(same.status == TTestResult::Status::identical);

  std::vector<double> shifted = a;
  for (auto& v : shifted) v += 0.01;
  const auto flat = paired_t_test(shifted, a);
  CHECK(flat.status == TTestResult::Status::zero_variance);
  CHECK(flat.p == 0.0);
  CHECK(std::isinf(flat.t));
  CHECK(flat.t > 0);

  CHECK_THROWS(paired_t_test(std::vector<double>{1}, std::vector<double>{2}));
  CHECK_THROWS(paired_t_test(a, std::vector<double>{1, 2}));
}

TEST_CASE("line fit and summaries") {
  const std::vector<double> x{100, 300, 1000, 3000};
  std::vector<double> y;
  for (double v : x) y.push_back(0.5 + 2e-3 * v);
  const auto fit = least_squares_line(x, y);
  CHECK(fit.slope == doctest::Approx(2e-3).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> v{1, 2, 3, 4};
  const auto s = summarize(v);
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
  const double z = boost::math::quantile(boost::math::normal(), 0.975);
  CHECK(s.ci_low == doctest::Approx(2.5 - z * s.stddev / 2).epsilon(1e-14));
  CHECK(s.ci_high == doctest::Approx(2.5 + z * s.stddev / 2).epsilon(1e-14));
}

TEST_CASE("fold assignment") {
  for (std::size_t n : {10u, 17u, 800u}) {
    for (std::size_t k : {2u, 5u, 10u}) {
      const auto folds = fold_indices(n, k, 42);
      REQUIRE(folds.size() == k);
      std::vector<std::size_t> all;
      std::size_t lo = n, hi = 0;
      for (const auto& f : folds) {
        all.insert(all.end(), f.begin(), f.end());
        lo = std::min(lo, f.size());
        hi = std::max(hi, f.size());
        CHECK(std::is_sorted(f.begin(), f.end()));
      }
      std::sort(all.begin(), all.end());
      std::vector<std::size_t> expected(n);
      std::iota(expected.begin(), expected.end(), std::size_t{0});
      CHECK(all == expected);
      CHECK(hi - lo <= 1);
      CHECK(fold_indices(n, k, 42) == folds);
    }
  }
  CHECK(fold_indices(100, 5, 1) != fold_indices(100, 5, 2));
  CHECK(fold_indices(10, 10, 0).size() == 10);
  CHECK_THROWS(fold_indices(4, 5, 0));
  CHECK_THROWS(fold_indices(10, 1, 0));
}

TEST_CASE("cross validation") {
  const Dataset d = sample_gaussian_mixture({3, 2, 1.0, 1.0, 3}, 200);
  const std::vector<PredictorSpec> specs{PredictorSpec::parse("model=tree"),
                                         PredictorSpec::parse("geometry=euclidean,model=tree"),
                                         PredictorSpec::parse("model=forest,trees=4")};
  const std::vector<std::uint64_t> seeds{0, 1};
  const CVResult r = cross_validate(d, specs, 5, seeds, 2);
  CHECK(r.records.size() == 2 * 5 * 3);
  CHECK(r.predictor_names() == std::vector<std::string>{"hyperdt", "eucliddt", "hyperrf"});
  for (std::size_t i = 0; i < r.records.size(); i += 3) {
    CHECK(r.records[i].test_indices == r.records[i + 1].test_indices);
    CHECK(r.records[i].test_indices == r.records[i + 2].test_indices);
    CHECK(r.records[i].seed == r.records[i + 2].seed);
    CHECK(r.records[i].fold == r.records[i + 2].fold);
  }
  for (const auto& rec : r.records) {
    CHECK(rec.fit_seconds >= 0);
    CHECK(rec.predict_seconds >= 0);
    CHECK(rec.micro_f1 >= 0);
    CHECK(rec.micro_f1 <= 1);
  }
  CHECK(r.scores("hyperdt").size() == 10);

  // Scores do not depend on the worker count.
  const CVResult again = cross_validate(d, specs, 5, seeds, 1);
  for (std::size_t i = 0; i < r.records.size(); ++i) CHECK(again.records[i].micro_f1 == r.records[i].micro_f1);

  const std::string csv = cv_records_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);

  const Json summary = cv_summary_json(r);
  CHECK(summary["jobs"] == 2);
  CHECK(summary["means"].contains("hyperrf"));
  CHECK(summary["t_tests"].size() == 3);

  SUBCASE("leave one out") {
    const Dataset small = d.subset(std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    const CVResult loo = cross_validate(small, {specs[0]}, 10, {0}, 1);
    CHECK(loo.records.size() == 10);
  }

  SUBCASE("identical predictors") {
    auto twin = specs[0];
    twin.name = "twin";
    const CVResult t = cross_validate(d, {specs[0], twin}, 5, {0}, 1);
    const Json s = cv_summary_json(t);
    REQUIRE(s["t_tests"].size() == 1);
    CHECK(s["t_tests"][0]["status"] == "identical");
    CHECK(s["t_tests"][0]["p"].is_null());
  }

  CHECK_THROWS(cross_validate(d, specs, 201, seeds, 1));
}

TEST_CASE("scaling sweeps") {
  SweepSpec base;
  base.n_samples = 100;
  base.n_test = 50;
  base.trials = 2;
  base.forest.n_trees = 3;
  const auto one = scaling_sweep(SweepAxis::n_samples, {120}, base, 1);
  CHECK(one.size() == 1);
  CHECK(one[0].value == 120);
  CHECK(one[0].fit_seconds.mean > 0);
  CHECK(one[0].micro_f1.mean > 0.3);

  // Depth stops growing once the trees run out of splits.
  base.n_samples = 40;
  base.trials = 2;
  std::vector<double> depths;
  for (int v = 1; v <= 20; ++v) depths.push_back(v);
  const auto rows = scaling_sweep(SweepAxis::max_depth, depths, base, 1);
  CHECK(rows.size() == 20);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].mean_depth >= rows[i - 1].mean_depth);
  CHECK(rows.back().mean_depth < 20);
  CHECK(rows.back().mean_depth == rows[rows.size() - 2].mean_depth);

  const std::string csv = sweep_csv(SweepAxis::max_depth, rows);
  CHECK(csv.rfind("max_depth,", 0) == 0);
  CHECK_THROWS(scaling_sweep(SweepAxis::dim, {}, base, 1));
  CHECK(sweep_axis_from_string("n") == SweepAxis::n_samples);
  CHECK_THROWS(sweep_axis_from_string("width"));
}
