#include <doctest.h>

#include <random>

#include "geoforest/forest.hpp"
#include "geoforest/mixture.hpp"
#include "geoforest/predictor.hpp"
#include "support.hpp"

using namespace geoforest;

namespace {

TreeModel constant_tree(const ManifoldSpec& m, std::vector<double> probs) {
  TreeNode leaf;
  leaf.value = std::move(probs);
  leaf.n_train = 1;
  return TreeModel(m, {}, {"A", "B"}, {leaf});
}

}  // namespace

TEST_CASE("one tree without bootstrap equals a single tree") {
  const Dataset d = sample_gaussian_mixture({3, 2, 1.0, 1.0, 1}, 300);
  ForestConfig fc;
  fc.n_trees = 1;
  fc.bootstrap = false;
  const ForestModel f = fit_forest(d, fc, 1);
  const TreeModel t = fit_tree(d, fc.tree);
  CHECK(f.predict(d.points) == t.predict(d.points));
  CHECK(f.predict_proba(d.points) == t.predict_proba(d.points));
}

TEST_CASE("worker count does not change the model") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Dataset d = sample_gaussian_mixture({3, 3, 1.0, 1.0, seed}, 400);
    ForestConfig fc;
    fc.n_trees = 9;
    fc.seed = seed * 17;
    fc.tree.max_depth = 4;
    fc.tree.max_features = seed == 3 ? 2 : 0;
    const std::string one = fit_forest(d, fc, 1).to_json().dump();
    CHECK(fit_forest_reference(d, fc).to_json().dump() == one);
    CHECK(fit_forest(d, fc, 2).to_json().dump() == one);
    CHECK(fit_forest(d, fc, 8).to_json().dump() == one);
  }
}

TEST_CASE("forest predictions") {
  const Dataset d = sample_gaussian_mixture({4, 2, 1.0, 1.0, 4}, 400);
  ForestConfig fc;
  fc.seed = 4;
  const ForestModel f = fit_forest(d, fc, 2);
  CHECK(f.trees().size() == 12);
  const PointMatrix p = f.predict_proba(d.points, Strictness::lenient, 3);
  for (std::size_t i = 0; i < p.rows(); ++i) {
    double s = 0;
    for (double v : p.row(i)) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto pred = f.predict(d.points, Strictness::lenient, 1);
  CHECK(f.predict(d.points, Strictness::lenient, 4) == pred);
  for (std::size_t i = 0; i < pred.size(); ++i) CHECK(pred[i] == static_cast<double>(argmax_class(p.row(i))));

  const ForestModel back = ForestModel::from_json(Json::parse(f.to_json().dump()));
  CHECK(back == f);
  CHECK(back.predict_proba(d.points) == p);

  SUBCASE("bootstraps differ between trees") {
    CHECK(bootstrap_sample(100, fc, 0) != bootstrap_sample(100, fc, 1));
    CHECK(bootstrap_sample(100, fc, 3) == bootstrap_sample(100, fc, 3));
  }
}

TEST_CASE("identical trees vote like one tree") {
  const Dataset d = sample_gaussian_mixture({3, 2, 1.0, 1.0, 5}, 200);
  const TreeModel t = fit_tree(d, {});
  const ForestModel f(ForestConfig{}, {t, t, t});
  CHECK(f.predict(d.points) == t.predict(d.points));
}

TEST_CASE("hard vote takes the majority") {
  const auto m = ManifoldSpec::hyperboloid(2);
  const auto a = constant_tree(m, {1.0, 0.0});
  const auto b = constant_tree(m, {0.0, 1.0});
  const auto b_strong = constant_tree(m, {0.0, 1.0});
  PointMatrix x;
  x.push_row(Vector{1, 0, 0});

  ForestConfig hard;
  hard.hard_vote = true;
  CHECK(ForestModel(hard, {a, a, b}).predict(x) == std::vector<double>{0});
  const auto votes = ForestModel(hard, {a, a, b}).predict_proba(x);
  CHECK(votes(0, 0) == doctest::Approx(2.0 / 3.0));

  // Soft voting averages probabilities instead.
  const auto weak_a = constant_tree(m, {0.6, 0.4});
  CHECK(ForestModel(ForestConfig{}, {weak_a, weak_a, b_strong}).predict(x) == std::vector<double>{1});
  CHECK(ForestModel(hard, {weak_a, weak_a, b_strong}).predict(x) == std::vector<double>{0});
}

TEST_CASE("regression forests average tree outputs") {
  Dataset d = sample_gaussian_mixture({2, 2, 1.0, 1.0, 6}, 200);
  d.task = Task::regression;
  d.class_names.clear();
  for (std::size_t i = 0; i < d.size(); ++i) d.labels[i] = d.points(i, 1);
  ForestConfig fc;
  fc.tree.task = Task::regression;
  fc.tree.impurity = Impurity::mse;
  fc.n_trees = 5;
  const ForestModel f = fit_forest(d, fc, 2);
  const auto pred = f.predict(d.points);
  for (std::size_t i = 0; i < 10; ++i) {
    double mean = 0;
    for (const auto& t : f.trees()) mean += t.predict(d.points.select(std::vector<std::size_t>{i}))[0];
    CHECK(pred[i] == doctest::Approx(mean / 5.0).epsilon(1e-12));
  }
}

TEST_CASE("predictor specs") {
  const auto s = PredictorSpec::parse("geometry=euclidean,model=forest,trees=5,max_depth=4,vote=hard");
  CHECK(s.name == "euclidrf");
  CHECK(s.geometry == GeometryKind::euclidean);
  CHECK(s.forest.n_trees == 5);
  CHECK(s.forest.tree.max_depth == 4);
  CHECK(s.forest.hard_vote);
  CHECK(PredictorSpec::parse(s.to_text()) == s);
  CHECK(PredictorSpec::parse("").name == "hyperdt");
  CHECK_THROWS(PredictorSpec::parse("depth=3"));
  CHECK_THROWS(PredictorSpec::parse("trees=x"));
  CHECK_THROWS(PredictorSpec::parse("impurity=foo"));

  const Dataset d = sample_gaussian_mixture({2, 2, 1.0, 1.0, 7}, 100);
  const Dataset e = with_geometry(d, GeometryKind::euclidean);
  CHECK(e.manifold == ManifoldSpec::euclidean(3));
  CHECK(e.points == d.points);
  const FittedModel fm = fit_predictor(d, s, 3, 1);
  CHECK(fm.kind() == ModelKind::forest);
  CHECK(fm.manifold().kind == GeometryKind::euclidean);
  CHECK(FittedModel::from_json(fm.to_json()) == fm);
}
