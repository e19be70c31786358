#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "geoforest/dataset.hpp"
#include "geoforest/tree.hpp"

using namespace geoforest;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path workdir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "geoforest_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string file(const fs::path& p) { return read_text_file(p); }

Json json_file(const fs::path& p) { return Json::parse(read_text_file(p)); }

}  // namespace

TEST_CASE("generate") {
  const auto dir = workdir("generate");
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  auto r = run({"generate", "--classes", "2", "--dim", "2", "--n", "800", "--seed", "7", "--out", a});
  REQUIRE(r.code == 0);
  REQUIRE(run({"generate", "--classes", "2", "--dim", "2", "--n", "800", "--seed", "7", "--out", b}).code == 0);
  CHECK(file(a) == file(b));
  const Dataset d = load_dataset(a, ManifoldSpec::hyperboloid(2));
  CHECK(d.size() == 800);

  const Json m = json_file(a + ".manifest.json");
  CHECK(m["command"] == "generate");
  CHECK(m["seeds"]["seed"] == 7);
  CHECK(m["config"]["n"] == 800);
  CHECK(m["outputs"][0] == a);
  CHECK(m.contains("started_at"));
  CHECK(m.contains("version"));

  const auto z = (dir / "z.csv").string();
  REQUIRE(run({"generate", "--classes", "3", "--n", "60", "--noise", "0", "--out", z}).code == 0);
  const Dataset zd = load_dataset(z, ManifoldSpec::hyperboloid(2));
  for (std::size_t i = 0; i < zd.size(); ++i)
    for (std::size_t j = 0; j < zd.size(); ++j)
      if (zd.labels[i] == zd.labels[j]) CHECK(zd.points.row(i)[1] == zd.points.row(j)[1]);

  CHECK(run({"generate", "--classes", "1", "--n", "10", "--out", z}).code == 2);
  CHECK(run({"generate", "--n", "10"}).code == 2);
  CHECK(run({"generate", "--n", "10", "--out", z, "--noise", "-1"}).code == 2);
}

TEST_CASE("fit and predict") {
  const auto dir = workdir("fit");
  const auto data = (dir / "d.csv").string();
  REQUIRE(run({"generate", "--classes", "3", "--n", "300", "--seed", "1", "--out", data}).code == 0);
  const std::string before = file(data);

  for (const std::string model : {"tree", "forest"}) {
    const auto m = (dir / (model + ".json")).string();
    const auto p = (dir / (model + "_pred.csv")).string();
    REQUIRE(run({"fit", "--data", data, "--model", model, "--seed", "3", "--out", m}).code == 0);
    const Json fm = json_file(m + ".manifest.json");
    const double train_acc = fm["results"]["training_accuracy"];
    const auto r = run({"predict", "--model", m, "--data", data, "--out", p, "--proba"});
    REQUIRE(r.code == 0);
    const Json pm = json_file(p + ".manifest.json");
    CHECK(pm["results"]["accuracy"].get<double>() == train_acc);
    const std::string preds = file(p);
    CHECK(preds.rfind("prediction,p_0,p_1,p_2\n", 0) == 0);
    CHECK(std::count(preds.begin(), preds.end(), '\n') == 301);
  }
  CHECK(file(data) == before);

  SUBCASE("euclidean baseline on raw ambient coordinates") {
    const auto m = (dir / "e.json").string();
    REQUIRE(run({"fit", "--data", data, "--geometry", "euclidean", "--out", m}).code == 0);
    const Json j = json_file(m);
    CHECK(j["manifold"]["kind"] == "euclidean");
    CHECK(j["manifold"]["D"] == 3);
    REQUIRE(run({"predict", "--model", m, "--data", data, "--out", (dir / "ep.csv").string()}).code == 0);
  }

  SUBCASE("usage errors exit 2") {
    const auto m = (dir / "bad.json").string();
    CHECK(run({"fit", "--data", data, "--impurity", "foo", "--out", m}).code == 2);
    CHECK(run({"fit", "--data", data, "--geometry", "spherical", "--out", m}).code == 2);
    CHECK(run({"fit", "--data", data, "--max-depth", "0", "--out", m}).code == 2);
    CHECK(run({"fit", "--data", data, "--impurity", "mse", "--task", "classification", "--out", m}).code == 2);
    CHECK(run({"fit", "--data", data, "--max-features", "none", "--out", m}).code == 2);
    CHECK(run({"fit", "--out", m}).code == 2);
    CHECK(run({"fit", "--data", (dir / "missing.csv").string(), "--out", m}).code == 2);
    CHECK(run({"explode"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK_FALSE(fs::exists(m));
  }

  SUBCASE("off-manifold data is a runtime failure") {
    const auto pc = (dir / "pc.csv").string();
    REQUIRE(run({"convert", "--data", data, "--to", "poincare", "--out", pc}).code == 0);
    const auto r = run({"fit", "--data", pc, "--out", (dir / "x.json").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("row 0") != std::string::npos);
    CHECK(run({"fit", "--data", pc, "--coords", "poincare", "--out", (dir / "y.json").string()}).code == 0);
  }

  SUBCASE("help succeeds") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"fit", "--help"}).code == 0);
    CHECK(run({"--version"}).code == 0);
  }
}

TEST_CASE("convert round trip") {
  const auto dir = workdir("convert");
  const auto data = (dir / "d.csv").string();
  REQUIRE(run({"generate", "--classes", "2", "--dim", "3", "--curvature", "2", "--n", "200", "--out", data}).code == 0);
  const auto pc = (dir / "p.csv").string(), back = (dir / "h.csv").string();
  REQUIRE(run({"convert", "--data", data, "--to", "poincare", "--curvature", "2", "--out", pc}).code == 0);
  REQUIRE(run({"convert", "--data", pc, "--from", "poincare", "--to", "hyperboloid", "--curvature", "2", "--out",
               back}).code == 0);
  const auto m = ManifoldSpec::hyperboloid(3, 2.0);
  const Dataset a = load_dataset(data, m), b = load_dataset(back, m);
  REQUIRE(a.size() == b.size());
  CHECK(a.labels == b.labels);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs(a.points(i, j) - b.points(i, j)) <= 1e-10 * std::max(1.0, a.points(i, 0)));

  const auto k = (dir / "k.csv.gz").string();
  REQUIRE(run({"convert", "--data", data, "--to", "klein", "--curvature", "2", "--out", k}).code == 0);
  CHECK(file(k).rfind("label,k1,k2,k3\n", 0) == 0);
}

TEST_CASE("evaluate") {
  const auto dir = workdir("evaluate");
  const auto data = (dir / "d.csv").string();
  REQUIRE(run({"generate", "--classes", "2", "--n", "150", "--seed", "2", "--out", data}).code == 0);
  const auto out = dir / "ev";
  const auto r = run({"evaluate", "--data", data, "--predictor", "model=tree", "--predictor", "model=tree",
                      "--predictor", "geometry=euclidean", "--seeds", "2", "--folds", "3", "--out-dir",
                      out.string(), "--jobs", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("identical") != std::string::npos);
  const Json s = json_file(out / "summary.json");
  CHECK(s["jobs"] == 1);
  CHECK(s["means"].contains("hyperdt_2"));
  REQUIRE(s["t_tests"].size() == 3);
  CHECK(s["t_tests"][0]["status"] == "identical");
  const std::string csv = file(out / "cv_records.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3 * 3);
  const Json m = json_file(out / "manifest.json");
  CHECK(m["seeds"]["cv_seeds"].size() == 2);

  CHECK(run({"evaluate", "--data", data, "--predictor", "trees=-1", "--out-dir", out.string()}).code == 2);
}

TEST_CASE("sweep and boundaries") {
  const auto dir = workdir("sweep");
  const auto csv = (dir / "s.csv").string();
  const auto r = run({"sweep", "--axis", "n_samples", "--values", "60,120", "--trials", "2", "--trees", "2",
                      "--n-test", "20", "--out", csv});
  REQUIRE(r.code == 0);
  const std::string text = file(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  CHECK(json_file(csv + ".manifest.json")["results"].contains("fit_seconds_r_squared"));

  const auto data = (dir / "d.csv").string();
  REQUIRE(run({"generate", "--classes", "3", "--n", "200", "--out", data}).code == 0);
  const auto model = (dir / "t.json").string();
  REQUIRE(run({"fit", "--data", data, "--out", model}).code == 0);
  const auto bjson = (dir / "b.json").string();
  REQUIRE(run({"boundaries", "--model", model, "--out", bjson, "--resolution", "32"}).code == 0);
  const Json b = json_file(bjson);
  CHECK(b["grid"]["resolution"] == 32);
  CHECK(b["grid"]["classes"].size() == 32 * 32);
  REQUIRE(!b["boundaries"].empty());
  for (const auto& e : b["boundaries"]) {
    CHECK(e["polyline"].is_array());
    CHECK(e.contains("angle"));
    CHECK(e.contains("dim"));
    CHECK(e.contains("depth"));
  }

  const auto forest = (dir / "f.json").string();
  REQUIRE(run({"fit", "--data", data, "--model", "forest", "--trees", "2", "--out", forest}).code == 0);
  CHECK(run({"boundaries", "--model", forest, "--out", bjson}).code == 1);
}
