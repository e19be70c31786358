#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "geoforest/mixture.hpp"
#include "support.hpp"

using namespace geoforest;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "geoforest_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("parse a small hyperboloid csv") {
  const double c = std::cosh(1.0), s = std::sinh(1.0);
  std::ostringstream text;
  text.precision(17);
  text << "label,x0,x1,x2\n"
       << "b,1,0,0\n"
       << "a," << c << "," << s << ",0\n"
       << "b," << c << ",0," << -s << "\n";
  const Dataset d = parse_dataset(text.str(), {0, 1.0, GeometryKind::hyperboloid});
  CHECK(d.size() == 3);
  CHECK(d.manifold.dim == 2);
  CHECK(d.n_classes() == 2);
  CHECK(d.class_names == std::vector<std::string>{"a", "b"});
  CHECK(d.labels == std::vector<double>{1, 0, 1});
}

TEST_CASE("numeric labels keep numeric order") {
  const std::string text = "label,x0,x1\n10,1,0\n9,1,0\n2,1,0\n";
  const Dataset d = parse_dataset(text, ManifoldSpec::hyperboloid(1));
  CHECK(d.class_names == std::vector<std::string>{"2", "9", "10"});
  CHECK(d.labels == std::vector<double>{2, 1, 0});
}

TEST_CASE("malformed files are rejected") {
  const auto m = ManifoldSpec::hyperboloid(1);
  CHECK_THROWS_AS(parse_dataset("x0,x1\n1,0\n", m), DatasetError);
  CHECK_THROWS_AS(parse_dataset("label,x0,x1\n", m), DatasetError);
  CHECK_THROWS_AS(parse_dataset("label,x0,x1\na,1\n", m), DatasetError);
  CHECK_THROWS_AS(parse_dataset("label,x0,x1\na,1,zz\n", m), DatasetError);
  CHECK_THROWS_AS(parse_dataset("label,x0,x1,x2\na,1,0,0\n", m), DatasetError);

  try {
    parse_dataset("label,x0,x1\na,1,0\nb,2,0\n", m);
    FAIL("expected an off-manifold error");
  } catch (const DatasetError& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
}

TEST_CASE("poincare input on the disk boundary names the row") {
  LoadOptions opt;
  opt.coords = CoordinateModel::poincare;
  try {
    parse_dataset("label,p1,p2\na,0.1,0.2\nb,0.3,0.1\na,1.0,0.0\n", {0, 1.0, GeometryKind::hyperboloid}, opt);
    FAIL("expected a boundary error");
  } catch (const DatasetError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
  const Dataset ok =
      parse_dataset("label,p1,p2\na,0.5,0\n", {0, 1.0, GeometryKind::hyperboloid}, opt);
  CHECK(ok.manifold.dim == 2);
  CHECK(ok.points(0, 0) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("euclidean load skips the manifold check") {
  LoadOptions opt;
  opt.validate_manifold = false;
  const Dataset d = parse_dataset("label,f0,f1,f2\na,5,1,-2\n", {0, 1.0, GeometryKind::euclidean}, opt);
  CHECK(d.manifold.dim == 3);
  CHECK(d.points(0, 2) == -2);
}

TEST_CASE("generated data round-trips through files") {
  GaussianMixtureSpec spec{3, 3, 2.0, 1.0, 11};
  const Dataset d = sample_gaussian_mixture(spec, 200);
  for (const auto& name : {"round.csv", "round.csv.gz"}) {
    const auto path = temp_path(name);
    save_dataset(d, path);
    const Dataset back = load_dataset(path, ManifoldSpec::hyperboloid(3, 2.0));
    CHECK(back == d);
  }
  // The gzip file really is compressed.
  const auto gz = temp_path("round.csv.gz");
  const std::string raw = read_text_file(gz);
  CHECK(raw.size() > 0);
  std::ifstream bytes(gz, std::ios::binary);
  unsigned char magic[2] = {0, 0};
  bytes.read(reinterpret_cast<char*>(magic), 2);
  CHECK(magic[0] == 0x1f);
  CHECK(magic[1] == 0x8b);

  SUBCASE("poincare and klein round trips") {
    for (auto c : {CoordinateModel::poincare, CoordinateModel::klein}) {
      const auto path = temp_path("conv.csv");
      save_dataset(d, path, c);
      LoadOptions opt;
      opt.coords = c;
      const Dataset back = load_dataset(path, {0, 2.0, GeometryKind::hyperboloid}, opt);
      REQUIRE(back.size() == d.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        // Klein coordinates of far points crowd the unit sphere, so 1 - |k|^2
        // carries only about eps * K * x0^2 relative precision.
        const double x0 = d.points(i, 0);
        double rel = 1e-10;
        if (c == CoordinateModel::klein) rel = std::max(rel, 16 * 2.220446049250313e-16 * 2.0 * x0 * x0);
        for (std::size_t j = 0; j < d.points.cols(); ++j)
          CHECK(std::abs(back.points(i, j) - d.points(i, j)) <= rel * std::max(1.0, x0));
      }
    }
  }
}

TEST_CASE("subset selects rows with repeats") {
  std::mt19937_64 rng(1);
  const Dataset d = testing_support::random_dataset(rng, 10, 2, 3);
  const std::size_t idx[] = {4, 4, 0};
  const Dataset s = d.subset(idx);
  CHECK(s.size() == 3);
  CHECK(s.labels[0] == d.labels[4]);
  CHECK(s.points(1, 2) == d.points(4, 2));
  CHECK(s.points(2, 1) == d.points(0, 1));
}

TEST_CASE("mixture sampling") {
  GaussianMixtureSpec spec{4, 3, 1.5, 1.0, 99};
  const Dataset a = sample_gaussian_mixture(spec, 500, 1);
  const Dataset b = sample_gaussian_mixture(spec, 500, 3);
  CHECK(a == b);
  CHECK(a.n_classes() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(on_manifold(a.points.row(i), a.manifold, kStrictManifoldTol));

  spec.seed = 100;
  CHECK_FALSE(sample_gaussian_mixture(spec, 500) == a);

  SUBCASE("parameters") {
    const auto params = mixture_parameters(spec);
    double total = 0;
    for (double p : params.class_probabilities) {
      CHECK(p > 0);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    const auto m = ManifoldSpec::hyperboloid(spec.dim, spec.curvature);
    for (const auto& mu : params.means) CHECK(on_manifold(mu, m, kStrictManifoldTol));
    for (std::size_t k = 0; k < params.means.size(); ++k) {
      const auto S = params.covariance(k, 2.0);
      const std::size_t D = 3;
      for (std::size_t i = 0; i < D; ++i) {
        CHECK(S[i * D + i] >= 0);
        for (std::size_t j = 0; j < D; ++j) CHECK(S[i * D + j] == doctest::Approx(S[j * D + i]));
      }
      // Sigma = a C C^T / D, checked entrywise from the factor.
      const auto& C = params.factors[k];
      double s01 = 0;
      for (std::size_t l = 0; l < D; ++l) s01 += C[0 * D + l] * C[1 * D + l];
      CHECK(S[1] == doctest::Approx(2.0 * s01 / 3.0).epsilon(1e-12));
    }
  }

  SUBCASE("zero noise collapses each class onto its mean") {
    GaussianMixtureSpec z{3, 2, 1.0, 0.0, 5};
    const auto params = mixture_parameters(z);
    const Dataset d = sample_gaussian_mixture(z, 100);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto& mu = params.means[static_cast<std::size_t>(d.labels[i])];
      for (std::size_t j = 0; j < mu.size(); ++j) CHECK(d.points(i, j) == mu[j]);
    }
  }

  SUBCASE("class frequencies match the drawn probabilities") {
    GaussianMixtureSpec big{5, 2, 1.0, 1.0, 2024};
    const std::size_t n = 100000;
    const auto params = mixture_parameters(big);
    const Dataset d = sample_gaussian_mixture(big, n, 2);
    std::vector<double> counts(5, 0.0);
    for (double l : d.labels) counts[static_cast<std::size_t>(l)] += 1;
    double chi2 = 0;
    for (std::size_t k = 0; k < 5; ++k) {
      const double expected = params.class_probabilities[k] * static_cast<double>(n);
      chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
    }
    const boost::math::chi_squared dist(4);
    CHECK(chi2 < boost::math::quantile(boost::math::complement(dist, 0.001)));
  }

  CHECK_THROWS(sample_gaussian_mixture({1, 2, 1.0, 1.0, 0}, 10));
  CHECK_THROWS(sample_gaussian_mixture({2, 2, 1.0, -1.0, 0}, 10));
}
