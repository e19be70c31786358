#include "geoforest/mixture.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "geoforest/parallel.hpp"
#include "geoforest/rng.hpp"

namespace geoforest {

void GaussianMixtureSpec::validate() const {
  if (n_classes < 2) throw std::invalid_argument("mixture needs at least 2 classes");
  if (dim < 1) throw std::invalid_argument("mixture dimension must be >= 1");
  if (!(curvature > 0.0)) throw std::invalid_argument("curvature magnitude must be > 0");
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
    throw std::invalid_argument("noise scale must be a finite value >= 0");
}

std::vector<double> MixtureParameters::covariance(std::size_t k, double noise_scale) const {
  const auto& C = factors.at(k);
  const std::size_t D = static_cast<std::size_t>(std::sqrt(static_cast<double>(C.size())));
  std::vector<double> sigma(D * D, 0.0);
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) {
      double s = 0;
      for (std::size_t l = 0; l < D; ++l) s += C[i * D + l] * C[j * D + l];
      sigma[i * D + j] = noise_scale * s / static_cast<double>(D);
    }
  return sigma;
}

MixtureParameters mixture_parameters(const GaussianMixtureSpec& spec) {
  spec.validate();
  const auto m = ManifoldSpec::hyperboloid(spec.dim, spec.curvature);
  const std::size_t D = static_cast<std::size_t>(spec.dim);
  MixtureParameters params;

  for (int k = 0; k < spec.n_classes; ++k) {
    auto gen = make_stream(spec.seed, StreamDomain::mixture_class, static_cast<std::uint64_t>(k));
    boost::random::normal_distribution<double> normal;
    Vector tangent(D + 1, 0.0);
    for (std::size_t i = 1; i <= D; ++i) tangent[i] = normal(gen);
    params.means.push_back(exp_map_origin(tangent, m));
    std::vector<double> C(D * D);
    for (double& c : C) c = normal(gen);
    params.factors.push_back(std::move(C));
  }

  auto gen = make_stream(spec.seed, StreamDomain::mixture_weights, 0);
  boost::random::uniform_01<double> uniform;
  std::vector<double> w(static_cast<std::size_t>(spec.n_classes));
  for (double& v : w) v = uniform(gen);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  params.class_probabilities = std::move(w);
  return params;
}

Dataset sample_gaussian_mixture(const GaussianMixtureSpec& spec, std::size_t n_samples, int jobs) {
  if (n_samples < 1) throw std::invalid_argument("sample_gaussian_mixture: n_samples must be >= 1");
  const auto params = mixture_parameters(spec);
  const auto m = ManifoldSpec::hyperboloid(spec.dim, spec.curvature);
  const std::size_t D = static_cast<std::size_t>(spec.dim);
  const std::size_t C = static_cast<std::size_t>(spec.n_classes);

  std::vector<double> cumulative(C);
  std::partial_sum(params.class_probabilities.begin(), params.class_probabilities.end(),
                   cumulative.begin());

  // v ~ N(0, a C C^T / D) as sqrt(a / D) * C z with z standard normal.
  const double scale = std::sqrt(spec.noise_scale / static_cast<double>(D));

  Dataset data;
  data.manifold = m;
  data.task = Task::classification;
  data.class_names = default_class_names(C);
  data.points = PointMatrix(n_samples, D + 1);
  data.labels.assign(n_samples, 0.0);

  const auto n = static_cast<std::ptrdiff_t>(n_samples);
  ExceptionCollector errors;
#pragma omp parallel for schedule(static) num_threads(resolve_jobs(jobs))
  for (std::ptrdiff_t si = 0; si < n; ++si) errors.capture([&] {
    const auto i = static_cast<std::size_t>(si);
    auto gen = make_stream(spec.seed, StreamDomain::mixture_sample, i);
    boost::random::uniform_01<double> uniform;
    boost::random::normal_distribution<double> normal;

    const double u = uniform(gen);
    std::size_t k = 0;
    while (k + 1 < C && u >= cumulative[k]) ++k;

    std::vector<double> z(D);
    for (double& zi : z) zi = normal(gen);
    Vector v(D + 1, 0.0);
    const auto& F = params.factors[k];
    for (std::size_t r = 0; r < D; ++r) {
      double s = 0;
      for (std::size_t c = 0; c < D; ++c) s += F[r * D + c] * z[c];
      v[r + 1] = scale * s;
    }
    const Vector moved = parallel_transport_from_origin(v, params.means[k], m);
    const Vector x = exp_map(params.means[k], moved, m);
    std::copy(x.begin(), x.end(), data.points.row(i).begin());
    data.labels[i] = static_cast<double>(k);
  });
  errors.rethrow();
  return data;
}

}  // namespace geoforest
