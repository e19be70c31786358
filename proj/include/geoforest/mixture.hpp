#pragma once

#include <cstdint>
#include <vector>

#include "geoforest/dataset.hpp"

namespace geoforest {

/// Mixture of wrapped normal distributions on H^{D,K}.
struct GaussianMixtureSpec {
  int n_classes = 2;
  int dim = 2;
  double curvature = 1.0;
  /// Covariance scale a in Sigma = a C C^T / D.
  double noise_scale = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Per-class parameters derived deterministically from the spec's seed.
struct MixtureParameters {
  std::vector<Vector> means;             // on-manifold, length D+1
  std::vector<std::vector<double>> factors;  // row-major D x D matrices C_k
  std::vector<double> class_probabilities;

  /// Sigma_k = a C_k C_k^T / D, row-major D x D.
  std::vector<double> covariance(std::size_t k, double noise_scale) const;
};

MixtureParameters mixture_parameters(const GaussianMixtureSpec& spec);

/// Draws n samples. Sample i uses its own RNG stream, so output is
/// independent of `jobs`.
Dataset sample_gaussian_mixture(const GaussianMixtureSpec& spec, std::size_t n_samples, int jobs = 1);

}  // namespace geoforest
