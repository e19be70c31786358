#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "geoforest/dataset.hpp"

namespace testing_support {

using geoforest::Vector;

/// On-manifold point built directly from its spatial part: x0 = sqrt(1/K + |x|^2).
inline Vector lift(const std::vector<double>& spatial, double K) {
  double s = 1.0 / K;
  for (double v : spatial) s += v * v;
  Vector x{std::sqrt(s)};
  x.insert(x.end(), spatial.begin(), spatial.end());
  return x;
}

inline Vector random_point(std::mt19937_64& rng, int D, double K, double spread = 2.0) {
  std::normal_distribution<double> n(0.0, spread);
  std::vector<double> s(static_cast<std::size_t>(D));
  for (auto& v : s) v = n(rng);
  return lift(s, K);
}

/// Textbook distance, acosh(-K<x,y>)/sqrt(K), written out independently.
inline double distance_oracle(const Vector& x, const Vector& y, double K) {
  double ip = -x[0] * y[0];
  for (std::size_t i = 1; i < x.size(); ++i) ip += x[i] * y[i];
  return std::acosh(std::max(1.0, -K * ip)) / std::sqrt(K);
}

/// Point of the 2-D slice whose plane angle is theta: alpha (sin t, cos t).
inline Vector slice_point(double theta, double K) {
  const double a = std::sqrt(-1.0 / std::cos(2.0 * theta)) / std::sqrt(K);
  return {a * std::sin(theta), a * std::cos(theta)};
}

/// Equidistant angle on the 2-D slice by bisection on the distance residual.
inline double bisect_midpoint(double t1, double t2, double K) {
  const Vector p1 = slice_point(t1, K), p2 = slice_point(t2, K);
  auto f = [&](double t) {
    const Vector p = slice_point(t, K);
    return distance_oracle(p1, p, K) - distance_oracle(p, p2, K);
  };
  double lo = std::min(t1, t2), hi = std::max(t1, t2);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Labeled hyperboloid dataset with random points and labels in [0, C).
inline geoforest::Dataset random_dataset(std::mt19937_64& rng, std::size_t n, int D, int C, double K = 1.0) {
  geoforest::Dataset d;
  d.manifold = geoforest::ManifoldSpec::hyperboloid(D, K);
  std::uniform_int_distribution<int> label(0, C - 1);
  for (std::size_t i = 0; i < n; ++i) {
    d.points.push_row(random_point(rng, D, K));
    d.labels.push_back(label(rng));
  }
  d.class_names = geoforest::default_class_names(static_cast<std::size_t>(C));
  return d;
}

}  // namespace testing_support
