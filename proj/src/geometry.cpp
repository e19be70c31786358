#include "geoforest/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

namespace geoforest {

namespace {

double squared_norm(std::span<const double> v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

void require_ambient(std::span<const double> x, const ManifoldSpec& m, const char* what) {
  if (x.size() != m.ambient_dim()) {
    std::ostringstream os;
    os << what << ": expected " << m.ambient_dim() << " ambient coordinates, got "
       << x.size();
    throw std::invalid_argument(os.str());
  }
}

void require_angle(double theta, const char* what) {
  if (!valid_split_angle(theta)) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": angle " << theta << " outside (pi/4, 3pi/4)";
    throw GeometryError(os.str());
  }
}

}  // namespace

std::string to_string(GeometryKind kind) {
  return kind == GeometryKind::hyperboloid ? "hyperboloid" : "euclidean";
}

GeometryKind geometry_kind_from_string(const std::string& name) {
  if (name == "hyperboloid") return GeometryKind::hyperboloid;
  if (name == "euclidean") return GeometryKind::euclidean;
  throw std::invalid_argument("unknown geometry '" + name + "'");
}

ManifoldSpec ManifoldSpec::hyperboloid(int dim, double curvature) {
  ManifoldSpec m{dim, curvature, GeometryKind::hyperboloid};
  m.validate();
  return m;
}

ManifoldSpec ManifoldSpec::euclidean(int dim) {
  ManifoldSpec m{dim, 1.0, GeometryKind::euclidean};
  m.validate();
  return m;
}

double ManifoldSpec::radius() const { return 1.0 / std::sqrt(curvature); }

void ManifoldSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("manifold dimension must be >= 1");
  if (is_hyperboloid() && !(curvature > 0.0 && std::isfinite(curvature)))
    throw std::invalid_argument("hyperboloid curvature magnitude K must be > 0");
}

double manifold_tolerance(Strictness s) {
  return s == Strictness::strict ? kStrictManifoldTol : kLenientManifoldTol;
}

double minkowski_inner(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    std::ostringstream os;
    os << "minkowski_inner: dimension mismatch (" << x.size() << " vs " << y.size() << ")";
    throw std::invalid_argument(os.str());
  }
  double s = -x[0] * y[0];
  for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double manifold_residual(std::span<const double> x, const ManifoldSpec& m) {
  const double K = m.curvature;
  const double r = std::abs(K * minkowski_inner(x, x) + 1.0);
  return r / std::max(1.0, K * x[0] * x[0]);
}

bool on_manifold(std::span<const double> x, const ManifoldSpec& m, double tol) {
  if (x.size() != m.ambient_dim()) return false;
  if (!(x[0] > 0.0)) return false;
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return manifold_residual(x, m) <= tol;
}

void check_on_manifold(std::span<const double> x, const ManifoldSpec& m, double tol) {
  require_ambient(x, m, "check_on_manifold");
  if (!on_manifold(x, m, tol)) {
    std::ostringstream os;
    os.precision(6);
    os << "point is off the hyperboloid H^{" << m.dim << "," << m.curvature
       << "} (x0 = " << x[0] << ", residual " << manifold_residual(x, m) << ")";
    throw GeometryError(os.str());
  }
}

double hyperbolic_distance(std::span<const double> x, std::span<const double> y,
                           const ManifoldSpec& m) {
  check_on_manifold(x, m);
  check_on_manifold(y, m);
  const double arg = -m.curvature * minkowski_inner(x, y);
  if (arg < 1.0 - 1e-6) {
    std::ostringstream os;
    os << "hyperbolic_distance: acosh argument " << arg << " below 1";
    throw GeometryError(os.str());
  }
  return std::acosh(std::max(arg, 1.0)) / std::sqrt(m.curvature);
}

Vector origin(const ManifoldSpec& m) {
  Vector o(m.ambient_dim(), 0.0);
  o[0] = m.radius();
  return o;
}

Vector to_poincare(std::span<const double> x, const ManifoldSpec& m) {
  require_ambient(x, m, "to_poincare");
  check_on_manifold(x, m);
  const double denom = m.radius() + x[0];
  Vector p(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) p[i - 1] = x[i] / denom;
  return p;
}

Vector from_poincare(std::span<const double> p, const ManifoldSpec& m) {
  const double r2 = squared_norm(p);
  if (!(std::sqrt(r2) < 1.0 - 1e-12)) {
    std::ostringstream os;
    os << "from_poincare: point norm " << std::sqrt(r2) << " is on or outside the unit disk";
    throw GeometryError(os.str());
  }
  const double R = m.radius();
  const double scale = 1.0 / (1.0 - r2);
  Vector x(p.size() + 1);
  x[0] = R * (1.0 + r2) * scale;
  for (std::size_t i = 0; i < p.size(); ++i) x[i + 1] = R * 2.0 * p[i] * scale;
  return x;
}

Vector to_klein(std::span<const double> x, const ManifoldSpec& m) {
  require_ambient(x, m, "to_klein");
  check_on_manifold(x, m);
  Vector k(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) k[i - 1] = x[i] / x[0];
  return k;
}

Vector from_klein(std::span<const double> k, const ManifoldSpec& m) {
  const double r2 = squared_norm(k);
  if (!(std::sqrt(r2) < 1.0 - 1e-12)) {
    std::ostringstream os;
    os << "from_klein: point norm " << std::sqrt(r2) << " is on or outside the unit disk";
    throw GeometryError(os.str());
  }
  Vector x(k.size() + 1);
  x[0] = m.radius() / std::sqrt(1.0 - r2);
  for (std::size_t i = 0; i < k.size(); ++i) x[i + 1] = x[0] * k[i];
  return x;
}

double compute_alpha(double theta, const ManifoldSpec& m) {
  require_angle(theta, "compute_alpha");
  return std::sqrt(-1.0 / std::cos(2.0 * theta)) / std::sqrt(m.curvature);
}

double midpoint_angle(double theta1, double theta2) {
  require_angle(theta1, "midpoint_angle");
  require_angle(theta2, "midpoint_angle");
  if (theta1 > theta2) std::swap(theta1, theta2);
  if (theta1 == theta2) return theta1;
  if (theta1 + theta2 == kPi) return kPi / 2.0;

  // cot(theta_m) solves c^2 - 2 V c + 1 = 0. The roots multiply to 1; the
  // one inside [-1, 1] is the midpoint (theta1 < pi - theta2 picks V - sqrt,
  // the other side V + sqrt), evaluated as 1 / (V + sign(V) sqrt(V^2 - 1)).
  const double V = std::cos(theta2 - theta1) / std::sin(theta1 + theta2);
  double disc = V * V - 1.0;
  if (disc < 0.0) {
    if (disc < -1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "midpoint_angle: negative discriminant " << disc << " for (" << theta1 << ", "
         << theta2 << ")";
      throw GeometryError(os.str());
    }
    disc = 0.0;
  }
  const double w = V + std::copysign(std::sqrt(disc), V);
  const double theta_m = std::atan2(1.0, 1.0 / w);
  return std::clamp(theta_m, theta1, theta2);
}

double point_angle(std::span<const double> x, std::size_t d) {
  if (d < 1 || d >= x.size())
    throw std::invalid_argument("point_angle: dimension index out of range");
  return std::atan2(x[0], x[d]);
}

Vector exp_map_origin(std::span<const double> v, const ManifoldSpec& m) {
  require_ambient(v, m, "exp_map_origin");
  if (v[0] != 0.0) throw GeometryError("exp_map_origin: tangent vector must have v0 = 0");
  return exp_map(origin(m), v, m);
}

Vector parallel_transport_from_origin(std::span<const double> v, std::span<const double> mu,
                                      const ManifoldSpec& m) {
  require_ambient(v, m, "parallel_transport_from_origin");
  require_ambient(mu, m, "parallel_transport_from_origin");
  if (v[0] != 0.0)
    throw GeometryError("parallel_transport_from_origin: tangent vector must have v0 = 0");
  check_on_manifold(mu, m);

  const Vector o = origin(m);
  const double coef = minkowski_inner(mu, v) / (1.0 / m.curvature - minkowski_inner(o, mu));
  Vector out(v.begin(), v.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += coef * (o[i] + mu[i]);

#ifndef NDEBUG
  const double scale = 1.0 + std::abs(minkowski_inner(v, v)) + mu[0] * mu[0];
  assert(std::abs(minkowski_inner(out, mu)) <= 1e-8 * scale);
  assert(std::abs(minkowski_inner(out, out) - minkowski_inner(v, v)) <= 1e-8 * scale);
#endif
  return out;
}

Vector exp_map(std::span<const double> mu, std::span<const double> u, const ManifoldSpec& m) {
  require_ambient(mu, m, "exp_map");
  require_ambient(u, m, "exp_map");
  const double uu = minkowski_inner(u, u);
  const double tangency = minkowski_inner(u, mu);
  const double scale = 1.0 + std::sqrt(std::max(uu, 0.0)) * mu[0];
  if (std::abs(tangency) > 1e-8 * scale)
    throw GeometryError("exp_map: vector is not tangent at the base point");

  Vector out(mu.begin(), mu.end());
  const double norm = std::sqrt(std::max(uu, 0.0));
  if (norm == 0.0) return out;
  const double sqrtK = std::sqrt(m.curvature);
  const double lambda = sqrtK * norm;
  const double c = std::cosh(lambda);
  const double s = std::sinh(lambda) / lambda;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * mu[i] + s * u[i];
  return out;
}

Vector geodesic_point(double theta, std::size_t d, std::span<const double> t_params,
                      const ManifoldSpec& m) {
  require_angle(theta, "geodesic_point");
  const std::size_t D = static_cast<std::size_t>(m.dim);
  if (d < 1 || d > D) throw std::invalid_argument("geodesic_point: split axis out of range");
  if (!t_params.empty() && t_params.size() != D - 1)
    throw std::invalid_argument("geodesic_point: expected D-1 geodesic coordinates");

  const double alpha = compute_alpha(theta, m);
  const double inv_sqrtK = 1.0 / std::sqrt(m.curvature);
  Vector v(D + 1, 0.0);
  v[0] = alpha * std::sin(theta);
  v[d] = alpha * std::cos(theta);
  if (t_params.empty()) return v;

  std::size_t k = 0;
  for (std::size_t axis = 1; axis <= D; ++axis) {
    if (axis == d) continue;
    const double t = t_params[k++];
    if (t == 0.0) continue;
    const double c = std::cosh(t);
    for (double& vi : v) vi *= c;
    v[axis] += std::sinh(t) * inv_sqrtK;
  }
  return v;
}

double plane_residual(std::span<const double> x, double theta, std::size_t d) {
  return x[0] * std::cos(theta) - x[d] * std::sin(theta);
}

}  // namespace geoforest
