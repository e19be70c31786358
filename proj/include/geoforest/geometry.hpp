#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoforest {

/// Thrown when an input violates a geometric precondition (off-manifold
/// point, angle outside the intersecting range, boundary of the disk...).
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class GeometryKind { hyperboloid, euclidean };

std::string to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(const std::string& name);

/// Identifies either the hyperboloid H^{D,K} (points satisfy <x,x>_L = -1/K,
/// x0 > 0, D+1 ambient coordinates) or Euclidean R^D (D coordinates).
struct ManifoldSpec {
  int dim = 2;
  double curvature = 1.0;
  GeometryKind kind = GeometryKind::hyperboloid;

  static ManifoldSpec hyperboloid(int dim, double curvature = 1.0);
  static ManifoldSpec euclidean(int dim);

  bool is_hyperboloid() const { return kind == GeometryKind::hyperboloid; }
  std::size_t ambient_dim() const {
    return is_hyperboloid() ? static_cast<std::size_t>(dim) + 1
                            : static_cast<std::size_t>(dim);
  }
  /// Distance from the ambient origin to the apex of the sheet, 1/sqrt(K).
  double radius() const;

  void validate() const;
  friend bool operator==(const ManifoldSpec&, const ManifoldSpec&) = default;
};

using Vector = std::vector<double>;

enum class Strictness { lenient, strict };

inline constexpr double kLenientManifoldTol = 1e-6;
inline constexpr double kStrictManifoldTol = 1e-9;

double manifold_tolerance(Strictness s);

double minkowski_inner(std::span<const double> x, std::span<const double> y);

/// |K<x,x>_L + 1| scaled by the size of the cancelled terms.
double manifold_residual(std::span<const double> x, const ManifoldSpec& m);
bool on_manifold(std::span<const double> x, const ManifoldSpec& m,
                 double tol = kLenientManifoldTol);
void check_on_manifold(std::span<const double> x, const ManifoldSpec& m,
                       double tol = kLenientManifoldTol);

double hyperbolic_distance(std::span<const double> x, std::span<const double> y,
                           const ManifoldSpec& m);

Vector origin(const ManifoldSpec& m);

// Model conversions. The Poincare and Klein images live in the open unit disk.
Vector to_poincare(std::span<const double> x, const ManifoldSpec& m);
Vector from_poincare(std::span<const double> p, const ManifoldSpec& m);
Vector to_klein(std::span<const double> x, const ManifoldSpec& m);
Vector from_klein(std::span<const double> k, const ManifoldSpec& m);

/// Scale at which alpha * (sin t, cos t) touches the hyperboloid; requires
/// pi/4 < theta < 3pi/4.
double compute_alpha(double theta, const ManifoldSpec& m);

/// Angle of the split plane hyperbolically equidistant from the planes at
/// theta1 and theta2 (measured on the 2-D slice through axes 0 and d).
/// The result does not depend on the curvature.
double midpoint_angle(double theta1, double theta2);

/// atan2(x0, x_d): the angle of the homogeneous plane through x rotated about
/// spacelike axis d. Lies in (pi/4, 3pi/4) for on-manifold x.
double point_angle(std::span<const double> x, std::size_t d);

Vector exp_map_origin(std::span<const double> v, const ManifoldSpec& m);
Vector parallel_transport_from_origin(std::span<const double> v,
                                      std::span<const double> mu,
                                      const ManifoldSpec& m);
Vector exp_map(std::span<const double> mu, std::span<const double> u,
               const ManifoldSpec& m);

/// Point of the geodesic submanifold cut out by the plane
/// x0 cos(theta) - x_d sin(theta) = 0, parameterized by one coordinate per
/// remaining spacelike axis (ascending, skipping d). An empty span is treated
/// as all zeros, which yields the point of the intersection closest to the apex.
Vector geodesic_point(double theta, std::size_t d, std::span<const double> t_params,
                      const ManifoldSpec& m);

/// Residual of the split-plane equation x0 cos(theta) - x_d sin(theta).
double plane_residual(std::span<const double> x, double theta, std::size_t d);

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kQuarterPi = kPi / 4.0;
inline constexpr double kThreeQuarterPi = 3.0 * kPi / 4.0;

inline bool valid_split_angle(double theta) {
  return theta > kQuarterPi && theta < kThreeQuarterPi;
}

}  // namespace geoforest
