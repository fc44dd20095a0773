#include "core/geometry.hpp"

#include <cmath>

namespace prox3d {

double wrap_angle(double a) {
  double y = std::fmod(a + kPi, 2.0 * kPi);
  if (y <= 0.0) y += 2.0 * kPi;
  return y - kPi;
}

double CartesianLocation::norm() const { return std::sqrt(x * x + y * y + z * z); }

NormalizedPoint back_project(const PixelPoint& px, const CameraIntrinsics& k) {
  return {(px.u - k.cx) / k.fx, (px.v - k.cy) / k.fy};
}

PixelPoint project(const CartesianLocation& p, const CameraIntrinsics& k) {
  if (!(p.z > 0.0)) {
    throw std::domain_error("cannot project a point with z <= 0");
  }
  return {k.fx * p.x / p.z + k.cx, k.fy * p.y / p.z + k.cy};
}

SphericalLocation spherical_from_cartesian(const CartesianLocation& p) {
  const double d = p.norm();
  if (d <= 0.0) {
    throw std::domain_error("spherical coordinates undefined at the origin");
  }
  return {d, std::atan2(p.x, p.z), std::acos(-p.y / d)};
}

CartesianLocation cartesian_from_spherical(const SphericalLocation& s) {
  const double r = s.d * std::sin(s.psi);  // ground-plane radius
  return {r * std::sin(s.beta), -s.d * std::cos(s.psi), r * std::cos(s.beta)};
}

double viewpoint_from_orientation(double theta, double beta) {
  return wrap_angle(theta + beta);
}

double orientation_from_viewpoint(double alpha, double beta) {
  return wrap_angle(alpha - beta);
}

double decode_orientation(double sin_alpha, double cos_alpha, double beta) {
  // atan2 is scale-invariant, so the renormalization is implicit; it is
  // spelled out to guard the all-zero encoding.
  const double n = std::hypot(sin_alpha, cos_alpha);
  if (n <= 0.0) {
    throw std::domain_error("orientation encoding (0, 0) cannot be decoded");
  }
  return orientation_from_viewpoint(std::atan2(sin_alpha / n, cos_alpha / n), beta);
}

}  // namespace prox3d
