#pragma once

#include <stdexcept>

namespace prox3d {

inline constexpr double kPi = 3.14159265358979323846;

// Wrap an angle into (-pi, pi], half-open at -pi.
double wrap_angle(double a);

// Pinhole intrinsics, zero skew. Units: pixels.
//
// Camera frame convention used across the project: x right, y down,
// z forward. The ground plane sits at positive y.
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  CameraIntrinsics() = default;
  CameraIntrinsics(double fx_, double fy_, double cx_, double cy_)
      : fx(fx_), fy(fy_), cx(cx_), cy(cy_) {
    if (!(fx > 0.0) || !(fy > 0.0)) {
      throw std::invalid_argument("camera intrinsics require fx > 0 and fy > 0");
    }
  }
};

struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
};

// First two components of K^-1 [u, v, 1]^T.
struct NormalizedPoint {
  double x = 0.0;
  double y = 0.0;
};

struct CartesianLocation {
  double x = 0.0;  // right
  double y = 0.0;  // down
  double z = 0.0;  // forward

  double norm() const;
};

// Spherical parametrization of a camera-frame point:
//   d    radial distance, meters
//   beta azimuth, atan2(x, z), measured from the forward z-axis toward +x
//   psi  polar angle, measured from the "up" direction -y, in [0, pi]
//
// beta/psi reference axes are a repo convention (documented here once and
// shared by every module); eye height straight ahead has psi = pi/2.
struct SphericalLocation {
  double d = 0.0;
  double beta = 0.0;
  double psi = 0.0;
};

NormalizedPoint back_project(const PixelPoint& px, const CameraIntrinsics& k);

// Throws if p.z <= 0 (point behind the camera).
PixelPoint project(const CartesianLocation& p, const CameraIntrinsics& k);

// Throws on the degenerate origin.
SphericalLocation spherical_from_cartesian(const CartesianLocation& p);
CartesianLocation cartesian_from_spherical(const SphericalLocation& s);

// Viewpoint angle alpha = theta + beta, wrapped into (-pi, pi].
// theta is the body yaw in the x-z plane: the facing direction is
// (cos theta, sin theta) in (x, z).
double viewpoint_from_orientation(double theta, double beta);
double orientation_from_viewpoint(double alpha, double beta);

// Decode a (sin, cos) pair into the orientation theta. The pair is
// renormalized to unit length before atan2, so raw regression outputs
// can be fed in directly.
double decode_orientation(double sin_alpha, double cos_alpha, double beta);

}  // namespace prox3d
