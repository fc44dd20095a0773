#pragma once

#include <array>

#include "core/geometry.hpp"
#include "core/pose.hpp"

namespace prox3d {

// Upright anthropometric skeleton: per-joint vertical offsets (height above
// the ground as a fraction of stature) and lateral half-widths (signed
// fraction of stature along the body's left axis). Defaults follow the
// Drillis segment conventions; only the shoulder-hip gap (0.288) is load-
// bearing for the rest of the pipeline, everything else is adjustable.
struct SkeletonModel {
  std::array<double, kNumJoints> vertical_frac;
  std::array<double, kNumJoints> lateral_frac;  // signed: +left, -right

  static SkeletonModel standard();
};

struct Person3D {
  CartesianLocation location;   // mid-hip, camera frame
  double theta = 0.0;           // body yaw; facing = (cos theta, sin theta) in (x, z)
  double height_m = 0.0;
  std::array<double, 3> dims{};  // (w, h, l) m

  GroundTruth ground_truth() const {
    return {location, theta, height_m, dims};
  }
};

// 3D joints of an upright person. Joints lie on the vertical plane spanned
// by the up axis and the lateral axis (-sin theta, cos theta) in (x, z),
// anchored so the hip midpoint coincides with p.location.
std::array<CartesianLocation, kNumJoints> skeleton_from_person(
    const Person3D& p, const SkeletonModel& model);

}  // namespace prox3d
