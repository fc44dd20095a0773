#include "core/skeleton.hpp"

#include <cmath>

namespace prox3d {

SkeletonModel SkeletonModel::standard() {
  SkeletonModel m{};
  const auto set = [&m](int joint, double vertical, double lateral) {
    m.vertical_frac[static_cast<std::size_t>(joint)] = vertical;
    m.lateral_frac[static_cast<std::size_t>(joint)] = lateral;
  };
  set(kNose, 0.936, 0.0);
  set(kLeftEye, 0.950, 0.019);
  set(kRightEye, 0.950, -0.019);
  set(kLeftEar, 0.945, 0.043);
  set(kRightEar, 0.945, -0.043);
  set(kLeftShoulder, 0.818, 0.129);
  set(kRightShoulder, 0.818, -0.129);
  set(kLeftElbow, 0.630, 0.143);
  set(kRightElbow, 0.630, -0.143);
  set(kLeftWrist, 0.485, 0.152);
  set(kRightWrist, 0.485, -0.152);
  set(kLeftHip, 0.530, 0.0955);
  set(kRightHip, 0.530, -0.0955);
  set(kLeftKnee, 0.285, 0.060);
  set(kRightKnee, 0.285, -0.060);
  set(kLeftAnkle, 0.039, 0.060);
  set(kRightAnkle, 0.039, -0.060);
  return m;
}

std::array<CartesianLocation, kNumJoints> skeleton_from_person(
    const Person3D& p, const SkeletonModel& model) {
  // lateral axis: facing (cos theta, sin theta) rotated +90 deg in (x, z)
  const double lx = -std::sin(p.theta);
  const double lz = std::cos(p.theta);
  const double hip_frac = model.vertical_frac[kLeftHip];
  std::array<CartesianLocation, kNumJoints> joints;
  for (int i = 0; i < kNumJoints; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double lateral = model.lateral_frac[idx] * p.height_m;
    // y grows downward: joints above the hip have smaller y
    const double dy = (hip_frac - model.vertical_frac[idx]) * p.height_m;
    joints[idx] = {p.location.x + lateral * lx, p.location.y + dy,
                   p.location.z + lateral * lz};
  }
  return joints;
}

}  // namespace prox3d
