#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/geometry.hpp"
#include "core/pose.hpp"

namespace prox3d {

struct SegmentCalibration {
  std::string segment;
  double mean_m = 0.0;
  double std_m = 0.0;
  int count = 0;
};

struct BaselineCalibration {
  std::vector<SegmentCalibration> segments;
  std::size_t selected = 0;  // index of the minimum-std usable segment

  const SegmentCalibration& chosen() const { return segments[selected]; }
};

// Back-projects every record's candidate segments to metric lengths using the
// ground-truth depth, averaging left/right joints, and keeps per-segment
// mean/std. The most stable (minimum std) segment with enough coverage is
// selected. Throws on fewer than 30 records or records without ground truth.
BaselineCalibration calibrate_segments(const std::vector<Record>& records);

// Closed-form pinhole inversion for a vertical segment of true length dy seen
// at pixel rows v1 (top) and v2 (bottom) in column u. Of the two specular
// depth roots only the one in front of the camera is returned; the location
// is the segment midpoint.
CartesianLocation distance_from_segment(double v1, double v2, double u, double dy,
                                        const CameraIntrinsics& intrinsics);

// Full baseline localization of a pose: depth from the calibrated segment,
// anchored at the hip midpoint when the hips are visible. Empty when the
// required joints are missing or degenerate.
std::optional<CartesianLocation> baseline_locate(const Pose2D& pose,
                                                 const CameraIntrinsics& intrinsics,
                                                 const SegmentCalibration& segment);

void save_calibration(const BaselineCalibration& calibration,
                      const std::string& path);
BaselineCalibration load_calibration(const std::string& path);

}  // namespace prox3d
