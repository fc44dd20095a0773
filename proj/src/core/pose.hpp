#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/geometry.hpp"

namespace prox3d {

// COCO 17-joint ordering, used for every pose in the project.
enum Joint : int {
  kNose = 0,
  kLeftEye,
  kRightEye,
  kLeftEar,
  kRightEar,
  kLeftShoulder,
  kRightShoulder,
  kLeftElbow,
  kRightElbow,
  kLeftWrist,
  kRightWrist,
  kLeftHip,
  kRightHip,
  kLeftKnee,
  kRightKnee,
  kLeftAnkle,
  kRightAnkle,
};

inline constexpr int kNumJoints = 17;
extern const std::array<const char*, kNumJoints> kJointNames;

// (left, right) index pairs for horizontal flipping.
inline constexpr std::array<std::pair<int, int>, 8> kLeftRightPairs = {{
    {kLeftEye, kRightEye},
    {kLeftEar, kRightEar},
    {kLeftShoulder, kRightShoulder},
    {kLeftElbow, kRightElbow},
    {kLeftWrist, kRightWrist},
    {kLeftHip, kRightHip},
    {kLeftKnee, kRightKnee},
    {kLeftAnkle, kRightAnkle},
}};

struct Keypoint {
  double u = 0.0;
  double v = 0.0;
  double c = 0.0;  // confidence in [0, 1]; 0 means not visible
};

struct Pose2D {
  std::array<Keypoint, kNumJoints> joints{};

  bool visible(int i) const { return joints[static_cast<std::size_t>(i)].c > 0.0; }
  int visible_count() const;
};

// Network input: (x*, y*) per joint interleaved, then the 17 visibility
// mask entries. Coordinates of invisible joints are exactly 0.
inline constexpr int kInputDim = 2 * kNumJoints + kNumJoints;  // 51
using InputVector = std::array<double, kInputDim>;

// Back-projects every visible joint with K; throws std::invalid_argument
// when fewer than 3 joints are visible (pose unusable).
InputVector normalize_pose(const Pose2D& p, const CameraIntrinsics& k);

// u <- width - 1 - u on all joints, then left/right labels swapped.
Pose2D horizontal_flip(const Pose2D& p, double image_width);

// Axis-aligned box, inclusive corners.
struct Box {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

// Min/max over visible joints; nullopt when nothing is visible.
std::optional<Box> pose_box(const Pose2D& p);

double iou(const Box& a, const Box& b);

// Greedy matching in descending IoU; pairs below the threshold are never
// matched, each side is used at most once, ties break toward lower
// indices. Returns (detection index, ground-truth index) pairs.
std::vector<std::pair<std::size_t, std::size_t>> match_boxes(
    const std::vector<Box>& detections, const std::vector<Box>& ground_truths,
    double iou_threshold = 0.3);

std::vector<std::pair<std::size_t, std::size_t>> match_detections(
    const std::vector<Pose2D>& poses, const std::vector<Pose2D>& ground_truths,
    double iou_threshold = 0.3);

// Ground-truth annotation attached to a pose record.
struct GroundTruth {
  CartesianLocation xyz;        // mid-hip, camera frame
  double theta = 0.0;           // body yaw
  double height = 0.0;          // stature, m
  std::array<double, 3> dims{};  // (w, h, l), m
};

// One line of the JSONL dataset format.
struct Record {
  Pose2D pose;
  CameraIntrinsics intrinsics;
  std::optional<GroundTruth> gt;
  // Records sharing a frame id belong to the same scene; parse_poses
  // assigns each record its own frame when the field is absent.
  long frame = 0;
};

// JSONL loader. Errors carry "path:line:" context. Accepts records with
// or without "gt"/"frame" fields.
std::vector<Record> parse_poses(const std::string& path);

// Writes the same JSONL format, one record per line, deterministic bytes.
void write_records(const std::string& path, const std::vector<Record>& records);

// {"fx":..., "fy":..., "cx":..., "cy":...} helpers.
CameraIntrinsics load_intrinsics(const std::string& path);
void save_intrinsics(const std::string& path, const CameraIntrinsics& k);

}  // namespace prox3d
