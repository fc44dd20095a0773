#include "core/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace prox3d {
namespace {

struct CandidateSegment {
  const char* name;
  Joint top_left, top_right;
  Joint bottom_left, bottom_right;
};

// top/bottom pairs with distinct vertical anthropometric fractions; single
// joints (nose) repeat the same index on both sides
constexpr CandidateSegment kCandidates[] = {
    {"nose-shoulder", kNose, kNose, kLeftShoulder, kRightShoulder},
    {"shoulder-hip", kLeftShoulder, kRightShoulder, kLeftHip, kRightHip},
    {"hip-knee", kLeftHip, kRightHip, kLeftKnee, kRightKnee},
    {"knee-ankle", kLeftKnee, kRightKnee, kLeftAnkle, kRightAnkle},
    {"hip-ankle", kLeftHip, kRightHip, kLeftAnkle, kRightAnkle},
    {"shoulder-ankle", kLeftShoulder, kRightShoulder, kLeftAnkle, kRightAnkle},
};

constexpr int kMinCalibrationRecords = 30;

// mean pixel of the left/right joints, falling back to whichever is visible
std::optional<PixelPoint> pair_pixel(const Pose2D& pose, Joint left, Joint right) {
  const bool has_l = pose.visible(left);
  const bool has_r = pose.visible(right);
  const Keypoint& l = pose.joints[static_cast<std::size_t>(left)];
  const Keypoint& r = pose.joints[static_cast<std::size_t>(right)];
  if (has_l && has_r) return PixelPoint{0.5 * (l.u + r.u), 0.5 * (l.v + r.v)};
  if (has_l) return PixelPoint{l.u, l.v};
  if (has_r) return PixelPoint{r.u, r.v};
  return std::nullopt;
}

}  // namespace

BaselineCalibration calibrate_segments(const std::vector<Record>& records) {
  if (records.size() < kMinCalibrationRecords)
    throw std::invalid_argument("segment calibration needs at least 30 records");

  constexpr std::size_t n_candidates = std::size(kCandidates);
  std::vector<std::vector<double>> lengths(n_candidates);

  for (const Record& rec : records) {
    if (!rec.gt)
      throw std::invalid_argument("calibration records need ground truth");
    const double z = rec.gt->xyz.z;
    for (std::size_t c = 0; c < n_candidates; ++c) {
      const auto top = pair_pixel(rec.pose, kCandidates[c].top_left,
                                  kCandidates[c].top_right);
      const auto bottom = pair_pixel(rec.pose, kCandidates[c].bottom_left,
                                     kCandidates[c].bottom_right);
      if (!top || !bottom) continue;
      const NormalizedPoint t = back_project(*top, rec.intrinsics);
      const NormalizedPoint b = back_project(*bottom, rec.intrinsics);
      lengths[c].push_back((b.y - t.y) * z);
    }
  }

  BaselineCalibration out;
  double best_std = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t c = 0; c < n_candidates; ++c) {
    SegmentCalibration seg;
    seg.segment = kCandidates[c].name;
    seg.count = static_cast<int>(lengths[c].size());
    if (seg.count > 1) {
      const double n = seg.count;
      for (double v : lengths[c]) seg.mean_m += v;
      seg.mean_m /= n;
      double ss = 0.0;
      for (double v : lengths[c]) ss += (v - seg.mean_m) * (v - seg.mean_m);
      seg.std_m = std::sqrt(ss / (n - 1.0));
    }
    const bool usable = seg.count >= kMinCalibrationRecords && seg.mean_m > 0.0;
    if (usable && seg.std_m < best_std) {
      best_std = seg.std_m;
      out.selected = out.segments.size();
      any = true;
    }
    out.segments.push_back(std::move(seg));
  }
  if (!any)
    throw std::runtime_error("no candidate segment has enough joint coverage");
  return out;
}

CartesianLocation distance_from_segment(double v1, double v2, double u, double dy,
                                        const CameraIntrinsics& intrinsics) {
  if (v1 == v2)
    throw std::invalid_argument("degenerate segment: equal pixel rows");
  if (!(dy > 0.0))
    throw std::invalid_argument("segment length must be positive");
  const NormalizedPoint top = back_project({u, v1}, intrinsics);
  const NormalizedPoint bottom = back_project({u, v2}, intrinsics);
  // (y2* - y1*)^2 z^2 = dy^2 has two specular roots; keep the one in view
  const double z = std::abs(dy / (bottom.y - top.y));
  if (!(z > 0.0) || !std::isfinite(z))
    throw std::domain_error("both specular roots lie behind the camera");
  return {top.x * z, 0.5 * (top.y + bottom.y) * z, z};
}

std::optional<CartesianLocation> baseline_locate(const Pose2D& pose,
                                                 const CameraIntrinsics& intrinsics,
                                                 const SegmentCalibration& segment) {
  const CandidateSegment* def = nullptr;
  for (const CandidateSegment& c : kCandidates) {
    if (segment.segment == c.name) {
      def = &c;
      break;
    }
  }
  if (!def)
    throw std::invalid_argument("unknown segment id: " + segment.segment);

  const auto top = pair_pixel(pose, def->top_left, def->top_right);
  const auto bottom = pair_pixel(pose, def->bottom_left, def->bottom_right);
  if (!top || !bottom || top->v == bottom->v) return std::nullopt;

  const double u = 0.5 * (top->u + bottom->u);
  CartesianLocation loc = distance_from_segment(top->v, bottom->v, u,
                                                segment.mean_m, intrinsics);
  // anchor at the hip midpoint when available, matching the network's target
  if (const auto hip = pair_pixel(pose, kLeftHip, kRightHip)) {
    const NormalizedPoint h = back_project(*hip, intrinsics);
    loc.x = h.x * loc.z;
    loc.y = h.y * loc.z;
  }
  return loc;
}

void save_calibration(const BaselineCalibration& calibration,
                      const std::string& path) {
  nlohmann::json doc;
  doc["format"] = "prox3d-calibration";
  doc["version"] = 1;
  doc["selected"] = calibration.chosen().segment;
  auto& segments = doc["segments"] = nlohmann::json::array();
  for (const SegmentCalibration& seg : calibration.segments) {
    segments.push_back({{"segment", seg.segment},
                        {"mean_m", seg.mean_m},
                        {"std_m", seg.std_m},
                        {"count", seg.count}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write calibration file: " + path);
  out << doc.dump(2) << "\n";
}

BaselineCalibration load_calibration(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open calibration file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
    if (doc.value("format", std::string{}) != "prox3d-calibration")
      throw std::runtime_error("not a prox3d calibration file: " + path);
    BaselineCalibration out;
    const std::string selected = doc.at("selected").get<std::string>();
    for (const auto& node : doc.at("segments")) {
      SegmentCalibration seg;
      seg.segment = node.at("segment").get<std::string>();
      seg.mean_m = node.at("mean_m").get<double>();
      seg.std_m = node.at("std_m").get<double>();
      seg.count = node.at("count").get<int>();
      if (seg.segment == selected) out.selected = out.segments.size();
      out.segments.push_back(std::move(seg));
    }
    if (out.segments.empty() ||
        out.segments[out.selected].segment != selected)
      throw std::runtime_error("corrupt calibration file: selected segment missing");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt calibration file: " + std::string(e.what()));
  }
}

}  // namespace prox3d
