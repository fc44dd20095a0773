#include "core/pose.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "core/pose_json.hpp"

namespace prox3d {

using nlohmann::json;

const std::array<const char*, kNumJoints> kJointNames = {
    "nose",        "left_eye",    "right_eye",  "left_ear",    "right_ear",
    "left_shoulder", "right_shoulder", "left_elbow", "right_elbow",
    "left_wrist",  "right_wrist", "left_hip",   "right_hip",   "left_knee",
    "right_knee",  "left_ankle",  "right_ankle"};

int Pose2D::visible_count() const {
  int n = 0;
  for (const auto& j : joints) n += j.c > 0.0 ? 1 : 0;
  return n;
}

InputVector normalize_pose(const Pose2D& p, const CameraIntrinsics& k) {
  if (p.visible_count() < 3)
    throw std::invalid_argument("pose has fewer than 3 visible joints");
  InputVector v{};
  for (int i = 0; i < kNumJoints; ++i) {
    if (!p.visible(i)) continue;
    const auto& kp = p.joints[static_cast<std::size_t>(i)];
    const NormalizedPoint n = back_project({kp.u, kp.v}, k);
    v[static_cast<std::size_t>(2 * i)] = n.x;
    v[static_cast<std::size_t>(2 * i + 1)] = n.y;
    v[static_cast<std::size_t>(2 * kNumJoints + i)] = 1.0;
  }
  return v;
}

Pose2D horizontal_flip(const Pose2D& p, double image_width) {
  if (!(image_width > 0.0))
    throw std::invalid_argument("image width must be positive");
  Pose2D out = p;
  for (auto& j : out.joints) j.u = image_width - 1.0 - j.u;
  for (const auto& [l, r] : kLeftRightPairs) {
    std::swap(out.joints[static_cast<std::size_t>(l)],
              out.joints[static_cast<std::size_t>(r)]);
  }
  return out;
}

std::optional<Box> pose_box(const Pose2D& p) {
  std::optional<Box> box;
  for (int i = 0; i < kNumJoints; ++i) {
    if (!p.visible(i)) continue;
    const auto& j = p.joints[static_cast<std::size_t>(i)];
    if (!box) {
      box = Box{j.u, j.v, j.u, j.v};
    } else {
      box->x0 = std::min(box->x0, j.u);
      box->y0 = std::min(box->y0, j.v);
      box->x1 = std::max(box->x1, j.u);
      box->y1 = std::max(box->y1, j.v);
    }
  }
  return box;
}

double iou(const Box& a, const Box& b) {
  const double ix = std::max(0.0, std::min(a.x1, b.x1) - std::max(a.x0, b.x0));
  const double iy = std::max(0.0, std::min(a.y1, b.y1) - std::max(a.y0, b.y0));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) {
    // two degenerate (zero-area) boxes; call them equal only if identical
    return a.x0 == b.x0 && a.y0 == b.y0 && a.x1 == b.x1 && a.y1 == b.y1 ? 1.0 : 0.0;
  }
  return inter / uni;
}

std::vector<std::pair<std::size_t, std::size_t>> match_boxes(
    const std::vector<Box>& detections, const std::vector<Box>& ground_truths,
    double iou_threshold) {
  if (!(iou_threshold > 0.0) || iou_threshold > 1.0)
    throw std::invalid_argument("iou threshold must be in (0, 1]");
  struct Candidate {
    double iou;
    std::size_t det, gt;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    for (std::size_t j = 0; j < ground_truths.size(); ++j) {
      const double v = iou(detections[i], ground_truths[j]);
      if (v >= iou_threshold) candidates.push_back({v, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.det != b.det) return a.det < b.det;
    return a.gt < b.gt;
  });
  std::vector<bool> det_used(detections.size()), gt_used(ground_truths.size());
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  for (const auto& c : candidates) {
    if (det_used[c.det] || gt_used[c.gt]) continue;
    det_used[c.det] = gt_used[c.gt] = true;
    matches.emplace_back(c.det, c.gt);
  }
  return matches;
}

std::vector<std::pair<std::size_t, std::size_t>> match_detections(
    const std::vector<Pose2D>& poses, const std::vector<Pose2D>& ground_truths,
    double iou_threshold) {
  const auto boxes_of = [](const std::vector<Pose2D>& ps) {
    std::vector<Box> boxes;
    boxes.reserve(ps.size());
    for (const auto& p : ps) {
      const auto b = pose_box(p);
      // an all-invisible pose gets an unmatched sentinel box
      boxes.push_back(b.value_or(Box{-1.0, -1.0, -1.0, -1.0}));
    }
    return boxes;
  };
  return match_boxes(boxes_of(poses), boxes_of(ground_truths), iou_threshold);
}

namespace detail {

[[noreturn]] void fail_line(const std::string& path, std::size_t line,
                            const std::string& msg) {
  std::ostringstream os;
  os << path << ":" << line << ": " << msg;
  throw std::runtime_error(os.str());
}

double require_number(const json& j, const char* key, const std::string& path,
                      std::size_t line) {
  if (!j.contains(key) || !j[key].is_number())
    fail_line(path, line, std::string("missing numeric field \"") + key + "\"");
  return j[key].get<double>();
}

CameraIntrinsics intrinsics_from_json(const json& j, const std::string& path,
                                      std::size_t line) {
  if (!j.is_object()) fail_line(path, line, "\"K\" must be an object");
  try {
    return CameraIntrinsics(require_number(j, "fx", path, line),
                            require_number(j, "fy", path, line),
                            require_number(j, "cx", path, line),
                            require_number(j, "cy", path, line));
  } catch (const std::invalid_argument& e) {
    fail_line(path, line, e.what());
  }
}

Pose2D pose_from_json(const json& j, const std::string& path, std::size_t line) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(kNumJoints)) {
    std::ostringstream os;
    os << "pose must have " << kNumJoints << " joints, got "
       << (j.is_array() ? std::to_string(j.size()) : "non-array");
    fail_line(path, line, os.str());
  }
  Pose2D p;
  for (std::size_t i = 0; i < static_cast<std::size_t>(kNumJoints); ++i) {
    const json& kp = j[i];
    if (!kp.is_array() || kp.size() != 3 || !kp[0].is_number() ||
        !kp[1].is_number() || !kp[2].is_number())
      fail_line(path, line, "joint " + std::to_string(i) + " must be [u, v, c]");
    Keypoint& out = p.joints[i];
    out.u = kp[0].get<double>();
    out.v = kp[1].get<double>();
    out.c = kp[2].get<double>();
    if (!std::isfinite(out.u) || !std::isfinite(out.v))
      fail_line(path, line, "joint " + std::to_string(i) + " has non-finite coords");
    if (!(out.c >= 0.0 && out.c <= 1.0))
      fail_line(path, line,
                "joint " + std::to_string(i) + " confidence outside [0, 1]");
  }
  return p;
}

GroundTruth gt_from_json(const json& j, const std::string& path, std::size_t line) {
  if (!j.is_object()) fail_line(path, line, "\"gt\" must be an object");
  if (!j.contains("xyz") || !j["xyz"].is_array() || j["xyz"].size() != 3)
    fail_line(path, line, "gt.xyz must be [x, y, z]");
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 3)
    fail_line(path, line, "gt.dims must be [w, h, l]");
  GroundTruth gt;
  gt.xyz = {j["xyz"][0].get<double>(), j["xyz"][1].get<double>(),
            j["xyz"][2].get<double>()};
  gt.theta = require_number(j, "theta", path, line);
  gt.height = require_number(j, "height", path, line);
  for (std::size_t i = 0; i < 3; ++i) gt.dims[i] = j["dims"][i].get<double>();
  if (!(gt.xyz.z > 0.0)) fail_line(path, line, "gt.xyz must have z > 0");
  if (!(gt.height > 0.0)) fail_line(path, line, "gt.height must be positive");
  return gt;
}

json pose_to_json(const Pose2D& p) {
  json pose = json::array();
  for (const auto& kp : p.joints) pose.push_back({kp.u, kp.v, kp.c});
  return pose;
}

}  // namespace detail

namespace {

json record_to_json(const Record& r) {
  json out = {
      {"pose", detail::pose_to_json(r.pose)},
      {"K",
       {{"fx", r.intrinsics.fx},
        {"fy", r.intrinsics.fy},
        {"cx", r.intrinsics.cx},
        {"cy", r.intrinsics.cy}}},
      {"frame", r.frame},
  };
  if (r.gt) {
    out["gt"] = {{"xyz", {r.gt->xyz.x, r.gt->xyz.y, r.gt->xyz.z}},
                 {"theta", r.gt->theta},
                 {"height", r.gt->height},
                 {"dims", {r.gt->dims[0], r.gt->dims[1], r.gt->dims[2]}}};
  }
  return out;
}

}  // namespace

std::vector<Record> parse_poses(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Record> records;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.empty()) continue;
    json j = json::parse(raw, nullptr, false);
    if (j.is_discarded()) detail::fail_line(path, line_no, "invalid JSON");
    if (!j.is_object())
      detail::fail_line(path, line_no, "record must be a JSON object");
    if (!j.contains("pose"))
      detail::fail_line(path, line_no, "missing \"pose\" field");
    if (!j.contains("K")) detail::fail_line(path, line_no, "missing \"K\" field");
    Record r;
    r.pose = detail::pose_from_json(j["pose"], path, line_no);
    r.intrinsics = detail::intrinsics_from_json(j["K"], path, line_no);
    if (j.contains("gt")) r.gt = detail::gt_from_json(j["gt"], path, line_no);
    if (j.contains("frame")) {
      if (!j["frame"].is_number_integer())
        detail::fail_line(path, line_no, "\"frame\" must be an integer");
      r.frame = j["frame"].get<long>();
    } else {
      r.frame = static_cast<long>(records.size());
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_records(const std::string& path, const std::vector<Record>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& r : records) out << record_to_json(r).dump() << "\n";
  if (!out) throw std::runtime_error("write failed for " + path);
}

CameraIntrinsics load_intrinsics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw std::runtime_error(path + ": not a JSON object");
  return detail::intrinsics_from_json(j, path, 1);
}

void save_intrinsics(const std::string& path, const CameraIntrinsics& k) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const json j = {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}};
  out << j.dump() << "\n";
}

}  // namespace prox3d
