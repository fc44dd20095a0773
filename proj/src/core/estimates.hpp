#pragma once

#include <string>
#include <vector>

#include "core/network.hpp"
#include "core/pose.hpp"

namespace prox3d {

// One localized person: the input pose echoed back (so downstream matching
// can reuse the keypoint box) plus the decoded estimate.
struct PredictionRecord {
  Pose2D pose;
  long frame = 0;
  LocalizationEstimate estimate;
};

// JSON lines, one object per person:
//   {"estimate": {"d": m, "b": relative spread (absent for L1 models),
//                 "sigma": m (absent without MC passes), "beta": rad,
//                 "psi": rad, "theta": rad, "xyz": [x, y, z],
//                 "dims": [w, h, l]},
//    "frame": id, "pose": [[u, v, c] x 17]}
// "xyz" is redundant with (d, beta, psi) and recomputed on load.
void write_predictions(const std::string& path,
                       const std::vector<PredictionRecord>& predictions);

// Inverse of write_predictions; malformed lines are reported as
// "path:line: reason". Missing "frame" falls back to the line order.
std::vector<PredictionRecord> parse_predictions(const std::string& path);

}  // namespace prox3d
