#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "core/height_model.hpp"
#include "core/pose.hpp"

namespace prox3d {

// One prediction/ground-truth pair that survived IoU matching.
struct MatchedDistance {
  double d_pred = 0.0;
  double d_gt = 0.0;
  double interval = 0.0;  // confidence half-width, meters (b*d or sigma)
};

inline const std::vector<double> kAleEdges{
    0.0, 10.0, 20.0, 30.0, std::numeric_limits<double>::infinity()};
inline const std::vector<double> kAlaThresholds{0.5, 1.0, 2.0};

struct AleBin {
  double lo = 0.0;
  double hi = 0.0;
  double ale = 0.0;  // mean |d_pred - d_gt| over the bin, meters
  int count = 0;
};

// Bins matched pairs by ground-truth distance into [lo, hi) intervals.
// Empty bins are omitted rather than reported as zero.
std::vector<AleBin> ale(const std::vector<MatchedDistance>& pairs,
                        const std::vector<double>& edges = kAleEdges);

struct AlaResult {
  std::vector<double> thresholds;
  std::vector<double> accuracy_pct;  // correct / all ground truths
  double recall_pct = 0.0;           // matched / all ground truths
};

// Accuracy counts a miss (unmatched ground truth) as wrong at every
// threshold; ALE above ignores misses.
AlaResult ala(const std::vector<MatchedDistance>& pairs, int unmatched_gt,
              const std::vector<double>& thresholds = kAlaThresholds);

// Percentage of matched ground truths inside the predicted interval:
// |d_gt - d_pred| <= interval.
double interval_recall(const std::vector<MatchedDistance>& pairs);

struct ClassificationResult {
  double accuracy_pct = 0.0;
  double recall_pct = 0.0;  // positive class; 100 when no positives exist
};

ClassificationResult classification_accuracy(const std::vector<bool>& predicted,
                                             const std::vector<bool>& labels);

// KITTI-style difficulty from the keypoint box: height >= 40 px easy,
// >= 25 px moderate, else hard; truncation (any joint missing or outside
// the frame) demotes one level.
enum class Difficulty { kEasy = 0, kModerate = 1, kHard = 2 };

Difficulty difficulty_of(const Pose2D& pose, double image_width,
                         double image_height);

struct DifficultySlice {
  double ale = 0.0;  // meaningful only when count > 0
  int count = 0;
};

struct EvalConfig {
  double iou_threshold = 0.3;
  std::vector<double> ale_edges = kAleEdges;
  std::vector<double> ala_thresholds = kAlaThresholds;
  double image_width = 1242.0;  // frame bounds for the difficulty split
  double image_height = 375.0;
};

struct EvalReport {
  std::vector<AleBin> ale_bins;
  std::array<DifficultySlice, 3> by_difficulty{};  // easy, moderate, hard
  AlaResult ala;
  double interval_recall_pct = 0.0;
  int matched = 0;
  int ground_truths = 0;
  std::vector<MatchedDistance> pairs;  // the matched set behind the metrics
  std::optional<ClassificationResult> interaction;  // filled by social evals
  std::optional<ClassificationResult> distancing;
};

struct Prediction {
  Pose2D pose;  // echo of the matched input pose, used for box matching
  long frame = 0;
  double d = 0.0;
  double interval = 0.0;
};

// Matches predictions to ground-truth records frame by frame (greedy IoU)
// and aggregates every localization metric. Every gt record must carry a
// ground-truth annotation.
EvalReport evaluate(const std::vector<Prediction>& predictions,
                    const std::vector<Record>& gt_records,
                    const EvalConfig& config = EvalConfig{});

std::string report_json(const EvalReport& report);

// One row per bin/threshold: metric,key,value,count (count blank where it
// does not apply). Bin labels are of the form 0-10, 30-inf.
std::string report_csv(const EvalReport& report);

// Fig-4-style table "d,ale,task_error": ALE per bin of the given width
// against the task error at the bin center. Empty bins are skipped.
std::string curve_csv(const std::vector<MatchedDistance>& pairs,
                      const HeightDistribution& dist, double bin_width = 5.0);

}  // namespace prox3d
