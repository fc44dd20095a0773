#include "core/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace prox3d {

namespace {

void check_edges(const std::vector<double>& edges) {
  if (edges.size() < 2) {
    throw std::invalid_argument("ALE needs at least two bin edges");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw std::invalid_argument("ALE bin edges must be strictly increasing");
    }
  }
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string bin_label(double lo, double hi) {
  return format_number(lo) + "-" + format_number(hi);
}

const char* difficulty_name(std::size_t idx) {
  static const char* names[3] = {"easy", "moderate", "hard"};
  return names[idx];
}

}  // namespace

std::vector<AleBin> ale(const std::vector<MatchedDistance>& pairs,
                        const std::vector<double>& edges) {
  check_edges(edges);
  if (pairs.empty()) {
    throw std::invalid_argument("ALE requires at least one matched pair");
  }

  std::vector<AleBin> bins(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    bins[i].lo = edges[i];
    bins[i].hi = edges[i + 1];
  }
  for (const auto& pair : pairs) {
    for (auto& bin : bins) {
      if (pair.d_gt >= bin.lo && pair.d_gt < bin.hi) {
        bin.ale += std::abs(pair.d_pred - pair.d_gt);
        ++bin.count;
        break;
      }
    }
  }
  std::vector<AleBin> filled;
  for (auto& bin : bins) {
    if (bin.count == 0) continue;
    bin.ale /= bin.count;
    filled.push_back(bin);
  }
  return filled;
}

AlaResult ala(const std::vector<MatchedDistance>& pairs, int unmatched_gt,
              const std::vector<double>& thresholds) {
  if (unmatched_gt < 0) {
    throw std::invalid_argument("unmatched ground-truth count cannot be negative");
  }
  for (double t : thresholds) {
    if (!(t > 0.0)) throw std::invalid_argument("ALA thresholds must be positive");
  }
  const int total = static_cast<int>(pairs.size()) + unmatched_gt;
  if (total == 0) {
    throw std::invalid_argument("ALA requires at least one ground truth");
  }

  AlaResult result;
  result.thresholds = thresholds;
  for (double t : thresholds) {
    int correct = 0;
    for (const auto& pair : pairs) {
      if (std::abs(pair.d_pred - pair.d_gt) <= t) ++correct;
    }
    result.accuracy_pct.push_back(100.0 * correct / total);
  }
  result.recall_pct = 100.0 * static_cast<double>(pairs.size()) / total;
  return result;
}

double interval_recall(const std::vector<MatchedDistance>& pairs) {
  if (pairs.empty()) {
    throw std::invalid_argument("interval recall requires matched pairs");
  }
  int inside = 0;
  for (const auto& pair : pairs) {
    if (std::abs(pair.d_gt - pair.d_pred) <= pair.interval) ++inside;
  }
  return 100.0 * inside / static_cast<double>(pairs.size());
}

ClassificationResult classification_accuracy(const std::vector<bool>& predicted,
                                             const std::vector<bool>& labels) {
  if (predicted.size() != labels.size()) {
    throw std::invalid_argument(
        "prediction and label lists differ in length (" +
        std::to_string(predicted.size()) + " vs " + std::to_string(labels.size()) +
        ")");
  }
  if (labels.empty()) {
    throw std::invalid_argument("classification accuracy requires instances");
  }

  int correct = 0;
  int positives = 0;
  int hit_positives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predicted[i] == labels[i]) ++correct;
    if (labels[i]) {
      ++positives;
      if (predicted[i]) ++hit_positives;
    }
  }

  ClassificationResult result;
  result.accuracy_pct = 100.0 * correct / static_cast<double>(labels.size());
  result.recall_pct =
      positives == 0 ? 100.0 : 100.0 * hit_positives / static_cast<double>(positives);
  return result;
}

Difficulty difficulty_of(const Pose2D& pose, double image_width,
                         double image_height) {
  const std::optional<Box> box = pose_box(pose);
  if (!box) return Difficulty::kHard;

  Difficulty level = Difficulty::kHard;
  if (box->height() >= 40.0) {
    level = Difficulty::kEasy;
  } else if (box->height() >= 25.0) {
    level = Difficulty::kModerate;
  }

  bool truncated = false;
  for (int j = 0; j < kNumJoints; ++j) {
    const auto& kp = pose.joints[static_cast<std::size_t>(j)];
    if (kp.c <= 0.0 || kp.u < 0.0 || kp.u > image_width - 1.0 || kp.v < 0.0 ||
        kp.v > image_height - 1.0) {
      truncated = true;
      break;
    }
  }
  if (truncated && level != Difficulty::kHard) {
    level = static_cast<Difficulty>(static_cast<int>(level) + 1);
  }
  return level;
}

EvalReport evaluate(const std::vector<Prediction>& predictions,
                    const std::vector<Record>& gt_records,
                    const EvalConfig& config) {
  check_edges(config.ale_edges);

  std::map<long, std::vector<std::size_t>> preds_by_frame;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    preds_by_frame[predictions[i].frame].push_back(i);
  }
  std::map<long, std::vector<std::size_t>> gts_by_frame;
  for (std::size_t i = 0; i < gt_records.size(); ++i) {
    if (!gt_records[i].gt) {
      throw std::invalid_argument("ground-truth record " + std::to_string(i) +
                                  " has no gt annotation");
    }
    gts_by_frame[gt_records[i].frame].push_back(i);
  }

  std::vector<MatchedDistance> matched;
  std::vector<Difficulty> matched_difficulty;
  int unmatched_gt = 0;

  for (const auto& [frame, gt_idx] : gts_by_frame) {
    const auto preds_it = preds_by_frame.find(frame);
    if (preds_it == preds_by_frame.end()) {
      unmatched_gt += static_cast<int>(gt_idx.size());
      continue;
    }
    const auto& pred_idx = preds_it->second;

    // indices with a usable keypoint box, order preserved
    std::vector<std::size_t> det_ids;
    std::vector<Box> det_boxes;
    for (std::size_t i : pred_idx) {
      if (auto box = pose_box(predictions[i].pose)) {
        det_ids.push_back(i);
        det_boxes.push_back(*box);
      }
    }
    std::vector<std::size_t> gt_ids;
    std::vector<Box> gt_boxes;
    for (std::size_t i : gt_idx) {
      if (auto box = pose_box(gt_records[i].pose)) {
        gt_ids.push_back(i);
        gt_boxes.push_back(*box);
      } else {
        ++unmatched_gt;  // invisible ground truth can never be matched
      }
    }

    const auto assignment =
        match_boxes(det_boxes, gt_boxes, config.iou_threshold);
    for (const auto& [det, gt] : assignment) {
      const Prediction& pred = predictions[det_ids[det]];
      const Record& record = gt_records[gt_ids[gt]];
      MatchedDistance md;
      md.d_pred = pred.d;
      md.d_gt = record.gt->xyz.norm();
      md.interval = pred.interval;
      matched.push_back(md);
      matched_difficulty.push_back(
          difficulty_of(record.pose, config.image_width, config.image_height));
    }
    unmatched_gt += static_cast<int>(gt_ids.size() - assignment.size());
  }

  EvalReport report;
  report.matched = static_cast<int>(matched.size());
  report.ground_truths = report.matched + unmatched_gt;
  if (matched.empty()) {
    throw std::runtime_error("evaluation matched no predictions to ground truth");
  }

  report.ale_bins = ale(matched, config.ale_edges);
  report.ala = ala(matched, unmatched_gt, config.ala_thresholds);
  report.interval_recall_pct = interval_recall(matched);
  for (std::size_t i = 0; i < matched.size(); ++i) {
    auto& slice =
        report.by_difficulty[static_cast<std::size_t>(matched_difficulty[i])];
    slice.ale += std::abs(matched[i].d_pred - matched[i].d_gt);
    ++slice.count;
  }
  for (auto& slice : report.by_difficulty) {
    if (slice.count > 0) slice.ale /= slice.count;
  }
  report.pairs = std::move(matched);
  return report;
}

std::string report_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["ale"] = nlohmann::json::array();
  for (const auto& bin : report.ale_bins) {
    doc["ale"].push_back(nlohmann::json{{"bin", bin_label(bin.lo, bin.hi)},
                                        {"lo", bin.lo},
                                        {"ale_m", bin.ale},
                                        {"count", bin.count}});
  }
  for (std::size_t i = 0; i < report.by_difficulty.size(); ++i) {
    const auto& slice = report.by_difficulty[i];
    nlohmann::json entry{{"count", slice.count}};
    if (slice.count > 0) {
      entry["ale_m"] = slice.ale;
    } else {
      entry["ale_m"] = nullptr;
    }
    doc["ale_by_difficulty"][difficulty_name(i)] = entry;
  }
  doc["ala"] = {{"thresholds_m", report.ala.thresholds},
                {"accuracy_pct", report.ala.accuracy_pct}};
  doc["recall_pct"] = report.ala.recall_pct;
  doc["interval_recall_pct"] = report.interval_recall_pct;
  doc["matched"] = report.matched;
  doc["ground_truths"] = report.ground_truths;
  if (report.interaction) {
    doc["interaction"] = {{"accuracy_pct", report.interaction->accuracy_pct},
                          {"recall_pct", report.interaction->recall_pct}};
  }
  if (report.distancing) {
    doc["distancing"] = {{"accuracy_pct", report.distancing->accuracy_pct},
                         {"recall_pct", report.distancing->recall_pct}};
  }
  return doc.dump(2) + "\n";
}

std::string report_csv(const EvalReport& report) {
  std::string out = "metric,key,value,count\n";
  char buf[96];
  for (const auto& bin : report.ale_bins) {
    std::snprintf(buf, sizeof buf, "ale,%s,%.9g,%d\n",
                  bin_label(bin.lo, bin.hi).c_str(), bin.ale, bin.count);
    out += buf;
  }
  for (std::size_t i = 0; i < report.by_difficulty.size(); ++i) {
    const auto& slice = report.by_difficulty[i];
    if (slice.count > 0) {
      std::snprintf(buf, sizeof buf, "ale_difficulty,%s,%.9g,%d\n",
                    difficulty_name(i), slice.ale, slice.count);
    } else {
      std::snprintf(buf, sizeof buf, "ale_difficulty,%s,,0\n", difficulty_name(i));
    }
    out += buf;
  }
  for (std::size_t i = 0; i < report.ala.thresholds.size(); ++i) {
    std::snprintf(buf, sizeof buf, "ala,%s,%.9g,\n",
                  format_number(report.ala.thresholds[i]).c_str(),
                  report.ala.accuracy_pct[i]);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "recall,,%.9g,\n", report.ala.recall_pct);
  out += buf;
  std::snprintf(buf, sizeof buf, "interval_recall,,%.9g,\n",
                report.interval_recall_pct);
  out += buf;
  if (report.interaction) {
    std::snprintf(buf, sizeof buf, "interaction_accuracy,,%.9g,\n",
                  report.interaction->accuracy_pct);
    out += buf;
    std::snprintf(buf, sizeof buf, "interaction_recall,,%.9g,\n",
                  report.interaction->recall_pct);
    out += buf;
  }
  if (report.distancing) {
    std::snprintf(buf, sizeof buf, "distancing_accuracy,,%.9g,\n",
                  report.distancing->accuracy_pct);
    out += buf;
  }
  return out;
}

std::string curve_csv(const std::vector<MatchedDistance>& pairs,
                      const HeightDistribution& dist, double bin_width) {
  if (!(bin_width > 0.0)) {
    throw std::invalid_argument("curve bin width must be positive");
  }
  if (pairs.empty()) {
    throw std::invalid_argument("curve requires at least one matched pair");
  }
  double d_max = 0.0;
  for (const auto& pair : pairs) d_max = std::max(d_max, pair.d_gt);

  std::string out = "d,ale,task_error\n";
  char buf[96];
  for (double lo = 0.0; lo < d_max + bin_width; lo += bin_width) {
    double sum = 0.0;
    int count = 0;
    for (const auto& pair : pairs) {
      if (pair.d_gt >= lo && pair.d_gt < lo + bin_width) {
        sum += std::abs(pair.d_pred - pair.d_gt);
        ++count;
      }
    }
    if (count == 0) continue;
    const double center = lo + 0.5 * bin_width;
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", center, sum / count,
                  task_error(dist, center));
    out += buf;
  }
  return out;
}

}  // namespace prox3d
