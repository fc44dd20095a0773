#include "core/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "core/rng.hpp"
#include "core/synthetic.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace prox3d;

namespace {

MatchedDistance md(double d_gt, double d_pred, double interval = 0.0) {
  MatchedDistance m;
  m.d_gt = d_gt;
  m.d_pred = d_pred;
  m.interval = interval;
  return m;
}

// A synthetic pose whose keypoint box spans the given v-range, all joints
// visible and inside a 1242x375 frame unless stated otherwise.
Pose2D box_pose(double v_top, double v_bottom, double u0 = 300.0) {
  Pose2D pose;
  for (int j = 0; j < kNumJoints; ++j) {
    auto& kp = pose.joints[static_cast<std::size_t>(j)];
    kp.u = u0 + 2.0 * j;
    kp.v = v_top + (v_bottom - v_top) * j / (kNumJoints - 1);
    kp.c = 1.0;
  }
  return pose;
}

}  // namespace

TEST_CASE("ale bins matched pairs by ground-truth distance") {
  SUBCASE("single pair lands in the first bin") {
    const auto bins = ale({md(5.0, 5.3)});
    REQUIRE(bins.size() == 1);
    CHECK(bins[0].lo == 0.0);
    CHECK(bins[0].hi == 10.0);
    CHECK(bins[0].ale == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(bins[0].count == 1);
  }

  SUBCASE("perfect predictions give zero everywhere") {
    const auto bins = ale({md(5, 5), md(15, 15), md(25, 25), md(35, 35)});
    REQUIRE(bins.size() == 4);
    for (const auto& bin : bins) {
      CHECK(bin.ale == 0.0);
      CHECK(bin.count == 1);
    }
    CHECK(std::isinf(bins[3].hi));
  }

  SUBCASE("mean within a bin") {
    const auto bins = ale({md(4.0, 4.2), md(6.0, 6.4)});
    REQUIRE(bins.size() == 1);
    CHECK(bins[0].ale == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(bins[0].count == 2);
  }

  SUBCASE("counts sum to the matched total and empty bins are absent") {
    const std::vector<MatchedDistance> pairs{md(1, 1.5), md(2, 2.5), md(35, 36),
                                             md(39, 38)};
    const auto bins = ale(pairs);
    REQUIRE(bins.size() == 2);  // [0,10) and [30,inf) only
    CHECK(bins[0].count + bins[1].count == static_cast<int>(pairs.size()));
    CHECK(bins[1].lo == 30.0);
  }

  SUBCASE("permutation invariance") {
    std::vector<MatchedDistance> pairs;
    Rng rng(601);
    for (int i = 0; i < 50; ++i) {
      const double d = rng.uniform(1.0, 39.0);
      pairs.push_back(md(d, d + rng.uniform(-1.0, 1.0)));
    }
    auto shuffled = pairs;
    rng.shuffle(shuffled.begin(), shuffled.end());
    const auto a = ale(pairs);
    const auto b = ale(shuffled);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].count == b[i].count);
      CHECK(a[i].ale == doctest::Approx(b[i].ale).epsilon(1e-13));
    }
  }

  SUBCASE("scaling every error by two doubles every bin") {
    std::vector<MatchedDistance> base;
    std::vector<MatchedDistance> scaled;
    Rng rng(602);
    for (int i = 0; i < 30; ++i) {
      const double d = rng.uniform(1.0, 39.0);
      const double e = rng.uniform(-0.8, 0.8);
      base.push_back(md(d, d + e));
      scaled.push_back(md(d, d + 2.0 * e));
    }
    const auto a = ale(base);
    const auto b = ale(scaled);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      // d + e re-rounds, so the halving is semantic rather than bitwise
      CHECK(b[i].ale == doctest::Approx(2.0 * a[i].ale).epsilon(1e-12));
    }
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(ale({}), std::invalid_argument);
    CHECK_THROWS_AS(ale({md(5, 5)}, {10.0}), std::invalid_argument);
    CHECK_THROWS_AS(ale({md(5, 5)}, {10.0, 5.0}), std::invalid_argument);
  }
}

TEST_CASE("ala counts misses against accuracy but not recall of matches") {
  SUBCASE("hand counting at the default thresholds") {
    const std::vector<MatchedDistance> pairs{md(5, 5.3), md(10, 10.7),
                                             md(20, 21.5)};
    const AlaResult result = ala(pairs, 0);
    REQUIRE(result.accuracy_pct.size() == 3);
    CHECK(result.accuracy_pct[0] == doctest::Approx(100.0 / 3));  // err <= 0.5
    CHECK(result.accuracy_pct[1] == doctest::Approx(200.0 / 3));  // err <= 1
    CHECK(result.accuracy_pct[2] == doctest::Approx(100.0));      // err <= 2
    CHECK(result.recall_pct == 100.0);
  }

  SUBCASE("a missed ground truth is wrong at every threshold") {
    const AlaResult result = ala({md(8, 8.1)}, 1);
    for (const double acc : result.accuracy_pct) CHECK(acc == 50.0);
    CHECK(result.recall_pct == 50.0);
  }

  SUBCASE("all matched, all within the tightest threshold") {
    const AlaResult result = ala({md(5, 5.2), md(15, 14.9)}, 0);
    for (const double acc : result.accuracy_pct) CHECK(acc == 100.0);
  }

  SUBCASE("accuracy is monotone in the threshold") {
    std::vector<MatchedDistance> pairs;
    Rng rng(603);
    for (int i = 0; i < 200; ++i) {
      const double d = rng.uniform(2.0, 38.0);
      pairs.push_back(md(d, d + rng.laplace(0.0, 0.8)));
    }
    const AlaResult result = ala(pairs, 7, {0.25, 0.5, 1.0, 2.0, 4.0});
    for (std::size_t i = 1; i < result.accuracy_pct.size(); ++i) {
      CHECK(result.accuracy_pct[i] >= result.accuracy_pct[i - 1]);
    }
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(ala({md(5, 5)}, 0, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(ala({md(5, 5)}, -1), std::invalid_argument);
    CHECK_THROWS_AS(ala({}, 0), std::invalid_argument);
  }
}

TEST_CASE("interval recall") {
  SUBCASE("degenerate intervals") {
    CHECK(interval_recall({md(5, 6, 1e9), md(20, 10, 1e9)}) == 100.0);
    CHECK(interval_recall({md(5, 6, 0.0), md(20, 19.5, 0.0)}) == 0.0);
    CHECK(interval_recall({md(5, 5.5, 0.5)}) == 100.0);  // ties count inside
  }

  SUBCASE("Laplace-calibrated intervals cover 63.2%") {
    Rng rng(604);
    std::vector<MatchedDistance> pairs;
    for (int i = 0; i < 5000; ++i) {
      const double d = rng.uniform(5.0, 30.0);
      const double b = rng.uniform(0.2, 2.0);
      pairs.push_back(md(d, d + rng.laplace(0.0, b), b));
    }
    const double recall = interval_recall(pairs);
    const double expected = 100.0 * (1.0 - std::exp(-1.0));
    CHECK(recall > expected - 5.0);
    CHECK(recall < expected + 5.0);
  }

  SUBCASE("pointwise enlargement never lowers recall") {
    Rng rng(605);
    std::vector<MatchedDistance> pairs;
    for (int i = 0; i < 300; ++i) {
      pairs.push_back(md(10.0, 10.0 + rng.laplace(0.0, 0.5), rng.uniform(0, 1)));
    }
    const double before = interval_recall(pairs);
    for (auto& pair : pairs) pair.interval += 0.3;
    CHECK(interval_recall(pairs) >= before);
  }
}

TEST_CASE("classification accuracy and recall") {
  SUBCASE("identical vectors") {
    const auto result = classification_accuracy({true, false, true},
                                                {true, false, true});
    CHECK(result.accuracy_pct == 100.0);
    CHECK(result.recall_pct == 100.0);
  }

  SUBCASE("all-false predictions against half-true labels") {
    const auto result = classification_accuracy({false, false, false, false},
                                                {true, true, false, false});
    CHECK(result.accuracy_pct == 50.0);
    CHECK(result.recall_pct == 0.0);
  }

  SUBCASE("one disagreement in four") {
    const auto result = classification_accuracy({true, true, false, false},
                                                {true, true, true, false});
    CHECK(result.accuracy_pct == 75.0);
    CHECK(result.recall_pct == doctest::Approx(200.0 / 3));
  }

  SUBCASE("no positive labels leaves recall vacuously full") {
    const auto result = classification_accuracy({false, true}, {false, false});
    CHECK(result.accuracy_pct == 50.0);
    CHECK(result.recall_pct == 100.0);
  }

  SUBCASE("length mismatch") {
    CHECK_THROWS_WITH_AS(classification_accuracy({true}, {true, false}),
                         doctest::Contains("differ in length"),
                         std::invalid_argument);
    CHECK_THROWS_AS(classification_accuracy({}, {}), std::invalid_argument);
  }
}

TEST_CASE("difficulty splits by box height and truncation") {
  SUBCASE("height thresholds") {
    CHECK(difficulty_of(box_pose(100, 150), 1242, 375) == Difficulty::kEasy);
    CHECK(difficulty_of(box_pose(100, 130), 1242, 375) == Difficulty::kModerate);
    CHECK(difficulty_of(box_pose(100, 120), 1242, 375) == Difficulty::kHard);
    CHECK(difficulty_of(box_pose(100, 140), 1242, 375) == Difficulty::kEasy);
  }

  SUBCASE("a missing joint demotes one level") {
    Pose2D easy = box_pose(100, 150);
    easy.joints[3].c = 0.0;
    CHECK(difficulty_of(easy, 1242, 375) == Difficulty::kModerate);

    Pose2D moderate = box_pose(100, 130);
    moderate.joints[3].c = 0.0;
    CHECK(difficulty_of(moderate, 1242, 375) == Difficulty::kHard);

    Pose2D hard = box_pose(100, 120);
    hard.joints[3].c = 0.0;
    CHECK(difficulty_of(hard, 1242, 375) == Difficulty::kHard);
  }

  SUBCASE("a joint outside the frame demotes one level") {
    Pose2D pose = box_pose(100, 150);
    pose.joints[0].u = -3.0;
    CHECK(difficulty_of(pose, 1242, 375) == Difficulty::kModerate);

    Pose2D below = box_pose(340, 395);  // ankle row past the last pixel row
    CHECK(difficulty_of(below, 1242, 375) == Difficulty::kModerate);
  }

  SUBCASE("no visible joints is hard") {
    Pose2D blank;
    CHECK(difficulty_of(blank, 1242, 375) == Difficulty::kHard);
  }
}

TEST_CASE("evaluate matches per frame and aggregates") {
  // build a two-frame ground-truth set from the synthetic generator
  GeneratorConfig config;
  config.people_per_frame = 4;
  config.z_min = 4.0;
  config.z_max = 30.0;
  config.x_frac = 0.5;
  std::vector<Record> gts = generate_records(8, config, 606);
  REQUIRE(gts.size() == 8);

  SUBCASE("self-evaluation is perfect") {
    std::vector<Prediction> preds;
    for (const Record& rec : gts) {
      Prediction p;
      p.pose = rec.pose;
      p.frame = rec.frame;
      p.d = rec.gt->xyz.norm();
      p.interval = 0.5;
      preds.push_back(p);
    }
    const EvalReport report = evaluate(preds, gts);
    CHECK(report.matched == 8);
    CHECK(report.ground_truths == 8);
    CHECK(report.ala.recall_pct == 100.0);
    for (const auto& bin : report.ale_bins) CHECK(bin.ale == 0.0);
    for (const double acc : report.ala.accuracy_pct) CHECK(acc == 100.0);
    CHECK(report.interval_recall_pct == 100.0);

    int bin_total = 0;
    for (const auto& bin : report.ale_bins) bin_total += bin.count;
    CHECK(bin_total == report.matched);
    int diff_total = 0;
    for (const auto& slice : report.by_difficulty) diff_total += slice.count;
    CHECK(diff_total == report.matched);
  }

  SUBCASE("a known error shows up in the right bin") {
    std::vector<Prediction> preds;
    for (const Record& rec : gts) {
      Prediction p;
      p.pose = rec.pose;
      p.frame = rec.frame;
      p.d = rec.gt->xyz.norm() + 0.4;
      p.interval = 0.39;  // just misses every interval
      preds.push_back(p);
    }
    const EvalReport report = evaluate(preds, gts);
    for (const auto& bin : report.ale_bins) {
      CHECK(bin.ale == doctest::Approx(0.4).epsilon(1e-9));
    }
    CHECK(report.interval_recall_pct == 0.0);
  }

  SUBCASE("dropping a frame costs recall but not ALE") {
    std::vector<Prediction> preds;
    const long first_frame = gts.front().frame;
    int kept = 0;
    for (const Record& rec : gts) {
      if (rec.frame == first_frame) continue;
      Prediction p;
      p.pose = rec.pose;
      p.frame = rec.frame;
      p.d = rec.gt->xyz.norm();
      preds.push_back(p);
      ++kept;
    }
    REQUIRE(kept == 4);
    const EvalReport report = evaluate(preds, gts);
    CHECK(report.matched == 4);
    CHECK(report.ground_truths == 8);
    CHECK(report.ala.recall_pct == 50.0);
    for (const auto& bin : report.ale_bins) CHECK(bin.ale == 0.0);
    for (const double acc : report.ala.accuracy_pct) CHECK(acc == 50.0);
  }

  SUBCASE("records without gt are rejected") {
    std::vector<Record> broken = gts;
    broken[2].gt.reset();
    CHECK_THROWS_WITH_AS(evaluate({}, broken), doctest::Contains("record 2"),
                         std::invalid_argument);
  }

  SUBCASE("zero matches is an error, not an empty report") {
    CHECK_THROWS_AS(evaluate({}, gts), std::runtime_error);
  }
}

TEST_CASE("report serialization") {
  GeneratorConfig config;
  config.people_per_frame = 2;
  config.z_min = 4.0;
  config.z_max = 25.0;
  std::vector<Record> gts = generate_records(6, config, 607);
  std::vector<Prediction> preds;
  for (const Record& rec : gts) {
    Prediction p;
    p.pose = rec.pose;
    p.frame = rec.frame;
    p.d = rec.gt->xyz.norm() + 0.25;
    p.interval = 0.3;
    preds.push_back(p);
  }
  EvalReport report = evaluate(preds, gts);
  report.interaction = classification_accuracy({true, false}, {true, true});
  report.distancing = classification_accuracy({false, false}, {false, true});

  SUBCASE("json carries every field and parses back") {
    const std::string text = report_json(report);
    CHECK(text == report_json(report));
    const nlohmann::json doc = nlohmann::json::parse(text);
    CHECK(doc.at("matched") == report.matched);
    CHECK(doc.at("ground_truths") == 6);
    CHECK(doc.at("recall_pct") == 100.0);
    CHECK(doc.at("ale").size() == report.ale_bins.size());
    CHECK(doc.at("ale")[0].at("bin") == "0-10");
    CHECK(doc.at("ala").at("thresholds_m").size() == 3);
    CHECK(doc.at("interval_recall_pct") == 100.0);
    CHECK(doc.at("interaction").at("accuracy_pct") == 50.0);
    CHECK(doc.at("distancing").at("accuracy_pct") == 50.0);
    CHECK(doc.at("ale_by_difficulty").contains("easy"));
    CHECK(doc.at("ale_by_difficulty").contains("moderate"));
    CHECK(doc.at("ale_by_difficulty").contains("hard"));
  }

  SUBCASE("csv has one row per bin and threshold") {
    const std::string text = report_csv(report);
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "metric,key,value,count");
    int ale_rows = 0;
    int ala_rows = 0;
    int difficulty_rows = 0;
    while (std::getline(lines, line)) {
      if (line.rfind("ale,", 0) == 0) ++ale_rows;
      if (line.rfind("ala,", 0) == 0) ++ala_rows;
      if (line.rfind("ale_difficulty,", 0) == 0) ++difficulty_rows;
    }
    CHECK(ale_rows == static_cast<int>(report.ale_bins.size()));
    CHECK(ala_rows == 3);
    CHECK(difficulty_rows == 3);
    CHECK(text.find("interaction_accuracy,,50,") != std::string::npos);
  }
}

TEST_CASE("curve table pairs binned ALE with the task error") {
  const HeightDistribution adults = HeightDistribution::preset("adults");
  std::vector<MatchedDistance> pairs;
  Rng rng(608);
  for (int i = 0; i < 400; ++i) {
    const double d = rng.uniform(2.0, 38.0);
    pairs.push_back(md(d, d + task_error(adults, d) * rng.laplace(0.0, 1.0)));
  }

  const std::string text = curve_csv(pairs, adults, 5.0);
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  REQUIRE(line == "d,ale,task_error");

  double prev_d = -1.0;
  int rows = 0;
  while (std::getline(lines, line)) {
    double d = 0.0, ale_v = 0.0, te = 0.0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &d, &ale_v, &te) == 3);
    CHECK(d > prev_d);
    prev_d = d;
    CHECK(te == doctest::Approx(task_error(adults, d)).epsilon(1e-7));  // 9 sig digits in the CSV
    CHECK(ale_v >= 0.0);
    ++rows;
  }
  CHECK(rows == 8);  // 2..38 m covers every 5 m bin

  CHECK_THROWS_AS(curve_csv({}, adults), std::invalid_argument);
  CHECK_THROWS_AS(curve_csv(pairs, adults, 0.0), std::invalid_argument);
}
