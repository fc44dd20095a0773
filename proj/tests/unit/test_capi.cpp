#include "prox3d/prox3d.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/estimates.hpp"
#include "core/geometry.hpp"
#include "core/height_model.hpp"
#include "core/pose.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/prox3d_capi_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { px3d_string_free(s); }
};

struct OwnedModel {
  px3d_model* m = nullptr;
  ~OwnedModel() { px3d_model_free(m); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

#define REQUIRE_OK(call) \
  REQUIRE_MESSAGE((call) == PX3D_OK, px3d_last_error_message())

// A small trained model shared by the inference tests; built once.
struct TinyModel {
  TempFile dataset{"tiny_train.jsonl"};
  TempFile weights{"tiny_weights.json"};
  TempFile history{"tiny_history.csv"};
  TempFile calibration{"tiny_calibration.json"};

  TinyModel() {
    const char* sim =
        R"({"n": 40, "seed": 11, "z_min": 3, "z_max": 30, "x_frac": 0.3})";
    REQUIRE_OK(px3d_simulate(sim, dataset.path.c_str()));
    const char* train =
        R"({"epochs": 2, "batch_size": 16, "hidden_width": 16,
            "hidden_layers": 2, "seed": 1})";
    REQUIRE_OK(px3d_train(dataset.path.c_str(), train, weights.path.c_str(),
                          history.path.c_str(), calibration.path.c_str()));
  }
};

TinyModel& tiny_model() {
  static TinyModel model;
  return model;
}

}  // namespace

TEST_CASE("version and error-state basics") {
  CHECK(std::string(px3d_version()) == "0.1.0");
  px3d_string_free(nullptr);  // must be a no-op

  double e = 0.0;
  REQUIRE_OK(px3d_task_error("adults", 10.0, &e));
  CHECK(std::string(px3d_last_error_message()).empty());

  CHECK(px3d_task_error("martians", 10.0, &e) == PX3D_ERROR_INVALID_ARGUMENT);
  const std::string msg = px3d_last_error_message();
  CHECK(msg.find("martians") != std::string::npos);

  // a successful call clears the sticky message
  REQUIRE_OK(px3d_task_error("adults", 1.0, &e));
  CHECK(std::string(px3d_last_error_message()).empty());
}

TEST_CASE("task error matches the library computation") {
  double e20 = 0.0;
  REQUIRE_OK(px3d_task_error("adults", 20.0, &e20));
  const auto adults = prox3d::HeightDistribution::preset("adults");
  CHECK(e20 == prox3d::task_error(adults, 20.0));

  CHECK(px3d_task_error("adults", -1.0, &e20) == PX3D_ERROR_INVALID_ARGUMENT);
  CHECK(px3d_task_error("adults", 5.0, nullptr) == PX3D_ERROR_INVALID_ARGUMENT);
  CHECK(px3d_task_error(nullptr, 5.0, &e20) == PX3D_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("task error curve emits the CSV table") {
  OwnedString csv;
  REQUIRE_OK(px3d_task_error_curve_csv("adults", 10.0, 5.0, &csv.s));
  const auto rows = lines_of(csv.s);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "d,task_error");
  CHECK(rows[1] == "0,0");
  CHECK(rows[2].substr(0, 2) == "5,");
  CHECK(rows[3].substr(0, 3) == "10,");

  // the d = 10 row carries half the factor-scaled value of d = 20
  const double e10 = std::stod(rows[3].substr(3));
  double e20 = 0.0;
  REQUIRE_OK(px3d_task_error("adults", 20.0, &e20));
  CHECK(e10 == doctest::Approx(e20 / 2.0).epsilon(1e-7));

  OwnedString bad;
  CHECK(px3d_task_error_curve_csv("adults", 10.0, 0.0, &bad.s) ==
        PX3D_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("simulate writes deterministic labeled datasets") {
  TempFile a("sim_a.jsonl"), b("sim_b.jsonl");
  const char* cfg = R"({"n": 12, "seed": 3, "people_per_frame": 4})";
  REQUIRE_OK(px3d_simulate(cfg, a.path.c_str()));
  REQUIRE_OK(px3d_simulate(cfg, b.path.c_str()));
  CHECK(slurp(a.path) == slurp(b.path));

  const auto records = prox3d::parse_poses(a.path);
  REQUIRE(records.size() == 12);
  CHECK(records.front().gt.has_value());
  CHECK(records[0].frame == 0);
  CHECK(records[3].frame == 0);
  CHECK(records[4].frame == 1);
  CHECK(records[11].frame == 2);

  SUBCASE("config validation") {
    TempFile out("sim_bad.jsonl");
    CHECK(px3d_simulate(R"({"n": 0})", out.path.c_str()) ==
          PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_simulate(R"({})", out.path.c_str()) == PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_simulate(R"({"n": 5, "bogus": 1})", out.path.c_str()) ==
          PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(px3d_last_error_message()).find("bogus") !=
          std::string::npos);
    CHECK(px3d_simulate("not json", out.path.c_str()) ==
          PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_simulate(R"({"n": 5, "heights": "martians"})", out.path.c_str()) ==
          PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_simulate(R"({"n": 5})", nullptr) == PX3D_ERROR_INVALID_ARGUMENT);
  }
}

TEST_CASE("train writes weights plus sidecars") {
  TinyModel& tm = tiny_model();

  const json weights = json::parse(slurp(tm.weights.path));
  CHECK(weights.at("seed").get<std::uint64_t>() == 1);
  CHECK(weights.at("loss").get<std::string>() == "laplace");
  CHECK(weights.at("architecture").at("hidden_width").get<int>() == 16);

  const auto history = lines_of(slurp(tm.history.path));
  REQUIRE(history.size() == 4);  // comment, header, one row per epoch
  CHECK(history[0] == "# seed 1");
  CHECK(history[1] == "epoch,objective");
  CHECK(history[2].substr(0, 2) == "1,");
  CHECK(history[3].substr(0, 2) == "2,");

  const json calibration = json::parse(slurp(tm.calibration.path));
  CHECK(calibration.is_object());

  SUBCASE("model info reflects the file") {
    OwnedModel model;
    REQUIRE_OK(px3d_model_load(tm.weights.path.c_str(), &model.m));
    OwnedString info;
    REQUIRE_OK(px3d_model_info(model.m, &info.s));
    const json doc = json::parse(info.s);
    CHECK(doc.at("architecture").at("hidden_width").get<int>() == 16);
    CHECK(doc.at("architecture").at("hidden_layers").get<int>() == 2);
    CHECK(doc.at("loss").get<std::string>() == "laplace");
    CHECK(doc.at("dim_expectation").size() == 3);
  }

  SUBCASE("failure paths") {
    TempFile w("train_bad_weights.json");
    CHECK(px3d_train("/tmp/prox3d_missing_dataset.jsonl", "{}", w.path.c_str(),
                     nullptr, nullptr) == PX3D_ERROR_IO);
    CHECK(px3d_train(tm.dataset.path.c_str(), R"({"epochs": 0})", w.path.c_str(),
                     nullptr, nullptr) == PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_train(tm.dataset.path.c_str(), R"({"loss": "huber"})",
                     w.path.c_str(), nullptr, nullptr) ==
          PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_model_load("/tmp/prox3d_missing_weights.json", nullptr) ==
          PX3D_ERROR_INVALID_ARGUMENT);
    px3d_model* out = nullptr;
    CHECK(px3d_model_load("/tmp/prox3d_missing_weights.json", &out) ==
          PX3D_ERROR_IO);
  }
}

TEST_CASE("predict writes one estimate per pose") {
  TinyModel& tm = tiny_model();
  OwnedModel model;
  REQUIRE_OK(px3d_model_load(tm.weights.path.c_str(), &model.m));

  TempFile out("pred_out.jsonl");
  SUBCASE("deterministic pass omits sigma") {
    REQUIRE_OK(px3d_predict_file(model.m, tm.dataset.path.c_str(),
                                 R"({"mc_passes": 0})", out.path.c_str()));
    const std::string text = slurp(out.path);
    CHECK(lines_of(text).size() == 40);
    CHECK(text.find("\"sigma\"") == std::string::npos);
    CHECK(text.find("\"b\"") != std::string::npos);

    const auto preds = prox3d::parse_predictions(out.path);
    REQUIRE(preds.size() == 40);
    for (const auto& p : preds) CHECK(p.estimate.d >= 0.5);
  }

  SUBCASE("MC passes add sigma and stay reproducible") {
    const char* opts = R"({"mc_passes": 2, "mc_samples": 3, "seed": 4})";
    REQUIRE_OK(px3d_predict_file(model.m, tm.dataset.path.c_str(), opts,
                                 out.path.c_str()));
    const std::string first = slurp(out.path);
    CHECK(first.find("\"sigma\"") != std::string::npos);

    REQUIRE_OK(px3d_predict_file(model.m, tm.dataset.path.c_str(), opts,
                                 out.path.c_str()));
    CHECK(slurp(out.path) == first);

    // per-record RNG streams: a prefix of the input yields a prefix of the
    // output, byte for byte
    TempFile prefix("pred_prefix.jsonl");
    const auto full_lines = lines_of(slurp(tm.dataset.path));
    {
      std::ofstream trimmed(prefix.path);
      for (int i = 0; i < 5; ++i) trimmed << full_lines[i] << "\n";
    }
    TempFile prefix_out("pred_prefix_out.jsonl");
    REQUIRE_OK(px3d_predict_file(model.m, prefix.path.c_str(), opts,
                                 prefix_out.path.c_str()));
    const auto got = lines_of(slurp(prefix_out.path));
    const auto want = lines_of(first);
    REQUIRE(got.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(got[i] == want[i]);
  }

  SUBCASE("option validation") {
    CHECK(px3d_predict_file(model.m, tm.dataset.path.c_str(),
                            R"({"mc_passes": -1})",
                            out.path.c_str()) == PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_predict_file(model.m, tm.dataset.path.c_str(),
                            R"({"mc_passes": 2, "mc_samples": 0})",
                            out.path.c_str()) == PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_predict_file(nullptr, tm.dataset.path.c_str(), "{}",
                            out.path.c_str()) == PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_predict_file(model.m, "/tmp/prox3d_missing_poses.jsonl", "{}",
                            out.path.c_str()) == PX3D_ERROR_IO);
  }
}

TEST_CASE("an L1 model predicts without a spread") {
  TinyModel& tm = tiny_model();
  TempFile weights("l1_weights.json");
  REQUIRE_OK(px3d_train(tm.dataset.path.c_str(),
                        R"({"epochs": 1, "batch_size": 16, "hidden_width": 16,
                            "hidden_layers": 2, "loss": "l1"})",
                        weights.path.c_str(), nullptr, nullptr));
  OwnedModel model;
  REQUIRE_OK(px3d_model_load(weights.path.c_str(), &model.m));
  TempFile out("l1_pred.jsonl");
  REQUIRE_OK(px3d_predict_file(model.m, tm.dataset.path.c_str(),
                               R"({"mc_passes": 0})", out.path.c_str()));
  CHECK(slurp(out.path).find("\"b\"") == std::string::npos);
}

namespace {

// Predictions derived from the ground truth itself: errors are zero, so
// every localization metric lands at its ideal value.
std::vector<prox3d::PredictionRecord> perfect_predictions(
    const std::vector<prox3d::Record>& records, double b, double sigma) {
  std::vector<prox3d::PredictionRecord> preds;
  for (const auto& r : records) {
    prox3d::LocalizationEstimate e;
    const auto s = prox3d::spherical_from_cartesian(r.gt->xyz);
    e.d = s.d;
    e.beta = s.beta;
    e.psi = s.psi;
    e.theta = r.gt->theta;
    e.b = b;
    e.has_b = b > 0.0;
    e.sigma = sigma;
    e.has_sigma = sigma > 0.0;
    e.dims = r.gt->dims;
    preds.push_back({r.pose, r.frame, e});
  }
  return preds;
}

}  // namespace

TEST_CASE("evaluate produces the full report set") {
  TempFile gt("eval_gt.jsonl");
  REQUIRE_OK(px3d_simulate(
      R"({"n": 12, "seed": 21, "people_per_frame": 3, "z_min": 3, "z_max": 35})",
      gt.path.c_str()));
  const auto records = prox3d::parse_poses(gt.path);

  TempFile preds("eval_preds.jsonl");
  prox3d::write_predictions(preds.path, perfect_predictions(records, 0.05, 0.0));

  TempFile report_json("eval_report.json");
  TempFile report_csv("eval_report.csv");
  TempFile curve("eval_curve.csv");
  REQUIRE_OK(px3d_evaluate(preds.path.c_str(), gt.path.c_str(), "{}",
                           report_json.path.c_str(), report_csv.path.c_str(),
                           curve.path.c_str()));

  const json doc = json::parse(slurp(report_json.path));
  CHECK(doc.at("matched").get<int>() == 12);
  CHECK(doc.at("ground_truths").get<int>() == 12);
  CHECK(doc.at("recall_pct").get<double>() == 100.0);
  CHECK(doc.at("interval_recall_pct").get<double>() == 100.0);
  for (const auto& bin : doc.at("ale")) {
    CHECK(bin.at("ale_m").get<double>() == 0.0);
  }
  for (const auto& acc : doc.at("ala").at("accuracy_pct")) {
    CHECK(acc.get<double>() == 100.0);
  }
  CHECK_FALSE(doc.contains("interaction"));

  const auto csv_rows = lines_of(slurp(report_csv.path));
  REQUIRE(csv_rows.size() > 3);
  CHECK(csv_rows[0] == "metric,key,value,count");

  const auto curve_rows = lines_of(slurp(curve.path));
  REQUIRE(curve_rows.size() >= 2);
  CHECK(curve_rows[0] == "d,ale,task_error");

  SUBCASE("interval source selection changes the verdict") {
    // half-meter bias, tight b, loose sigma: only sigma covers the error
    auto biased = perfect_predictions(records, 0.001, 2.0);
    for (auto& p : biased) p.estimate.d += 0.5;
    prox3d::write_predictions(preds.path, biased);

    REQUIRE_OK(px3d_evaluate(preds.path.c_str(), gt.path.c_str(),
                             R"({"interval": "sigma"})", report_json.path.c_str(),
                             nullptr, nullptr));
    CHECK(json::parse(slurp(report_json.path))
              .at("interval_recall_pct")
              .get<double>() == 100.0);

    REQUIRE_OK(px3d_evaluate(preds.path.c_str(), gt.path.c_str(),
                             R"({"interval": "b"})", report_json.path.c_str(),
                             nullptr, nullptr));
    CHECK(json::parse(slurp(report_json.path))
              .at("interval_recall_pct")
              .get<double>() == 0.0);

    // auto prefers sigma when present
    REQUIRE_OK(px3d_evaluate(preds.path.c_str(), gt.path.c_str(), "{}",
                             report_json.path.c_str(), nullptr, nullptr));
    CHECK(json::parse(slurp(report_json.path))
              .at("interval_recall_pct")
              .get<double>() == 100.0);
  }

  SUBCASE("failure modes map to the right codes") {
    CHECK(px3d_evaluate(preds.path.c_str(), gt.path.c_str(),
                        R"({"interval": "maybe"})", report_json.path.c_str(),
                        nullptr, nullptr) == PX3D_ERROR_INVALID_ARGUMENT);

    auto shifted = perfect_predictions(records, 0.05, 0.0);
    for (auto& p : shifted) p.frame += 100;
    prox3d::write_predictions(preds.path, shifted);
    CHECK(px3d_evaluate(preds.path.c_str(), gt.path.c_str(), "{}",
                        report_json.path.c_str(), nullptr,
                        nullptr) == PX3D_ERROR_RUNTIME);

    CHECK(px3d_evaluate("/tmp/prox3d_missing_preds.jsonl", gt.path.c_str(), "{}",
                        report_json.path.c_str(), nullptr,
                        nullptr) == PX3D_ERROR_IO);
  }
}

namespace {

prox3d::Record ground_record(double x, double z, double theta, long frame) {
  prox3d::Record r;
  for (int i = 0; i < 3; ++i) {
    auto& kp = r.pose.joints[static_cast<std::size_t>(i)];
    kp.u = 10.0 * (i + 1);
    kp.v = 20.0 * (i + 1);
    kp.c = 1.0;
  }
  r.intrinsics = prox3d::CameraIntrinsics(720.0, 720.0, 620.0, 190.0);
  r.frame = frame;
  r.gt = prox3d::GroundTruth{};
  r.gt->xyz = {x, 0.9, z};
  r.gt->theta = theta;
  r.gt->height = 1.7;
  r.gt->dims = {0.6, 1.7, 0.5};
  return r;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("monitor reports per-frame verdicts from ground truth") {
  // frame 0: vis-a-vis at 1.6 m -> interacting and at risk
  // frame 1: side by side, 1.5 m apart -> at risk only (centers too far)
  // frame 2: 6 m apart -> neither
  std::vector<prox3d::Record> records;
  records.push_back(ground_record(0.0, 2.0, 0.0, 0));
  records.push_back(ground_record(1.6, 2.0, kPi, 0));
  records.push_back(ground_record(10.0, 2.0, kPi / 2, 1));
  records.push_back(ground_record(11.5, 2.0, kPi / 2, 1));
  records.push_back(ground_record(20.0, 2.0, 0.0, 2));
  records.push_back(ground_record(26.0, 2.0, 0.0, 2));
  TempFile dataset("monitor_gt.jsonl");
  prox3d::write_records(dataset.path, records);

  OwnedString distancing;
  REQUIRE_OK(px3d_monitor(dataset.path.c_str(), R"({"mode": "distancing"})",
                          &distancing.s));
  const json dist = json::parse(distancing.s);
  CHECK(dist.at("mode") == "distancing");
  CHECK(dist.at("seed") == 0);
  REQUIRE(dist.at("frames").size() == 3);
  const auto& frames = dist.at("frames");
  CHECK(frames[0].at("frame") == 0);
  CHECK(frames[0].at("pairs")[0].at("interacting") == true);
  CHECK(frames[0].at("at_risk") == json::array({0, 1}));
  CHECK(frames[1].at("pairs")[0].at("interacting") == true);
  CHECK(frames[1].at("at_risk") == json::array({0, 1}));
  CHECK(frames[2].at("pairs")[0].at("interacting") == false);
  CHECK(frames[2].at("at_risk") == json::array());

  OwnedString interaction;
  REQUIRE_OK(px3d_monitor(dataset.path.c_str(), R"({"mode": "interaction"})",
                          &interaction.s));
  const json inter = json::parse(interaction.s);
  // the strict R_max = r_o rule keeps the face-to-face pair only
  CHECK(inter.at("frames")[0].at("pairs")[0].at("interacting") == true);
  CHECK(inter.at("frames")[1].at("pairs")[0].at("interacting") == false);
  CHECK(inter.at("frames")[2].at("pairs")[0].at("interacting") == false);
  for (const auto& f : inter.at("frames")) CHECK(f.at("at_risk") == json::array());
}

TEST_CASE("monitor consumes prediction files") {
  TinyModel& tm = tiny_model();

  // mirror the ground-truth scene through the estimates schema (b = 0)
  std::vector<prox3d::Record> records;
  records.push_back(ground_record(0.0, 2.0, 0.0, 0));
  records.push_back(ground_record(1.6, 2.0, kPi, 0));
  records.push_back(ground_record(10.0, 2.0, kPi / 2, 1));
  records.push_back(ground_record(11.5, 2.0, kPi / 2, 1));
  TempFile dataset("monitor_mirror_gt.jsonl");
  prox3d::write_records(dataset.path, records);
  TempFile estimates("monitor_mirror_est.jsonl");
  prox3d::write_predictions(estimates.path,
                            perfect_predictions(records, 0.0, 0.0));

  OwnedString from_gt, from_est;
  REQUIRE_OK(px3d_monitor(dataset.path.c_str(), "{}", &from_gt.s));
  REQUIRE_OK(px3d_monitor(estimates.path.c_str(), "{}", &from_est.s));
  CHECK(std::string(from_gt.s) == std::string(from_est.s));

  SUBCASE("voting recovers a borderline miss, deterministic mode does not") {
    // on-axis pair estimated 2.1 m apart: the exact check fails D_max
    std::vector<prox3d::PredictionRecord> preds;
    prox3d::LocalizationEstimate near;
    near.d = 2.0;
    near.beta = 0.0;
    near.psi = kPi / 2;
    near.theta = kPi / 2;
    near.b = 0.1 / near.d;
    prox3d::LocalizationEstimate far = near;
    far.d = 4.1;
    far.theta = -kPi / 2;
    far.b = 0.4 / far.d;
    preds.push_back({records[0].pose, 0, near});
    preds.push_back({records[1].pose, 0, far});
    TempFile file("monitor_border.jsonl");
    prox3d::write_predictions(file.path, preds);

    OwnedString voted;
    REQUIRE_OK(px3d_monitor(file.path.c_str(), R"({"mode": "interaction"})",
                            &voted.s));
    const json v = json::parse(voted.s)["frames"][0]["pairs"][0];
    CHECK(v.at("interacting") == true);
    CHECK(v.at("vote_fraction").get<double>() >= 0.25);
    CHECK(v.at("vote_fraction").get<double>() < 1.0);

    OwnedString exact;
    REQUIRE_OK(px3d_monitor(file.path.c_str(),
                            R"({"mode": "interaction", "deterministic": true})",
                            &exact.s));
    const json e = json::parse(exact.s)["frames"][0]["pairs"][0];
    CHECK(e.at("interacting") == false);
    CHECK(e.at("vote_fraction").get<double>() == 0.0);

    OwnedString again;
    REQUIRE_OK(px3d_monitor(file.path.c_str(), R"({"mode": "interaction"})",
                            &again.s));
    CHECK(std::string(voted.s) == std::string(again.s));
  }

  SUBCASE("ground_truth forces gt even when estimates exist") {
    // prediction files carry no gt, so forcing gt mode must fail loudly
    OwnedString out;
    CHECK(px3d_monitor(estimates.path.c_str(), R"({"ground_truth": true})",
                       &out.s) != PX3D_OK);
  }

  SUBCASE("a real prediction pipeline feeds the monitor") {
    OwnedModel model;
    REQUIRE_OK(px3d_model_load(tm.weights.path.c_str(), &model.m));
    TempFile pred_out("monitor_pipeline.jsonl");
    REQUIRE_OK(px3d_predict_file(model.m, tm.dataset.path.c_str(),
                                 R"({"mc_passes": 0})", pred_out.path.c_str()));
    OwnedString out;
    REQUIRE_OK(px3d_monitor(pred_out.path.c_str(), "{}", &out.s));
    const json doc = json::parse(out.s);
    CHECK(doc.at("frames").size() == 40);  // one person per frame, no pairs
    for (const auto& f : doc.at("frames")) CHECK(f.at("pairs").empty());
  }

  SUBCASE("option validation") {
    OwnedString out;
    CHECK(px3d_monitor(dataset.path.c_str(), R"({"mode": "karaoke"})", &out.s) ==
          PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_monitor(dataset.path.c_str(), R"({"radii": "big"})", &out.s) ==
          PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_monitor(dataset.path.c_str(), R"({"threshold": 2.0})", &out.s) ==
          PX3D_ERROR_INVALID_ARGUMENT);
    CHECK(px3d_monitor("/tmp/prox3d_missing_monitor.jsonl", "{}", &out.s) ==
          PX3D_ERROR_IO);
  }
}
