#include "prox3d/prox3d.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/baseline.hpp"
#include "core/estimates.hpp"
#include "core/evaluation.hpp"
#include "core/height_model.hpp"
#include "core/network.hpp"
#include "core/pose.hpp"
#include "core/rng.hpp"
#include "core/social.hpp"
#include "core/synthetic.hpp"
#include "core/trainer.hpp"
#include "core/weights.hpp"

struct px3d_model {
  prox3d::SavedModel saved;
};

namespace {

using nlohmann::json;

thread_local std::string t_error;

// Raised for missing/unwritable files so the catch-all can map them to
// PX3D_ERROR_IO instead of PX3D_ERROR_RUNTIME.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::runtime_error("out of memory");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

px3d_status fail(px3d_status code, std::string msg) {
  t_error = std::move(msg);
  return code;
}

// The core throws plain runtime_errors for file problems; recognize its
// wording so those still come back as IO errors.
bool looks_like_io(const std::string& msg) {
  return msg.find("cannot open") != std::string::npos ||
         msg.find("cannot write") != std::string::npos ||
         msg.find("write failed") != std::string::npos ||
         msg.find("failed writing") != std::string::npos;
}

template <typename Fn>
px3d_status guarded(Fn&& fn) {
  t_error.clear();
  try {
    fn();
    return PX3D_OK;
  } catch (const std::invalid_argument& e) {
    return fail(PX3D_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const IoError& e) {
    return fail(PX3D_ERROR_IO, e.what());
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    return fail(looks_like_io(msg) ? PX3D_ERROR_IO : PX3D_ERROR_RUNTIME, msg);
  }
}

std::string require_cstr(const char* s, const char* what) {
  if (s == nullptr || *s == '\0')
    throw std::invalid_argument(std::string(what) + " must not be null or empty");
  return s;
}

void require_input_file(const std::string& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw IoError("no such file: " + path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

// ---- option parsing ----------------------------------------------------

json parse_options(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return json::object();
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw std::invalid_argument(std::string(what) + " is not valid JSON");
  if (!j.is_object())
    throw std::invalid_argument(std::string(what) + " must be a JSON object");
  return j;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const char* what) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok)
      throw std::invalid_argument("unknown key \"" + item.key() + "\" in " + what);
  }
}

double get_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw std::invalid_argument(std::string("\"") + key + "\" must be a number");
  return j[key].get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    throw std::invalid_argument(std::string("\"") + key + "\" must be an integer");
  return j[key].get<int>();
}

std::uint64_t get_seed(const json& j) {
  if (!j.contains("seed")) return 0;
  const json& v = j["seed"];
  if (!v.is_number_integer() ||
      (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw std::invalid_argument("\"seed\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool get_bool(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean())
    throw std::invalid_argument(std::string("\"") + key + "\" must be a boolean");
  return j[key].get<bool>();
}

std::string get_string(const json& j, const char* key, const char* fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string())
    throw std::invalid_argument(std::string("\"") + key + "\" must be a string");
  return j[key].get<std::string>();
}

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double chosen_interval(const prox3d::LocalizationEstimate& e,
                       const std::string& mode) {
  const double from_b = e.has_b ? e.b * e.d : 0.0;
  if (mode == "b") return from_b;
  if (mode == "sigma") return e.has_sigma ? e.sigma : 0.0;
  return e.has_sigma ? e.sigma : from_b;  // auto
}

// Collapse either monitor input flavor onto ground-plane poses, keyed by
// frame. Person order within a frame follows file order.
std::map<long, std::vector<prox3d::GroundPose>> monitor_frames(
    const std::string& path, bool use_gt, bool deterministic) {
  std::map<long, std::vector<prox3d::GroundPose>> frames;
  bool has_estimates = false;
  {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string first;
    while (std::getline(in, first) && first.empty()) {
    }
    const json j = json::parse(first.empty() ? "{}" : first, nullptr, false);
    has_estimates = j.is_object() && j.contains("estimate");
  }
  if (has_estimates && !use_gt) {
    for (const auto& p : prox3d::parse_predictions(path)) {
      const prox3d::CartesianLocation xyz = p.estimate.xyz();
      const double b =
          deterministic || !p.estimate.has_b ? 0.0 : p.estimate.b * p.estimate.d;
      frames[p.frame].push_back({xyz.x, xyz.z, p.estimate.theta, b});
    }
    return frames;
  }
  const auto records = prox3d::parse_poses(path);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.gt)
      throw std::invalid_argument("record " + std::to_string(i) +
                                  " has no gt annotation; ground-truth "
                                  "monitoring needs a labeled dataset");
    frames[r.frame].push_back({r.gt->xyz.x, r.gt->xyz.z, r.gt->theta, 0.0});
  }
  return frames;
}

}  // namespace

extern "C" {

const char* px3d_version(void) { return "0.1.0"; }

const char* px3d_last_error_message(void) { return t_error.c_str(); }

void px3d_string_free(char* s) { std::free(s); }

px3d_status px3d_task_error(const char* heights_preset, double d_gt,
                            double* out_m) {
  return guarded([&] {
    if (out_m == nullptr) throw std::invalid_argument("out_m must not be null");
    const auto dist =
        prox3d::HeightDistribution::preset(require_cstr(heights_preset, "heights_preset"));
    *out_m = prox3d::task_error(dist, d_gt);
  });
}

px3d_status px3d_task_error_curve_csv(const char* heights_preset, double d_max,
                                      double step, char** out_csv) {
  return guarded([&] {
    if (out_csv == nullptr) throw std::invalid_argument("out_csv must not be null");
    const auto dist =
        prox3d::HeightDistribution::preset(require_cstr(heights_preset, "heights_preset"));
    std::string csv = "d,task_error\n";
    for (const auto& [d, e] : prox3d::task_error_curve(dist, d_max, step)) {
      csv += format_g(d);
      csv += ',';
      csv += format_g(e);
      csv += '\n';
    }
    *out_csv = dup_string(csv);
  });
}

px3d_status px3d_simulate(const char* config_json, const char* out_path) {
  return guarded([&] {
    const std::string out = require_cstr(out_path, "out_path");
    const json cfg = parse_options(config_json, "simulate config");
    reject_unknown_keys(cfg,
                        {"n", "seed", "noise_px", "people_per_frame", "heights",
                         "z_min", "z_max", "x_frac", "image_width", "image_height",
                         "fx", "fy", "cx", "cy", "camera_height",
                         "camera_height_jitter"},
                        "simulate config");
    if (!cfg.contains("n"))
      throw std::invalid_argument("simulate config requires \"n\"");

    prox3d::GeneratorConfig g;
    g.image_width = get_number(cfg, "image_width", g.image_width);
    g.image_height = get_number(cfg, "image_height", g.image_height);
    g.intrinsics = prox3d::CameraIntrinsics(
        get_number(cfg, "fx", g.intrinsics.fx), get_number(cfg, "fy", g.intrinsics.fy),
        get_number(cfg, "cx", g.intrinsics.cx), get_number(cfg, "cy", g.intrinsics.cy));
    g.camera_height_m = get_number(cfg, "camera_height", g.camera_height_m);
    g.camera_height_jitter_m =
        get_number(cfg, "camera_height_jitter", g.camera_height_jitter_m);
    g.z_min = get_number(cfg, "z_min", g.z_min);
    g.z_max = get_number(cfg, "z_max", g.z_max);
    g.x_frac = get_number(cfg, "x_frac", g.x_frac);
    g.noise_px = get_number(cfg, "noise_px", g.noise_px);
    g.people_per_frame = get_int(cfg, "people_per_frame", g.people_per_frame);
    g.heights =
        prox3d::HeightDistribution::preset(get_string(cfg, "heights", "adults"));

    prox3d::generate_dataset(out, get_int(cfg, "n", 0), g, get_seed(cfg));
  });
}

px3d_status px3d_train(const char* dataset_path, const char* config_json,
                       const char* weights_path, const char* history_csv_path,
                       const char* calibration_path) {
  return guarded([&] {
    const std::string data = require_cstr(dataset_path, "dataset_path");
    const std::string weights = require_cstr(weights_path, "weights_path");
    const json cfg = parse_options(config_json, "train config");
    reject_unknown_keys(cfg,
                        {"epochs", "batch_size", "learning_rate", "p_drop", "seed",
                         "loss", "weight_regularizer", "augment_flip",
                         "hidden_width", "hidden_layers"},
                        "train config");

    prox3d::TrainingConfig tc;
    tc.epochs = get_int(cfg, "epochs", tc.epochs);
    tc.batch_size = get_int(cfg, "batch_size", tc.batch_size);
    tc.learning_rate = get_number(cfg, "learning_rate", tc.learning_rate);
    tc.p_drop = get_number(cfg, "p_drop", tc.p_drop);
    tc.seed = get_seed(cfg);
    tc.loss = prox3d::loss_from_name(get_string(cfg, "loss", "laplace"));
    tc.weight_regularizer = get_bool(cfg, "weight_regularizer", tc.weight_regularizer);
    tc.augment_flip = get_bool(cfg, "augment_flip", tc.augment_flip);

    prox3d::Architecture arch;
    arch.hidden_width = get_int(cfg, "hidden_width", arch.hidden_width);
    arch.hidden_layers = get_int(cfg, "hidden_layers", arch.hidden_layers);

    require_input_file(data);
    const std::vector<prox3d::Record> records = prox3d::parse_poses(data);

    // Calibrate before the (long) training run so its errors surface fast.
    std::optional<prox3d::BaselineCalibration> calibration;
    if (calibration_path != nullptr && *calibration_path != '\0')
      calibration = prox3d::calibrate_segments(records);

    const prox3d::TrainingResult result = prox3d::train(records, arch, tc);

    prox3d::save_weights(result.params, tc.loss, weights, tc.seed);
    if (history_csv_path != nullptr && *history_csv_path != '\0') {
      std::string csv = "# seed " + std::to_string(tc.seed) + "\nepoch,objective\n";
      for (std::size_t i = 0; i < result.history.size(); ++i) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i + 1, result.history[i]);
        csv += buf;
      }
      write_text_file(history_csv_path, csv);
    }
    if (calibration) prox3d::save_calibration(*calibration, calibration_path);
  });
}

px3d_status px3d_model_load(const char* weights_path, px3d_model** out_model) {
  return guarded([&] {
    if (out_model == nullptr)
      throw std::invalid_argument("out_model must not be null");
    const std::string path = require_cstr(weights_path, "weights_path");
    require_input_file(path);
    *out_model = new px3d_model{prox3d::load_weights(path)};
  });
}

void px3d_model_free(px3d_model* model) { delete model; }

px3d_status px3d_model_info(const px3d_model* model, char** out_json) {
  return guarded([&] {
    if (model == nullptr) throw std::invalid_argument("model must not be null");
    if (out_json == nullptr)
      throw std::invalid_argument("out_json must not be null");
    const prox3d::NetworkParams& p = model->saved.params;
    const json doc = {
        {"architecture",
         {{"input_dim", p.arch.input_dim},
          {"hidden_width", p.arch.hidden_width},
          {"hidden_layers", p.arch.hidden_layers}}},
        {"loss", prox3d::loss_name(model->saved.loss)},
        {"p_drop", p.p_drop},
        {"dim_expectation",
         {p.dim_expectation[0], p.dim_expectation[1], p.dim_expectation[2]}},
    };
    *out_json = dup_string(doc.dump(2) + "\n");
  });
}

px3d_status px3d_predict_file(const px3d_model* model, const char* poses_path,
                              const char* options_json, const char* out_path) {
  return guarded([&] {
    if (model == nullptr) throw std::invalid_argument("model must not be null");
    const std::string in = require_cstr(poses_path, "poses_path");
    const std::string out = require_cstr(out_path, "out_path");
    const json opts = parse_options(options_json, "predict options");
    reject_unknown_keys(opts, {"mc_passes", "mc_samples", "seed"},
                        "predict options");
    const int t_passes = get_int(opts, "mc_passes", 50);
    const int i_samples = get_int(opts, "mc_samples", 100);
    if (t_passes < 0) throw std::invalid_argument("\"mc_passes\" must be >= 0");
    if (t_passes > 0 && i_samples < 1)
      throw std::invalid_argument("\"mc_samples\" must be >= 1");
    const prox3d::Rng base(get_seed(opts));

    require_input_file(in);
    const std::vector<prox3d::Record> records = prox3d::parse_poses(in);
    std::vector<prox3d::PredictionRecord> predictions;
    predictions.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      const prox3d::Record& r = records[i];
      if (r.pose.visible_count() < 3)
        throw std::invalid_argument(in + ": record " + std::to_string(i) +
                                    " has fewer than 3 visible joints");
      const prox3d::InputVector input = prox3d::normalize_pose(r.pose, r.intrinsics);
      prox3d::LocalizationEstimate est;
      if (t_passes > 0) {
        est = prox3d::predict_mc(model->saved.params, input, t_passes, i_samples,
                                 base.derive(static_cast<std::uint64_t>(i)),
                                 model->saved.loss);
      } else {
        est = prox3d::predict(model->saved.params, input, model->saved.loss);
      }
      predictions.push_back({r.pose, r.frame, est});
    }
    prox3d::write_predictions(out, predictions);
  });
}

px3d_status px3d_evaluate(const char* predictions_path, const char* gt_path,
                          const char* options_json, const char* report_json_path,
                          const char* report_csv_path,
                          const char* curve_csv_path) {
  return guarded([&] {
    const std::string preds_file = require_cstr(predictions_path, "predictions_path");
    const std::string gt_file = require_cstr(gt_path, "gt_path");
    const std::string report_file = require_cstr(report_json_path, "report_json_path");
    const json opts = parse_options(options_json, "eval options");
    reject_unknown_keys(opts,
                        {"iou_threshold", "interval", "heights", "curve_bin_width",
                         "image_width", "image_height"},
                        "eval options");
    const std::string interval_mode = get_string(opts, "interval", "auto");
    if (interval_mode != "auto" && interval_mode != "b" && interval_mode != "sigma")
      throw std::invalid_argument("\"interval\" must be auto, b, or sigma");
    const auto heights =
        prox3d::HeightDistribution::preset(get_string(opts, "heights", "adults"));
    const double bin_width = get_number(opts, "curve_bin_width", 5.0);

    prox3d::EvalConfig cfg;
    cfg.iou_threshold = get_number(opts, "iou_threshold", cfg.iou_threshold);
    cfg.image_width = get_number(opts, "image_width", cfg.image_width);
    cfg.image_height = get_number(opts, "image_height", cfg.image_height);

    require_input_file(preds_file);
    require_input_file(gt_file);
    const auto raw = prox3d::parse_predictions(preds_file);
    std::vector<prox3d::Prediction> predictions;
    predictions.reserve(raw.size());
    for (const auto& p : raw) {
      predictions.push_back({p.pose, p.frame, p.estimate.d,
                             chosen_interval(p.estimate, interval_mode)});
    }
    const auto gts = prox3d::parse_poses(gt_file);

    const prox3d::EvalReport report = prox3d::evaluate(predictions, gts, cfg);
    write_text_file(report_file, prox3d::report_json(report));
    if (report_csv_path != nullptr && *report_csv_path != '\0')
      write_text_file(report_csv_path, prox3d::report_csv(report));
    if (curve_csv_path != nullptr && *curve_csv_path != '\0')
      write_text_file(curve_csv_path,
                      prox3d::curve_csv(report.pairs, heights, bin_width));
  });
}

px3d_status px3d_monitor(const char* input_path, const char* options_json,
                         char** out_json) {
  return guarded([&] {
    if (out_json == nullptr)
      throw std::invalid_argument("out_json must not be null");
    const std::string in = require_cstr(input_path, "input_path");
    const json opts = parse_options(options_json, "monitor options");
    reject_unknown_keys(opts,
                        {"mode", "ground_truth", "deterministic", "seed",
                         "n_samples", "threshold", "d_max", "radii"},
                        "monitor options");
    const std::string mode = get_string(opts, "mode", "distancing");
    if (mode != "interaction" && mode != "distancing")
      throw std::invalid_argument("\"mode\" must be interaction or distancing");
    const bool use_gt = get_bool(opts, "ground_truth", false);
    const bool deterministic = get_bool(opts, "deterministic", false);

    prox3d::SocialConfig sc;
    sc.seed = get_seed(opts);
    sc.n_samples = get_int(opts, "n_samples", sc.n_samples);
    sc.vote_threshold = get_number(opts, "threshold", sc.vote_threshold);
    sc.d_max_m = get_number(opts, "d_max", sc.d_max_m);
    if (opts.contains("radii")) {
      if (!opts["radii"].is_array())
        throw std::invalid_argument("\"radii\" must be an array of numbers");
      sc.radii_m.clear();
      for (const auto& r : opts["radii"]) {
        if (!r.is_number())
          throw std::invalid_argument("\"radii\" must be an array of numbers");
        sc.radii_m.push_back(r.get<double>());
      }
    }

    require_input_file(in);
    const auto frames = monitor_frames(in, use_gt, deterministic);

    json out = {{"mode", mode}, {"seed", sc.seed}, {"frames", json::array()}};
    for (const auto& [frame, people] : frames) {
      std::vector<prox3d::PairVerdict> pairs;
      std::vector<bool> at_risk;
      if (mode == "interaction") {
        pairs = prox3d::detect_interactions(people, sc);
      } else {
        prox3d::DistancingReport rep = prox3d::social_distancing_check(people, sc);
        pairs = std::move(rep.pairs);
        at_risk = std::move(rep.at_risk);
      }
      json jpairs = json::array();
      for (const auto& v : pairs) {
        jpairs.push_back(json{{"i", v.i},
                              {"j", v.j},
                              {"vote_fraction", v.vote_fraction},
                              {"interacting", v.interacting}});
      }
      json jrisk = json::array();
      for (std::size_t i = 0; i < at_risk.size(); ++i) {
        if (at_risk[i]) jrisk.push_back(i);
      }
      out["frames"].push_back(json{
          {"frame", frame}, {"pairs", std::move(jpairs)}, {"at_risk", std::move(jrisk)}});
    }
    *out_json = dup_string(out.dump(2) + "\n");
  });
}

}  // extern "C"
