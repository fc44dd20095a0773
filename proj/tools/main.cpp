// prox3d command-line frontend. All pipeline work happens behind the C API;
// this file only maps flags and config files onto its JSON options.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prox3d/prox3d.h"

namespace {

using nlohmann::json;

bool g_quiet = false;

void note(const std::string& msg) {
  if (!g_quiet) std::cerr << msg << "\n";
}

int report_failure(const std::string& context, px3d_status status) {
  std::cerr << "prox3d " << context << ": " << px3d_last_error_message() << "\n";
  return static_cast<int>(status);
}

// Loads the --config file for the active subcommand: a flat JSON object
// whose keys match the C API option names. Explicit flags override it.
json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw CLI::ValidationError("--config", path + " is not a JSON object");
  return j;
}

// Registers flags on a subcommand and remembers how to fold the explicitly
// provided ones into the C API options object.
struct JsonFlags {
  explicit JsonFlags(CLI::App* s) : sub(s) {}

  CLI::App* sub;
  std::vector<std::function<void(json&)>> applied;

  template <typename T>
  CLI::Option* option(const std::string& flag, const std::string& key,
                      const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = sub->add_option(flag, *value, help);
    applied.push_back([opt, value, key](json& j) {
      if (opt->count() > 0) j[key] = *value;
    });
    return opt;
  }

  CLI::Option* flag_sets(const std::string& flag, const std::string& key,
                         bool to, const std::string& help) {
    CLI::Option* opt = sub->add_flag(flag, help);
    applied.push_back([opt, key, to](json& j) {
      if (opt->count() > 0) j[key] = to;
    });
    return opt;
  }

  json build(const json& config) const {
    json j = config;
    for (const auto& apply : applied) apply(j);
    return j;
  }
};

std::string slurp_or_empty(const char* text) { return text ? text : ""; }

int write_or_print(const std::string& out_path, const std::string& text,
                   const std::string& context) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "prox3d " << context << ": cannot write " << out_path << "\n";
    return static_cast<int>(PX3D_ERROR_IO);
  }
  note("wrote " + out_path);
  return 0;
}

struct ModelHandle {
  px3d_model* m = nullptr;
  ~ModelHandle() { px3d_model_free(m); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "prox3d: 3D pedestrian localization with uncertainty from 2D poses.\n"
      "Defaults follow the reference training recipe; --config takes a JSON\n"
      "file of per-command options (same keys as the flags), flags win."};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string config_path;
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "RNG seed for any stochastic step (0)");
  app.add_option("--config", config_path, "JSON options file for the subcommand")
      ->check(CLI::ExistingFile);
  app.add_flag("--quiet", g_quiet, "suppress progress notes on stderr");

  // ---- simulate --------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  sim->fallthrough();
  std::string sim_out;
  sim->add_option("--out", sim_out, "output dataset (JSONL)")->required();
  JsonFlags sim_flags{sim};
  sim_flags.option<long long>("--n", "n", "number of records (required)");
  sim_flags.option<double>("--noise-px", "noise_px", "keypoint noise, px (0)");
  sim_flags.option<std::string>("--heights", "heights",
                                "height mixture: adults | adults+teens");
  sim_flags.option<long long>("--people-per-frame", "people_per_frame",
                              "records sharing a frame id (1)");
  sim_flags.option<double>("--z-min", "z_min", "nearest spawn depth, m (1)");
  sim_flags.option<double>("--z-max", "z_max", "farthest spawn depth, m (40)");
  sim_flags.option<double>("--x-frac", "x_frac",
                           "usable fraction of the half-frustum (0.8)");
  sim_flags.option<double>("--camera-height", "camera_height",
                           "ground plane below the camera, m (1.65)");
  sim_flags.option<double>("--camera-jitter", "camera_height_jitter",
                           "per-frame uniform ground offset, m (0)");

  // ---- train ------------------------------------------------------------
  auto* train = app.add_subcommand("train", "train the localization network");
  train->fallthrough();
  std::string train_data, train_out, train_history, train_calibration;
  train->add_option("--data", train_data, "training dataset (JSONL with gt)")
      ->required();
  train->add_option("--out", train_out, "output weight file")->required();
  train->add_option("--history", train_history, "per-epoch objective CSV");
  train->add_option("--calibration", train_calibration,
                    "geometric-baseline calibration sidecar (needs >= 30 records)");
  JsonFlags train_flags{train};
  train_flags.option<long long>("--epochs", "epochs", "training epochs (200)");
  train_flags.option<long long>("--batch-size", "batch_size", "mini-batch (512)");
  train_flags.option<double>("--lr", "learning_rate", "Adam step size (1e-3)");
  train_flags.option<double>("--p-drop", "p_drop", "dropout probability (0.2)");
  train_flags.option<std::string>("--loss", "loss",
                                  "distance loss: laplace | l1 | gaussian");
  train_flags.option<long long>("--hidden-width", "hidden_width",
                                "units per hidden layer (1024)");
  train_flags.option<long long>("--hidden-layers", "hidden_layers",
                                "hidden layer count (6)");
  train_flags.flag_sets("--no-flip", "augment_flip", false,
                        "disable horizontal-flip augmentation");
  train_flags.flag_sets("--no-weight-reg", "weight_regularizer", false,
                        "disable the dropout weight regularizer");

  // ---- predict ----------------------------------------------------------
  auto* predict = app.add_subcommand("predict", "localize poses with a model");
  predict->fallthrough();
  std::string pred_weights, pred_in, pred_out;
  predict->add_option("--weights", pred_weights, "weight file")->required();
  predict->add_option("--in", pred_in, "poses file (JSONL)")->required();
  predict->add_option("--out", pred_out, "output predictions (JSONL)")->required();
  JsonFlags predict_flags{predict};
  predict_flags.option<long long>("--mc-passes", "mc_passes",
                                  "MC-dropout forward passes; 0 = off (50)");
  predict_flags.option<long long>("--mc-samples", "mc_samples",
                                  "Laplace draws per pass (100)");

  // ---- eval --------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "score predictions against a dataset");
  eval->fallthrough();
  std::string eval_pred, eval_gt, eval_report, eval_csv, eval_curve;
  eval->add_option("--pred", eval_pred, "predictions file (JSONL)")->required();
  eval->add_option("--gt", eval_gt, "ground-truth dataset (JSONL)")->required();
  eval->add_option("--report-json", eval_report, "metric report (JSON)")
      ->required();
  eval->add_option("--report-csv", eval_csv, "metric report as CSV rows");
  eval->add_option("--curve", eval_curve, "d,ale,task_error table (CSV)");
  JsonFlags eval_flags{eval};
  eval_flags.option<double>("--iou", "iou_threshold", "match threshold (0.3)");
  eval_flags.option<std::string>(
      "--interval", "interval",
      "uncertainty for interval recall: auto | b | sigma (auto)");
  eval_flags.option<std::string>("--heights", "heights",
                                 "mixture for the curve's task error (adults)");
  eval_flags.option<double>("--curve-bin-width", "curve_bin_width",
                            "curve bin width, m (5)");

  // ---- task-error ---------------------------------------------------------
  auto* task = app.add_subcommand(
      "task-error", "tabulate the height-ambiguity error bound");
  task->fallthrough();
  std::string task_heights = "adults", task_out;
  double task_dmax = 40.0, task_step = 1.0;
  CLI::Option* task_heights_opt = task->add_option(
      "--heights", task_heights, "height mixture (adults)");
  CLI::Option* task_dmax_opt =
      task->add_option("--d-max", task_dmax, "last tabulated distance, m (40)");
  CLI::Option* task_step_opt =
      task->add_option("--step", task_step, "distance increment, m (1)");
  task->add_option("--out", task_out, "output CSV (stdout when omitted)");

  // ---- monitor -------------------------------------------------------------
  auto* monitor = app.add_subcommand(
      "monitor", "proxemics verdicts from predictions or ground truth");
  monitor->fallthrough();
  std::string mon_in, mon_out;
  monitor->add_option("--in", mon_in, "predictions or labeled dataset (JSONL)")
      ->required();
  monitor->add_option("--out", mon_out, "verdict JSON (stdout when omitted)");
  JsonFlags monitor_flags{monitor};
  monitor_flags.option<std::string>(
      "--mode", "mode", "interaction | distancing (distancing)");
  monitor_flags.flag_sets("--ground-truth", "ground_truth", true,
                          "use gt annotations even when estimates exist");
  monitor_flags.flag_sets("--deterministic", "deterministic", true,
                          "drop the spreads: single-shot geometric check");
  monitor_flags.option<long long>("--n-samples", "n_samples",
                                  "location samples per pair (100)");
  monitor_flags.option<double>("--threshold", "threshold",
                               "vote fraction to accept a pair (0.25)");
  monitor_flags.option<double>("--d-max", "d_max", "max pair distance, m (2)");
  monitor_flags.option<std::vector<double>>(
      "--radii", "radii", "o-space candidate radii, m (0.3 0.5 1.0)");

  CLI11_PARSE(app, argc, argv);

  json config;
  try {
    config = load_config(config_path);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }

  const auto with_seed = [&](json j) {
    if (seed_opt->count() > 0) j["seed"] = seed;
    return j;
  };

  if (*sim) {
    const std::string opts = with_seed(sim_flags.build(config)).dump();
    if (px3d_status st = px3d_simulate(opts.c_str(), sim_out.c_str()))
      return report_failure("simulate", st);
    note("wrote " + sim_out);
    return 0;
  }

  if (*train) {
    const std::string opts = with_seed(train_flags.build(config)).dump();
    if (px3d_status st = px3d_train(
            train_data.c_str(), opts.c_str(), train_out.c_str(),
            train_history.empty() ? nullptr : train_history.c_str(),
            train_calibration.empty() ? nullptr : train_calibration.c_str()))
      return report_failure("train", st);
    note("wrote " + train_out);
    if (!train_history.empty()) note("wrote " + train_history);
    if (!train_calibration.empty()) note("wrote " + train_calibration);
    return 0;
  }

  if (*predict) {
    ModelHandle model;
    if (px3d_status st = px3d_model_load(pred_weights.c_str(), &model.m))
      return report_failure("predict", st);
    const std::string opts = with_seed(predict_flags.build(config)).dump();
    if (px3d_status st = px3d_predict_file(model.m, pred_in.c_str(),
                                           opts.c_str(), pred_out.c_str()))
      return report_failure("predict", st);
    note("wrote " + pred_out);
    return 0;
  }

  if (*eval) {
    const std::string opts = eval_flags.build(config).dump();
    if (px3d_status st = px3d_evaluate(
            eval_pred.c_str(), eval_gt.c_str(), opts.c_str(),
            eval_report.c_str(), eval_csv.empty() ? nullptr : eval_csv.c_str(),
            eval_curve.empty() ? nullptr : eval_curve.c_str()))
      return report_failure("eval", st);
    note("wrote " + eval_report);
    if (!eval_csv.empty()) note("wrote " + eval_csv);
    if (!eval_curve.empty()) note("wrote " + eval_curve);
    return 0;
  }

  if (*task) {
    // no JSON options in the C call; apply the config fallbacks here
    if (task_heights_opt->count() == 0 && config.contains("heights"))
      task_heights = config["heights"].get<std::string>();
    if (task_dmax_opt->count() == 0 && config.contains("d_max"))
      task_dmax = config["d_max"].get<double>();
    if (task_step_opt->count() == 0 && config.contains("step"))
      task_step = config["step"].get<double>();
    char* csv = nullptr;
    if (px3d_status st =
            px3d_task_error_curve_csv(task_heights.c_str(), task_dmax, task_step, &csv))
      return report_failure("task-error", st);
    const std::string text = slurp_or_empty(csv);
    px3d_string_free(csv);
    return write_or_print(task_out, text, "task-error");
  }

  if (*monitor) {
    const std::string opts = with_seed(monitor_flags.build(config)).dump();
    char* verdict = nullptr;
    if (px3d_status st = px3d_monitor(mon_in.c_str(), opts.c_str(), &verdict))
      return report_failure("monitor", st);
    const std::string text = slurp_or_empty(verdict);
    px3d_string_free(verdict);
    return write_or_print(mon_out, text, "monitor");
  }

  return 0;  // unreachable: require_subcommand(1)
}
