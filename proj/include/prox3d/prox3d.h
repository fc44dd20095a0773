#ifndef PROX3D_PROX3D_H
#define PROX3D_PROX3D_H

/*
 * prox3d C API: monocular 3D pedestrian localization with calibrated
 * uncertainty, plus proxemics verdicts (social interaction / distancing).
 *
 * Conventions shared by every entry point:
 *  - Functions return PX3D_OK on success. On failure they return an error
 *    code and leave a human-readable message in thread-local storage,
 *    retrievable with px3d_last_error_message().
 *  - Strings returned through char** out-parameters are heap-allocated and
 *    owned by the caller; release them with px3d_string_free().
 *  - Configuration is passed as JSON text. NULL or "" means "all defaults";
 *    unknown keys are rejected so typos cannot silently revert a setting.
 *  - Every operation that consumes randomness takes a "seed" key and is
 *    byte-deterministic for a fixed seed.
 *
 * File formats (JSON lines unless noted):
 *  - dataset:     {"pose": [[u,v,c] x 17 COCO order], "K": {fx,fy,cx,cy},
 *                  "frame": id, "gt": {"xyz": [x,y,z], "theta", "height",
 *                  "dims": [w,h,l]}}   ("gt" optional for inference input)
 *  - predictions: {"estimate": {"d","b","sigma","beta","psi","theta",
 *                  "xyz","dims"}, "frame", "pose"}   (b absent for L1
 *                  models, sigma absent without MC passes)
 *  - weights:     single JSON document with base64 tensor payloads
 */

#include <stddef.h>

#if defined(_WIN32)
#define PX3D_API __declspec(dllexport)
#else
#define PX3D_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum px3d_status {
  PX3D_OK = 0,
  PX3D_ERROR_INVALID_ARGUMENT = 1, /* bad config/flag/pointer */
  PX3D_ERROR_IO = 2,               /* missing or unwritable file */
  PX3D_ERROR_RUNTIME = 3,          /* anything else (corrupt data, ...) */
} px3d_status;

/* Semantic version of the library, e.g. "0.1.0". Static storage. */
PX3D_API const char* px3d_version(void);

/* Message describing this thread's most recent failure; empty string when
 * the last call on this thread succeeded. Valid until the next API call on
 * the same thread. */
PX3D_API const char* px3d_last_error_message(void);

/* Frees a string returned through a char** out-parameter. NULL is a no-op. */
PX3D_API void px3d_string_free(char* s);

/* ---- analytic task error ------------------------------------------- */

/* Expected localization error (meters) of a height-blind monocular
 * estimator at ground-truth distance d_gt, under the named height
 * distribution ("adults" or "adults+teens"). Linear in d_gt. */
PX3D_API px3d_status px3d_task_error(const char* heights_preset, double d_gt,
                                     double* out_m);

/* CSV table "d,task_error" sampled at d = 0, step, ..., d_max. */
PX3D_API px3d_status px3d_task_error_curve_csv(const char* heights_preset,
                                               double d_max, double step,
                                               char** out_csv);

/* ---- synthetic data -------------------------------------------------- */

/* Writes a synthetic dataset (JSONL, ground truth attached) to out_path.
 *
 * config_json keys (defaults in parentheses):
 *   n                 record count, required, > 0
 *   seed              (0)
 *   noise_px          i.i.d. Gaussian keypoint noise, pixels (0)
 *   people_per_frame  records sharing a frame id (1)
 *   heights           "adults" | "adults+teens" ("adults")
 *   z_min, z_max      spawn depth range, meters (1, 40)
 *   x_frac            usable fraction of the horizontal frustum (0.8)
 *   camera_height     ground plane below the camera, meters (1.65)
 *   camera_height_jitter  per-frame uniform ground offset, meters (0);
 *                     nonzero removes the fixed ground-row depth cue
 *   image_width, image_height   (1242, 375)
 *   fx, fy, cx, cy    camera intrinsics (720, 720, 620, 190)
 */
PX3D_API px3d_status px3d_simulate(const char* config_json, const char* out_path);

/* ---- training --------------------------------------------------------- */

/* Trains the localization network on a ground-truth dataset and writes the
 * weight file. Optional sidecars: per-epoch objective CSV (history_csv_path)
 * and the geometric-baseline segment calibration (calibration_path; needs
 * at least 30 records).
 *
 * config_json keys: epochs (200), batch_size (512), learning_rate (1e-3),
 * p_drop (0.2), seed (0), loss ("laplace" | "l1" | "gaussian"),
 * weight_regularizer (true), augment_flip (true), hidden_width (1024),
 * hidden_layers (6).
 */
PX3D_API px3d_status px3d_train(const char* dataset_path, const char* config_json,
                                const char* weights_path,
                                const char* history_csv_path,
                                const char* calibration_path);

/* ---- inference --------------------------------------------------------- */

typedef struct px3d_model px3d_model;

PX3D_API px3d_status px3d_model_load(const char* weights_path,
                                     px3d_model** out_model);
PX3D_API void px3d_model_free(px3d_model* model);

/* JSON summary: architecture, loss, p_drop, dim_expectation. */
PX3D_API px3d_status px3d_model_info(const px3d_model* model, char** out_json);

/* Localizes every pose in a dataset/poses file and writes predictions JSONL.
 * Poses with fewer than 3 visible joints are rejected (the encoder cannot
 * normalize them).
 *
 * options_json keys: mc_passes (50; 0 disables MC dropout and omits sigma),
 * mc_samples (100, Laplace draws per pass), seed (0). Each record uses an
 * RNG stream derived from its index, so results do not depend on file
 * length or evaluation order.
 */
PX3D_API px3d_status px3d_predict_file(const px3d_model* model,
                                       const char* poses_path,
                                       const char* options_json,
                                       const char* out_path);

/* ---- evaluation -------------------------------------------------------- */

/* Matches predictions to a ground-truth dataset (greedy IoU per frame) and
 * writes the metric report as JSON, optionally as CSV rows and as the
 * "d,ale,task_error" curve table.
 *
 * options_json keys:
 *   iou_threshold   (0.3)
 *   interval        "auto" | "b" | "sigma" ("auto"): which predicted
 *                   uncertainty bounds the confidence interval; "auto"
 *                   prefers sigma when present, else b*d. Records lacking
 *                   the chosen quantity count as interval 0.
 *   heights         preset for the curve's task-error column ("adults")
 *   curve_bin_width meters (5)
 *   image_width, image_height   difficulty frame bounds (1242, 375)
 */
PX3D_API px3d_status px3d_evaluate(const char* predictions_path,
                                   const char* gt_path, const char* options_json,
                                   const char* report_json_path,
                                   const char* report_csv_path,
                                   const char* curve_csv_path);

/* ---- proxemics --------------------------------------------------------- */

/* Runs the F-formation / social-distancing monitor over a predictions file
 * or a ground-truth dataset (detected by schema) and returns the verdict
 * report through out_json:
 *   {"mode": ..., "seed": ..., "frames": [{"frame": id,
 *     "pairs": [{"i", "j", "vote_fraction", "interacting"}],
 *     "at_risk": [person indices]}]}
 * Person indices count poses in file order within each frame. "at_risk" is
 * populated in distancing mode and empty in interaction mode.
 *
 * options_json keys:
 *   mode           "interaction" | "distancing" ("distancing")
 *   ground_truth   use "gt" even when estimates are present (false)
 *   deterministic  force b = 0: single-shot check, no voting (false)
 *   seed (0), n_samples (100), threshold (0.25), d_max (2.0),
 *   radii ([0.3, 0.5, 1.0])
 */
PX3D_API px3d_status px3d_monitor(const char* input_path,
                                  const char* options_json, char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PROX3D_PROX3D_H */
