#pragma once

#include <Eigen/Dense>
#include <array>
#include <string_view>
#include <vector>

#include "core/geometry.hpp"
#include "core/pose.hpp"
#include "core/rng.hpp"

namespace prox3d {

// Output head layout (9 units).
enum HeadIndex : int {
  kHeadDRaw = 0,   // distance before the softplus floor
  kHeadS = 1,      // log of the relative Laplace spread
  kHeadBeta = 2,
  kHeadPsi = 3,
  kHeadSinAlpha = 4,
  kHeadCosAlpha = 5,
  kHeadDimW = 6,   // box-dimension offsets from the training-set mean
  kHeadDimH = 7,
  kHeadDimL = 8,
};
inline constexpr int kOutputDim = 9;

struct Architecture {
  int input_dim = kInputDim;
  int hidden_width = 1024;
  // stem layer + residual blocks spanning pairs of layers + one plain
  // tail layer when the count is even (6 -> stem, (1,2), (3,4), plain 5)
  int hidden_layers = 6;
};

struct Layer {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;
  // batch-norm scale/shift and running statistics (population variance)
  Eigen::VectorXd gamma, beta;
  Eigen::VectorXd run_mean, run_var;
};

struct NetworkParams {
  Architecture arch;
  std::vector<Layer> hidden;
  Eigen::MatrixXd head_w;  // kOutputDim x width
  Eigen::VectorXd head_b;
  double p_drop = 0.2;
  // mean (w, h, l) of the training split; dims are regressed as offsets
  Eigen::Vector3d dim_expectation{0.6, 1.715, 0.5};
};

// He-normal weights, identity batch norm, zero biases.
NetworkParams init_params(const Architecture& arch, double p_drop, Rng& rng);

// Activations recorded by the training-mode forward pass.
struct LayerCache {
  Eigen::MatrixXd x_in;
  Eigen::MatrixXd z;        // linear output
  Eigen::MatrixXd x_hat;    // batch-normalized
  Eigen::VectorXd mean, inv_std;
  Eigen::VectorXd var;      // biased batch variance
  Eigen::MatrixXd relu_mask;
  Eigen::MatrixXd drop_mask;  // includes the 1/(1-p) scaling
};

struct ForwardCache {
  Eigen::MatrixXd input;
  std::vector<LayerCache> layers;
  Eigen::MatrixXd features;  // activation entering the head
};

// Columns are samples. Eval: running stats, no dropout. MC: running
// stats, dropout active. Train: batch stats + dropout, activations cached;
// running statistics are NOT touched — call update_running_stats with the
// cache to apply the EMA step (kept separate so that loss evaluations are
// side-effect free, e.g. for finite-difference checks).
Eigen::MatrixXd forward_eval(const NetworkParams& params, const Eigen::MatrixXd& x);
Eigen::MatrixXd forward_mc(const NetworkParams& params, const Eigen::MatrixXd& x,
                           Rng& rng);
Eigen::MatrixXd forward_train(const NetworkParams& params, const Eigen::MatrixXd& x,
                              Rng& rng, ForwardCache& cache);

// run <- 0.9 * run + 0.1 * batch, per layer.
void update_running_stats(NetworkParams& params, const ForwardCache& cache);

struct Gradients {
  struct LayerGrad {
    Eigen::MatrixXd w;
    Eigen::VectorXd b, gamma, beta;
  };
  std::vector<LayerGrad> hidden;
  Eigen::MatrixXd head_w;
  Eigen::VectorXd head_b;
};

// Exact reverse-mode gradients of the cached training forward pass given
// d(loss)/d(head output).
Gradients backward(const NetworkParams& params, const ForwardCache& cache,
                   const Eigen::MatrixXd& head_grad);

// ---- losses ----------------------------------------------------------

enum class LossKind { kLaplace, kL1, kGaussian };

// "laplace" | "l1" | "gaussian"; loss_from_name throws on anything else.
const char* loss_name(LossKind kind);
LossKind loss_from_name(std::string_view name);

// |1 - d/x| / b + log(2b)
double laplace_loss(double x, double d, double b);
// |1 - d/x|
double l1_relative_loss(double x, double d);
// (1 - d/x)^2 / (2 sigma^2) + 0.5 log(sigma^2)
double gaussian_loss(double x, double d, double sigma);

// Regression targets derived from ground truth.
struct Targets {
  double d = 0.0;
  double beta = 0.0, psi = 0.0;
  double sin_alpha = 0.0, cos_alpha = 0.0;
  Eigen::Vector3d dim_offset{0.0, 0.0, 0.0};
};
Targets targets_from_gt(const GroundTruth& gt, const Eigen::Vector3d& dim_expectation);

double softplus(double x);
inline double distance_from_raw(double raw) { return 0.5 + softplus(raw); }

// Unweighted sum: distance term (per `kind`) + L1 on beta, psi, the
// (sin, cos) pair, and the dimension offsets. `head` is one output column.
double total_loss(const Eigen::VectorXd& head, const Targets& t, LossKind kind);

// Mean loss over the batch; optionally writes d(mean loss)/d(head).
double batch_loss(const Eigen::MatrixXd& head, const std::vector<Targets>& targets,
                  LossKind kind, Eigen::MatrixXd* head_grad = nullptr);

// (1 - p_drop) / (2N) * sum of squared weight-matrix entries.
double dropout_regularizer(const NetworkParams& params, double p_drop, int n);

// ---- inference -------------------------------------------------------

struct LocalizationEstimate {
  double d = 0.0;      // meters
  double b = 0.0;      // Laplace spread over relative distance, exp(s);
                       // multiply by d for the meter-scale interval d*(1 +- b)
  bool has_b = true;   // false for L1-trained models (no spread head)
  double beta = 0.0, psi = 0.0;
  double sin_alpha = 0.0, cos_alpha = 0.0;
  double theta = 0.0;  // decoded body yaw
  std::array<double, 3> dims{};
  double sigma = 0.0;  // combined uncertainty, meters (MC only)
  bool has_sigma = false;

  CartesianLocation xyz() const;
};

LocalizationEstimate decode_estimate(const Eigen::VectorXd& head,
                                     const Eigen::Vector3d& dim_expectation,
                                     LossKind kind);

// Single deterministic (eval-mode) pass.
LocalizationEstimate predict(const NetworkParams& params, const InputVector& input,
                             LossKind kind = LossKind::kLaplace);

// T stochastic passes, I Laplace samples per pass; sigma is the population
// standard deviation of all T*I sampled distances and d the mean over
// passes. Pass t uses the RNG stream derived from (pass index), so results
// do not depend on evaluation order.
LocalizationEstimate predict_mc(const NetworkParams& params, const InputVector& input,
                                int t_passes, int i_samples, const Rng& rng,
                                LossKind kind = LossKind::kLaplace);

}  // namespace prox3d
