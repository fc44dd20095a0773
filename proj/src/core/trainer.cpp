#include "core/trainer.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace prox3d {
namespace {

struct Sample {
  InputVector input;
  Targets targets;
};

void validate(const TrainingConfig& c) {
  if (c.epochs <= 0 || c.learning_rate <= 0.0 || c.batch_size <= 0 ||
      c.beta1 < 0.0 || c.beta1 >= 1.0 || c.beta2 < 0.0 || c.beta2 >= 1.0 ||
      c.adam_eps <= 0.0 || c.p_drop < 0.0 || c.p_drop >= 1.0)
    throw std::invalid_argument("invalid training configuration");
}

// Adam moment buffers shaped like the trainable tensors.
struct Moments {
  Gradients m, v;
};

Moments zero_moments(const NetworkParams& params) {
  Moments s;
  s.m.hidden.resize(params.hidden.size());
  s.v.hidden.resize(params.hidden.size());
  for (std::size_t l = 0; l < params.hidden.size(); ++l) {
    const Layer& layer = params.hidden[l];
    for (Gradients* g : {&s.m, &s.v}) {
      g->hidden[l].w = Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols());
      g->hidden[l].b = Eigen::VectorXd::Zero(layer.b.size());
      g->hidden[l].gamma = Eigen::VectorXd::Zero(layer.gamma.size());
      g->hidden[l].beta = Eigen::VectorXd::Zero(layer.beta.size());
    }
  }
  for (Gradients* g : {&s.m, &s.v}) {
    g->head_w = Eigen::MatrixXd::Zero(params.head_w.rows(), params.head_w.cols());
    g->head_b = Eigen::VectorXd::Zero(params.head_b.size());
  }
  return s;
}

template <typename Tensor>
void adam_step(Tensor& param, Tensor& m, Tensor& v, const Tensor& grad,
               const TrainingConfig& c, double bc1, double bc2) {
  m = c.beta1 * m + (1.0 - c.beta1) * grad;
  v = c.beta2 * v + (1.0 - c.beta2) * grad.cwiseProduct(grad);
  param.array() -=
      c.learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + c.adam_eps);
}

}  // namespace

void flip_sample(InputVector& input, Targets& targets) {
  for (int j = 0; j < kNumJoints; ++j) input[2 * j] = -input[2 * j];
  for (const auto& [l, r] : kLeftRightPairs) {
    std::swap(input[2 * l], input[2 * r]);
    std::swap(input[2 * l + 1], input[2 * r + 1]);
    std::swap(input[2 * kNumJoints + l], input[2 * kNumJoints + r]);
  }
  targets.beta = wrap_angle(-targets.beta);
  targets.cos_alpha = -targets.cos_alpha;  // alpha -> pi - alpha
}

TrainingResult train(const std::vector<Record>& dataset, const Architecture& arch,
                     const TrainingConfig& config) {
  validate(config);
  if (dataset.empty()) throw std::invalid_argument("training set is empty");
  if (arch.input_dim != kInputDim)
    throw std::invalid_argument("architecture input width must match the pose encoding");

  Eigen::Vector3d dim_expectation = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!dataset[i].gt)
      throw std::invalid_argument("record " + std::to_string(i) +
                                  " has no ground truth");
    for (int k = 0; k < 3; ++k)
      dim_expectation[k] += dataset[i].gt->dims[static_cast<std::size_t>(k)];
  }
  dim_expectation /= static_cast<double>(dataset.size());

  std::vector<Sample> plain(dataset.size()), mirrored(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    plain[i].input = normalize_pose(dataset[i].pose, dataset[i].intrinsics);
    plain[i].targets = targets_from_gt(*dataset[i].gt, dim_expectation);
    mirrored[i] = plain[i];
    flip_sample(mirrored[i].input, mirrored[i].targets);
  }

  Rng rng(config.seed);
  TrainingResult result;
  result.params = init_params(arch, config.p_drop, rng);
  result.params.dim_expectation = dim_expectation;
  NetworkParams& params = result.params;

  Moments adam = zero_moments(params);
  long step = 0;
  const auto n = dataset.size();
  const bool use_reg = config.weight_regularizer && config.p_drop > 0.0;
  const double reg_coeff = (1.0 - config.p_drop) / static_cast<double>(n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Eigen::MatrixXd x, head, head_grad;
  std::vector<Targets> batch_targets;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double epoch_objective = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < n;
         start += static_cast<std::size_t>(config.batch_size)) {
      const auto b = std::min(static_cast<std::size_t>(config.batch_size), n - start);
      x.resize(kInputDim, static_cast<Eigen::Index>(b));
      batch_targets.resize(b);
      for (std::size_t k = 0; k < b; ++k) {
        const std::size_t idx = order[start + k];
        const bool flip = config.augment_flip && rng.bernoulli(0.5);
        const Sample& s = flip ? mirrored[idx] : plain[idx];
        x.col(static_cast<Eigen::Index>(k)) =
            Eigen::Map<const Eigen::VectorXd>(s.input.data(), kInputDim);
        batch_targets[k] = s.targets;
      }

      ForwardCache cache;
      head = forward_train(params, x, rng, cache);
      double objective = batch_loss(head, batch_targets, config.loss, &head_grad);
      Gradients grads = backward(params, cache, head_grad);
      if (use_reg) {
        objective +=
            dropout_regularizer(params, config.p_drop, static_cast<int>(n));
        for (std::size_t l = 0; l < params.hidden.size(); ++l)
          grads.hidden[l].w += reg_coeff * params.hidden[l].w;
        grads.head_w += reg_coeff * params.head_w;
      }
      if (!std::isfinite(objective))
        throw std::runtime_error("training diverged at epoch " +
                                 std::to_string(epoch) + ", batch " +
                                 std::to_string(batches) +
                                 " (objective = " + std::to_string(objective) + ")");
      update_running_stats(params, cache);

      ++step;
      const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      for (std::size_t l = 0; l < params.hidden.size(); ++l) {
        Layer& layer = params.hidden[l];
        Gradients::LayerGrad& g = grads.hidden[l];
        adam_step(layer.w, adam.m.hidden[l].w, adam.v.hidden[l].w, g.w, config,
                  bc1, bc2);
        adam_step(layer.b, adam.m.hidden[l].b, adam.v.hidden[l].b, g.b, config,
                  bc1, bc2);
        adam_step(layer.gamma, adam.m.hidden[l].gamma, adam.v.hidden[l].gamma,
                  g.gamma, config, bc1, bc2);
        adam_step(layer.beta, adam.m.hidden[l].beta, adam.v.hidden[l].beta,
                  g.beta, config, bc1, bc2);
      }
      adam_step(params.head_w, adam.m.head_w, adam.v.head_w, grads.head_w, config,
                bc1, bc2);
      adam_step(params.head_b, adam.m.head_b, adam.v.head_b, grads.head_b, config,
                bc1, bc2);

      epoch_objective += objective;
      ++batches;
    }
    result.history.push_back(epoch_objective / batches);
  }
  return result;
}

}  // namespace prox3d
