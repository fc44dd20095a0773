#include "core/network.hpp"

#include <cmath>
#include <stdexcept>

namespace prox3d {
namespace {

constexpr double kBnEps = 1e-5;
constexpr double kBnMomentum = 0.1;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// residual spans over hidden layers: stem 0, then pairs, then an optional
// plain tail layer
std::vector<std::pair<int, int>> residual_spans(int hidden_layers) {
  std::vector<std::pair<int, int>> spans;
  int i = 1;
  while (i + 1 < hidden_layers) {
    spans.emplace_back(i, i + 1);
    i += 2;
  }
  return spans;
}

int plain_tail(int hidden_layers) {
  int i = 1;
  while (i + 1 < hidden_layers) i += 2;
  return i < hidden_layers ? i : -1;
}

void check_input(const NetworkParams& params, const Eigen::MatrixXd& x) {
  if (x.rows() != params.arch.input_dim)
    throw std::invalid_argument("input dimension mismatch");
  if (static_cast<int>(params.hidden.size()) != params.arch.hidden_layers)
    throw std::invalid_argument("layer count does not match the architecture");
}

Eigen::MatrixXd sample_drop_mask(Eigen::Index rows, Eigen::Index cols, double p,
                                 Rng& rng) {
  Eigen::MatrixXd mask(rows, cols);
  if (p <= 0.0) {
    mask.setOnes();
    return mask;
  }
  const double scale = 1.0 / (1.0 - p);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      mask(i, j) = rng.uniform01() < p ? 0.0 : scale;
    }
  }
  return mask;
}

// eval/mc-mode layer: running statistics; dropout mask optional
Eigen::MatrixXd layer_inference(const Layer& layer, const Eigen::MatrixXd& x,
                                double p_drop, Rng* rng) {
  Eigen::MatrixXd y = (layer.w * x).colwise() + layer.b;
  const Eigen::ArrayXd inv_std = (layer.run_var.array() + kBnEps).rsqrt();
  y.array().colwise() -= layer.run_mean.array();
  y.array().colwise() *= layer.gamma.array() * inv_std;
  y.array().colwise() += layer.beta.array();
  y = y.cwiseMax(0.0);
  if (rng) y.array() *= sample_drop_mask(y.rows(), y.cols(), p_drop, *rng).array();
  return y;
}

Eigen::MatrixXd layer_train(const Layer& layer, const Eigen::MatrixXd& x,
                            double p_drop, Rng& rng, LayerCache& cache) {
  cache.x_in = x;
  cache.z = (layer.w * x).colwise() + layer.b;
  const auto b = static_cast<double>(cache.z.cols());
  cache.mean = cache.z.rowwise().mean();
  Eigen::MatrixXd centered = cache.z.colwise() - cache.mean;
  cache.var = centered.array().square().rowwise().sum() / b;
  cache.inv_std = (cache.var.array() + kBnEps).rsqrt();
  cache.x_hat = centered.array().colwise() * cache.inv_std.array();
  Eigen::MatrixXd y = cache.x_hat.array().colwise() * layer.gamma.array();
  y.array().colwise() += layer.beta.array();
  cache.relu_mask = (y.array() > 0.0).cast<double>();
  y = y.cwiseProduct(cache.relu_mask);
  cache.drop_mask = sample_drop_mask(y.rows(), y.cols(), p_drop, rng);
  return y.cwiseProduct(cache.drop_mask);
}

// reverse of layer_train given dL/d(layer output); fills grads, returns
// dL/d(layer input)
Eigen::MatrixXd layer_backward(const Layer& layer, const LayerCache& cache,
                               const Eigen::MatrixXd& g_out,
                               Gradients::LayerGrad& grad) {
  const Eigen::MatrixXd g_relu =
      g_out.cwiseProduct(cache.drop_mask).cwiseProduct(cache.relu_mask);
  grad.gamma = g_relu.cwiseProduct(cache.x_hat).rowwise().sum();
  grad.beta = g_relu.rowwise().sum();
  const Eigen::MatrixXd dx_hat = g_relu.array().colwise() * layer.gamma.array();
  const auto b = static_cast<double>(g_out.cols());
  const Eigen::VectorXd sum1 = dx_hat.rowwise().sum();
  const Eigen::VectorXd sum2 = dx_hat.cwiseProduct(cache.x_hat).rowwise().sum();
  Eigen::MatrixXd dz = b * dx_hat;
  dz.colwise() -= sum1;
  dz.array() -= cache.x_hat.array().colwise() * sum2.array();
  dz.array().colwise() *= cache.inv_std.array() / b;
  grad.w = dz * cache.x_in.transpose();
  grad.b = dz.rowwise().sum();
  return layer.w.transpose() * dz;
}

}  // namespace

NetworkParams init_params(const Architecture& arch, double p_drop, Rng& rng) {
  if (arch.input_dim <= 0 || arch.hidden_width <= 0 || arch.hidden_layers <= 0 ||
      p_drop < 0.0 || p_drop >= 1.0)
    throw std::invalid_argument("invalid architecture or dropout probability");
  NetworkParams params;
  params.arch = arch;
  params.p_drop = p_drop;
  params.hidden.resize(static_cast<std::size_t>(arch.hidden_layers));
  for (int l = 0; l < arch.hidden_layers; ++l) {
    Layer& layer = params.hidden[static_cast<std::size_t>(l)];
    const int fan_in = l == 0 ? arch.input_dim : arch.hidden_width;
    const double std = std::sqrt(2.0 / fan_in);
    layer.w.resize(arch.hidden_width, fan_in);
    for (Eigen::Index i = 0; i < layer.w.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.w.cols(); ++j)
        layer.w(i, j) = std * rng.normal();
    layer.b = Eigen::VectorXd::Zero(arch.hidden_width);
    layer.gamma = Eigen::VectorXd::Ones(arch.hidden_width);
    layer.beta = Eigen::VectorXd::Zero(arch.hidden_width);
    layer.run_mean = Eigen::VectorXd::Zero(arch.hidden_width);
    layer.run_var = Eigen::VectorXd::Ones(arch.hidden_width);
  }
  const double head_std = std::sqrt(1.0 / arch.hidden_width);
  params.head_w.resize(kOutputDim, arch.hidden_width);
  for (Eigen::Index i = 0; i < params.head_w.rows(); ++i)
    for (Eigen::Index j = 0; j < params.head_w.cols(); ++j)
      params.head_w(i, j) = head_std * rng.normal();
  params.head_b = Eigen::VectorXd::Zero(kOutputDim);
  return params;
}

template <typename LayerFn>
static Eigen::MatrixXd walk_layers(const NetworkParams& params,
                                   const Eigen::MatrixXd& x, LayerFn&& fn) {
  Eigen::MatrixXd cur = fn(0, x);
  for (const auto& [a, b] : residual_spans(params.arch.hidden_layers)) {
    Eigen::MatrixXd block_in = cur;
    cur = fn(a, cur);
    cur = fn(b, cur);
    cur += block_in;
  }
  const int tail = plain_tail(params.arch.hidden_layers);
  if (tail > 0) cur = fn(tail, cur);
  return cur;
}

Eigen::MatrixXd forward_eval(const NetworkParams& params, const Eigen::MatrixXd& x) {
  check_input(params, x);
  const Eigen::MatrixXd features =
      walk_layers(params, x, [&](int l, const Eigen::MatrixXd& in) {
        return layer_inference(params.hidden[static_cast<std::size_t>(l)], in, 0.0,
                               nullptr);
      });
  return (params.head_w * features).colwise() + params.head_b;
}

Eigen::MatrixXd forward_mc(const NetworkParams& params, const Eigen::MatrixXd& x,
                           Rng& rng) {
  check_input(params, x);
  const Eigen::MatrixXd features =
      walk_layers(params, x, [&](int l, const Eigen::MatrixXd& in) {
        return layer_inference(params.hidden[static_cast<std::size_t>(l)], in,
                               params.p_drop, &rng);
      });
  return (params.head_w * features).colwise() + params.head_b;
}

Eigen::MatrixXd forward_train(const NetworkParams& params, const Eigen::MatrixXd& x,
                              Rng& rng, ForwardCache& cache) {
  check_input(params, x);
  cache.input = x;
  cache.layers.assign(static_cast<std::size_t>(params.arch.hidden_layers),
                      LayerCache{});
  cache.features = walk_layers(params, x, [&](int l, const Eigen::MatrixXd& in) {
    return layer_train(params.hidden[static_cast<std::size_t>(l)], in, params.p_drop,
                       rng, cache.layers[static_cast<std::size_t>(l)]);
  });
  return (params.head_w * cache.features).colwise() + params.head_b;
}

void update_running_stats(NetworkParams& params, const ForwardCache& cache) {
  for (std::size_t l = 0; l < params.hidden.size(); ++l) {
    Layer& layer = params.hidden[l];
    const LayerCache& c = cache.layers[l];
    layer.run_mean = (1.0 - kBnMomentum) * layer.run_mean + kBnMomentum * c.mean;
    layer.run_var = (1.0 - kBnMomentum) * layer.run_var + kBnMomentum * c.var;
  }
}

Gradients backward(const NetworkParams& params, const ForwardCache& cache,
                   const Eigen::MatrixXd& head_grad) {
  Gradients grads;
  grads.hidden.resize(params.hidden.size());
  grads.head_w = head_grad * cache.features.transpose();
  grads.head_b = head_grad.rowwise().sum();

  Eigen::MatrixXd g = params.head_w.transpose() * head_grad;
  const int tail = plain_tail(params.arch.hidden_layers);
  if (tail > 0) {
    g = layer_backward(params.hidden[static_cast<std::size_t>(tail)],
                       cache.layers[static_cast<std::size_t>(tail)], g,
                       grads.hidden[static_cast<std::size_t>(tail)]);
  }
  const auto spans = residual_spans(params.arch.hidden_layers);
  for (auto it = spans.rbegin(); it != spans.rend(); ++it) {
    const auto [a, b] = *it;
    const Eigen::MatrixXd skip = g;
    g = layer_backward(params.hidden[static_cast<std::size_t>(b)],
                       cache.layers[static_cast<std::size_t>(b)], g,
                       grads.hidden[static_cast<std::size_t>(b)]);
    g = layer_backward(params.hidden[static_cast<std::size_t>(a)],
                       cache.layers[static_cast<std::size_t>(a)], g,
                       grads.hidden[static_cast<std::size_t>(a)]);
    g += skip;
  }
  layer_backward(params.hidden[0], cache.layers[0], g, grads.hidden[0]);
  return grads;
}

const char* loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::kLaplace: return "laplace";
    case LossKind::kL1: return "l1";
    case LossKind::kGaussian: return "gaussian";
  }
  throw std::invalid_argument("unknown loss kind");
}

LossKind loss_from_name(std::string_view name) {
  if (name == "laplace") return LossKind::kLaplace;
  if (name == "l1") return LossKind::kL1;
  if (name == "gaussian") return LossKind::kGaussian;
  throw std::invalid_argument("unknown loss '" + std::string(name) +
                              "'; expected laplace, l1, or gaussian");
}

double laplace_loss(double x, double d, double b) {
  if (!(x > 0.0) || !(b > 0.0))
    throw std::invalid_argument("laplace_loss needs x > 0 and b > 0");
  return std::abs(1.0 - d / x) / b + std::log(2.0 * b);
}

double l1_relative_loss(double x, double d) {
  if (!(x > 0.0)) throw std::invalid_argument("l1_relative_loss needs x > 0");
  return std::abs(1.0 - d / x);
}

double gaussian_loss(double x, double d, double sigma) {
  if (!(x > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("gaussian_loss needs x > 0 and sigma > 0");
  const double r = 1.0 - d / x;
  return r * r / (2.0 * sigma * sigma) + 0.5 * std::log(sigma * sigma);
}

Targets targets_from_gt(const GroundTruth& gt,
                        const Eigen::Vector3d& dim_expectation) {
  const SphericalLocation s = spherical_from_cartesian(gt.xyz);
  const double alpha = viewpoint_from_orientation(gt.theta, s.beta);
  Targets t;
  t.d = s.d;
  t.beta = s.beta;
  t.psi = s.psi;
  t.sin_alpha = std::sin(alpha);
  t.cos_alpha = std::cos(alpha);
  for (int k = 0; k < 3; ++k)
    t.dim_offset[k] = gt.dims[static_cast<std::size_t>(k)] - dim_expectation[k];
  return t;
}

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

namespace {

// distance + spread terms and their gradients w.r.t. head[0], head[1]
double distance_term(const Eigen::VectorXd& head, const Targets& t, LossKind kind,
                     double* g_draw, double* g_s) {
  const double d = distance_from_raw(head[kHeadDRaw]);
  const double dd_draw = sigmoid(head[kHeadDRaw]);
  const double rel = 1.0 - d / t.d;
  const double s = head[kHeadS];
  double loss = 0.0, gd = 0.0, gs = 0.0;
  switch (kind) {
    case LossKind::kLaplace: {
      const double inv_b = std::exp(-s);
      loss = std::abs(rel) * inv_b + s + std::log(2.0);
      gd = -sign(rel) / t.d * inv_b;
      gs = -std::abs(rel) * inv_b + 1.0;
      break;
    }
    case LossKind::kL1:
      loss = std::abs(rel);
      gd = -sign(rel) / t.d;
      gs = 0.0;
      break;
    case LossKind::kGaussian: {
      const double inv_var = std::exp(-2.0 * s);
      loss = 0.5 * rel * rel * inv_var + s;
      gd = -rel / t.d * inv_var;
      gs = -rel * rel * inv_var + 1.0;
      break;
    }
  }
  if (g_draw) *g_draw = gd * dd_draw;
  if (g_s) *g_s = gs;
  return loss;
}

double l1_term(double pred, double target, double* grad) {
  if (grad) *grad = sign(pred - target);
  return std::abs(pred - target);
}

}  // namespace

double total_loss(const Eigen::VectorXd& head, const Targets& t, LossKind kind) {
  if (head.size() != kOutputDim)
    throw std::invalid_argument("head output must have 9 entries");
  double loss = distance_term(head, t, kind, nullptr, nullptr);
  loss += l1_term(head[kHeadBeta], t.beta, nullptr);
  loss += l1_term(head[kHeadPsi], t.psi, nullptr);
  loss += l1_term(head[kHeadSinAlpha], t.sin_alpha, nullptr);
  loss += l1_term(head[kHeadCosAlpha], t.cos_alpha, nullptr);
  for (int k = 0; k < 3; ++k)
    loss += l1_term(head[kHeadDimW + k], t.dim_offset[k], nullptr);
  return loss;
}

double batch_loss(const Eigen::MatrixXd& head, const std::vector<Targets>& targets,
                  LossKind kind, Eigen::MatrixXd* head_grad) {
  if (head.cols() != static_cast<Eigen::Index>(targets.size()) ||
      head.rows() != kOutputDim)
    throw std::invalid_argument("head/target shape mismatch");
  const auto n = static_cast<double>(targets.size());
  if (head_grad) head_grad->setZero(kOutputDim, head.cols());
  double total = 0.0;
  for (Eigen::Index c = 0; c < head.cols(); ++c) {
    const Targets& t = targets[static_cast<std::size_t>(c)];
    const Eigen::VectorXd col = head.col(c);
    double g_draw = 0.0, g_s = 0.0;
    total += distance_term(col, t, kind, &g_draw, &g_s);
    double gb = 0.0, gp = 0.0, gsin = 0.0, gcos = 0.0;
    total += l1_term(col[kHeadBeta], t.beta, &gb);
    total += l1_term(col[kHeadPsi], t.psi, &gp);
    total += l1_term(col[kHeadSinAlpha], t.sin_alpha, &gsin);
    total += l1_term(col[kHeadCosAlpha], t.cos_alpha, &gcos);
    double gdim[3];
    for (int k = 0; k < 3; ++k)
      total += l1_term(col[kHeadDimW + k], t.dim_offset[k], &gdim[k]);
    if (head_grad) {
      auto g = head_grad->col(c);
      g[kHeadDRaw] = g_draw / n;
      g[kHeadS] = g_s / n;
      g[kHeadBeta] = gb / n;
      g[kHeadPsi] = gp / n;
      g[kHeadSinAlpha] = gsin / n;
      g[kHeadCosAlpha] = gcos / n;
      for (int k = 0; k < 3; ++k) g[kHeadDimW + k] = gdim[k] / n;
    }
  }
  return total / n;
}

double dropout_regularizer(const NetworkParams& params, double p_drop, int n) {
  if (n <= 0) throw std::invalid_argument("regularizer needs n > 0");
  double sq = 0.0;
  for (const auto& layer : params.hidden) sq += layer.w.squaredNorm();
  sq += params.head_w.squaredNorm();
  return (1.0 - p_drop) / (2.0 * n) * sq;
}

CartesianLocation LocalizationEstimate::xyz() const {
  return cartesian_from_spherical({d, beta, psi});
}

LocalizationEstimate decode_estimate(const Eigen::VectorXd& head,
                                     const Eigen::Vector3d& dim_expectation,
                                     LossKind kind) {
  if (head.size() != kOutputDim)
    throw std::invalid_argument("head output must have 9 entries");
  LocalizationEstimate e;
  e.d = distance_from_raw(head[kHeadDRaw]);
  e.has_b = kind != LossKind::kL1;
  e.b = e.has_b ? std::exp(head[kHeadS]) : 0.0;
  e.beta = head[kHeadBeta];
  e.psi = std::clamp(head[kHeadPsi], 0.0, kPi);
  e.sin_alpha = head[kHeadSinAlpha];
  e.cos_alpha = head[kHeadCosAlpha];
  if (e.sin_alpha == 0.0 && e.cos_alpha == 0.0) {
    e.theta = wrap_angle(-e.beta);  // untrained head; alpha defaults to 0
  } else {
    e.theta = decode_orientation(e.sin_alpha, e.cos_alpha, e.beta);
  }
  for (int k = 0; k < 3; ++k)
    e.dims[static_cast<std::size_t>(k)] = dim_expectation[k] + head[kHeadDimW + k];
  return e;
}

LocalizationEstimate predict(const NetworkParams& params, const InputVector& input,
                             LossKind kind) {
  Eigen::MatrixXd x(kInputDim, 1);
  for (int i = 0; i < kInputDim; ++i) x(i, 0) = input[static_cast<std::size_t>(i)];
  return decode_estimate(forward_eval(params, x).col(0), params.dim_expectation,
                         kind);
}

LocalizationEstimate predict_mc(const NetworkParams& params, const InputVector& input,
                                int t_passes, int i_samples, const Rng& rng,
                                LossKind kind) {
  if (t_passes < 1 || i_samples < 1)
    throw std::invalid_argument("predict_mc needs T >= 1 and I >= 1");
  Eigen::MatrixXd x(kInputDim, 1);
  for (int i = 0; i < kInputDim; ++i) x(i, 0) = input[static_cast<std::size_t>(i)];

  LocalizationEstimate estimate =
      decode_estimate(forward_eval(params, x).col(0), params.dim_expectation, kind);

  double d_sum = 0.0;
  double sample_sum = 0.0, sample_sq = 0.0;
  const double n_samples = static_cast<double>(t_passes) * i_samples;
  for (int t = 0; t < t_passes; ++t) {
    Rng pass_rng = rng.derive(static_cast<std::uint64_t>(t));
    const Eigen::VectorXd head = forward_mc(params, x, pass_rng).col(0);
    const double d_t = distance_from_raw(head[kHeadDRaw]);
    // relative spread unnormalized to meters before sampling
    const double b_t =
        kind == LossKind::kL1 ? 0.0 : std::exp(head[kHeadS]) * d_t;
    d_sum += d_t;
    for (int i = 0; i < i_samples; ++i) {
      const double v = kind == LossKind::kGaussian
                           ? pass_rng.normal(d_t, b_t)
                           : pass_rng.laplace(d_t, b_t);
      sample_sum += v;
      sample_sq += v * v;
    }
  }
  const double mean = sample_sum / n_samples;
  const double var = std::max(0.0, sample_sq / n_samples - mean * mean);
  estimate.d = d_sum / t_passes;
  estimate.sigma = std::sqrt(var);
  estimate.has_sigma = true;
  return estimate;
}

}  // namespace prox3d
