#include "core/height_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "core/geometry.hpp"

namespace prox3d {
namespace {

constexpr double kQuadHalfWidthSigmas = 6.0;
constexpr int kQuadNodesPerPiece = 64;

double normal_pdf(double x, double mean, double std) {
  const double z = (x - mean) / std;
  return std::exp(-0.5 * z * z) / (std * std::sqrt(2.0 * kPi));
}

// integral of |1 - h_ref/h| * pdf(h) over [lo, hi]
double piece_integral(const QuadratureRule& rule, double lo, double hi,
                      double h_ref, double mean, double std) {
  if (hi <= lo) return 0.0;
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double h = mid + half * rule.nodes[k];
    acc += rule.weights[k] * std::abs(1.0 - h_ref / h) * normal_pdf(h, mean, std);
  }
  return half * acc;
}

}  // namespace

HeightDistribution::HeightDistribution(std::vector<HeightComponent> components)
    : components_(std::move(components)) {
  if (components_.empty())
    throw std::invalid_argument("height distribution needs at least one component");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.std_m > 0.0))
      throw std::invalid_argument("height component std must be positive");
    if (!(c.weight > 0.0))
      throw std::invalid_argument("height component weight must be positive");
    if (!(c.mean_m > 0.0))
      throw std::invalid_argument("height component mean must be positive");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("height component weights must sum to 1");
}

HeightDistribution HeightDistribution::preset(std::string_view name) {
  if (name == "adults") {
    return HeightDistribution({{1.78, 0.07, 0.5}, {1.65, 0.07, 0.5}});
  }
  if (name == "adults+teens") {
    // Teens widen each sex's spread; extra CoV combines in quadrature with
    // the adult 7 cm.
    const double male_std = std::sqrt(0.07 * 0.07 + std::pow(0.079 * 1.78, 2));
    const double female_std = std::sqrt(0.07 * 0.07 + std::pow(0.056 * 1.65, 2));
    return HeightDistribution({{1.78, male_std, 0.5}, {1.65, female_std, 0.5}});
  }
  throw std::invalid_argument("unknown height preset: " + std::string(name));
}

double HeightDistribution::mean() const {
  double m = 0.0;
  for (const auto& c : components_) m += c.weight * c.mean_m;
  return m;
}

double HeightDistribution::sample(Rng& rng) const {
  double u = rng.uniform01();
  for (const auto& c : components_) {
    if (u < c.weight) return c.mean_m + c.std_m * rng.normal();
    u -= c.weight;
  }
  const auto& last = components_.back();
  return last.mean_m + last.std_m * rng.normal();
}

double height_ambiguity_factor(const HeightDistribution& dist) {
  static const QuadratureRule rule = gauss_legendre(kQuadNodesPerPiece);
  const double h_ref = dist.mean();
  double acc = 0.0;
  for (const auto& c : dist.components()) {
    const double lo = c.mean_m - kQuadHalfWidthSigmas * c.std_m;
    const double hi = c.mean_m + kQuadHalfWidthSigmas * c.std_m;
    // |1 - h_ref/h| has a kink at h_ref; split there so each piece is smooth.
    const double split = std::clamp(h_ref, lo, hi);
    acc += c.weight * (piece_integral(rule, lo, split, h_ref, c.mean_m, c.std_m) +
                       piece_integral(rule, split, hi, h_ref, c.mean_m, c.std_m));
  }
  return acc;
}

double task_error(const HeightDistribution& dist, double d_gt) {
  if (d_gt < 0.0) throw std::invalid_argument("distance must be non-negative");
  return d_gt * height_ambiguity_factor(dist);
}

std::vector<std::pair<double, double>> task_error_curve(
    const HeightDistribution& dist, double d_max, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("curve step must be positive");
  if (d_max < 0.0) throw std::invalid_argument("curve range must be non-negative");
  const double factor = height_ambiguity_factor(dist);
  std::vector<std::pair<double, double>> rows;
  for (int i = 0;; ++i) {
    const double d = i * step;
    if (d > d_max + 1e-9 * step) break;
    rows.emplace_back(d, d * factor);
  }
  return rows;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature order must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on Legendre P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace prox3d
