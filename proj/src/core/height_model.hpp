#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "core/rng.hpp"

namespace prox3d {

// Gaussian mixture over human stature, meters.
struct HeightComponent {
  double mean_m = 0.0;
  double std_m = 0.0;
  double weight = 0.0;
};

class HeightDistribution {
 public:
  // Validates: weights positive and summing to 1 within 1e-12, stds positive.
  explicit HeightDistribution(std::vector<HeightComponent> components);

  // Named presets usable from the CLI:
  //   "adults"       equal-weight mixture of N(1.78, 0.07) and N(1.65, 0.07)
  //   "adults+teens" same means, stds inflated by the extra coefficient of
  //                  variation teen inclusion adds (7.9% male, 5.6% female),
  //                  combined in quadrature with the adult 7 cm
  static HeightDistribution preset(std::string_view name);

  const std::vector<HeightComponent>& components() const { return components_; }

  // Mixture mean, sum of weight * mean.
  double mean() const;

  double sample(Rng& rng) const;

 private:
  std::vector<HeightComponent> components_;
};

// E_{h ~ dist} |1 - mean(dist)/h|, the distance-free factor of the task
// error. Evaluated per component by Gauss-Legendre quadrature over +-6
// sigma with the domain split at the integrand's kink, 64 nodes per piece.
double height_ambiguity_factor(const HeightDistribution& dist);

// Expected localization error at ground-truth distance d_gt under the
// mean-height assumption; the lower bound for monocular localization.
// Exactly linear in d_gt.
double task_error(const HeightDistribution& dist, double d_gt);

// (d, task_error(d)) rows for d = 0, step, 2*step, ... up to d_max inclusive.
std::vector<std::pair<double, double>> task_error_curve(
    const HeightDistribution& dist, double d_max, double step);

// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1].
// Exposed for reuse by anything needing a deterministic integrator.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n);

}  // namespace prox3d
