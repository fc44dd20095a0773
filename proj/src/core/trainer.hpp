#pragma once

#include <cstdint>
#include <vector>

#include "core/network.hpp"
#include "core/pose.hpp"
#include "core/rng.hpp"

namespace prox3d {

struct TrainingConfig {
  int epochs = 200;
  double learning_rate = 1e-3;
  int batch_size = 512;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double p_drop = 0.2;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::kLaplace;
  // Eq. 5 weight term; only active when p_drop > 0
  bool weight_regularizer = true;
  bool augment_flip = true;
};

struct TrainingResult {
  NetworkParams params;
  std::vector<double> history;  // mean objective per epoch
};

// Mirror a normalized sample about the camera's vertical plane: negates the
// horizontal coordinates, swaps left/right joint slots, and maps the targets
// beta -> -beta, alpha -> pi - alpha. Distance, psi, and dims are unchanged.
void flip_sample(InputVector& input, Targets& targets);

// Full-batch Adam training of the distance/orientation regressor. Every
// record must carry ground truth. Deterministic for a fixed config.
TrainingResult train(const std::vector<Record>& dataset, const Architecture& arch,
                     const TrainingConfig& config);

}  // namespace prox3d
