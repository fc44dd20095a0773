#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "core/network.hpp"

namespace prox3d {

inline constexpr int kWeightsFormatVersion = 1;

// Parameters plus the loss the model was trained under, which decides how
// predictions decode (L1 models report no spread).
struct SavedModel {
  NetworkParams params;
  LossKind loss = LossKind::kLaplace;
};

// JSON header (format version, architecture, dim expectation, p_drop, loss,
// optionally the training seed for provenance) with per-tensor base64
// payloads of little-endian 64-bit floats. Round-trips are bitwise exact.
void save_weights(const NetworkParams& params, LossKind loss,
                  const std::string& path,
                  std::optional<std::uint64_t> train_seed = std::nullopt);

// Throws std::runtime_error on version mismatch (naming both versions),
// corrupt payloads, or files that cannot be parsed.
SavedModel load_weights(const std::string& path);

}  // namespace prox3d
