#include "core/estimates.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "core/geometry.hpp"
#include "core/pose_json.hpp"

namespace prox3d {

using nlohmann::json;

namespace {

json estimate_to_json(const LocalizationEstimate& e) {
  const CartesianLocation p = e.xyz();
  json out = {
      {"d", e.d},
      {"beta", e.beta},
      {"psi", e.psi},
      {"theta", e.theta},
      {"xyz", {p.x, p.y, p.z}},
      {"dims", {e.dims[0], e.dims[1], e.dims[2]}},
  };
  if (e.has_b) out["b"] = e.b;
  if (e.has_sigma) out["sigma"] = e.sigma;
  return out;
}

LocalizationEstimate estimate_from_json(const json& j, const std::string& path,
                                        std::size_t line) {
  if (!j.is_object()) detail::fail_line(path, line, "\"estimate\" must be an object");
  LocalizationEstimate e;
  e.d = detail::require_number(j, "d", path, line);
  e.beta = detail::require_number(j, "beta", path, line);
  e.psi = detail::require_number(j, "psi", path, line);
  e.theta = detail::require_number(j, "theta", path, line);
  if (!(e.d > 0.0)) detail::fail_line(path, line, "estimate.d must be positive");
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 3)
    detail::fail_line(path, line, "estimate.dims must be [w, h, l]");
  for (std::size_t i = 0; i < 3; ++i) e.dims[i] = j["dims"][i].get<double>();
  e.has_b = j.contains("b");
  if (e.has_b) {
    e.b = detail::require_number(j, "b", path, line);
    if (!(e.b >= 0.0)) detail::fail_line(path, line, "estimate.b must be >= 0");
  }
  e.has_sigma = j.contains("sigma");
  if (e.has_sigma) {
    e.sigma = detail::require_number(j, "sigma", path, line);
    if (!(e.sigma >= 0.0))
      detail::fail_line(path, line, "estimate.sigma must be >= 0");
  }
  const double alpha = wrap_angle(e.theta + e.beta);
  e.sin_alpha = std::sin(alpha);
  e.cos_alpha = std::cos(alpha);
  return e;
}

}  // namespace

void write_predictions(const std::string& path,
                       const std::vector<PredictionRecord>& predictions) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& p : predictions) {
    const json j = {{"estimate", estimate_to_json(p.estimate)},
                    {"frame", p.frame},
                    {"pose", detail::pose_to_json(p.pose)}};
    out << j.dump() << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<PredictionRecord> parse_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<PredictionRecord> predictions;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.empty()) continue;
    json j = json::parse(raw, nullptr, false);
    if (j.is_discarded()) detail::fail_line(path, line_no, "invalid JSON");
    if (!j.is_object())
      detail::fail_line(path, line_no, "record must be a JSON object");
    if (!j.contains("pose"))
      detail::fail_line(path, line_no, "missing \"pose\" field");
    if (!j.contains("estimate"))
      detail::fail_line(path, line_no, "missing \"estimate\" field");
    PredictionRecord p;
    p.pose = detail::pose_from_json(j["pose"], path, line_no);
    p.estimate = estimate_from_json(j["estimate"], path, line_no);
    if (j.contains("frame")) {
      if (!j["frame"].is_number_integer())
        detail::fail_line(path, line_no, "\"frame\" must be an integer");
      p.frame = j["frame"].get<long>();
    } else {
      p.frame = static_cast<long>(predictions.size());
    }
    predictions.push_back(std::move(p));
  }
  return predictions;
}

}  // namespace prox3d
