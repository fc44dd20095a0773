#pragma once

// Internal JSON (de)serialization helpers shared by the JSONL readers and
// writers (pose.cpp, estimates.cpp). Errors carry "path:line:" context.

#include <cstddef>
#include <string>

#include <json.hpp>

#include "core/geometry.hpp"
#include "core/pose.hpp"

namespace prox3d::detail {

[[noreturn]] void fail_line(const std::string& path, std::size_t line,
                            const std::string& msg);

double require_number(const nlohmann::json& j, const char* key,
                      const std::string& path, std::size_t line);

CameraIntrinsics intrinsics_from_json(const nlohmann::json& j,
                                      const std::string& path, std::size_t line);
Pose2D pose_from_json(const nlohmann::json& j, const std::string& path,
                      std::size_t line);
GroundTruth gt_from_json(const nlohmann::json& j, const std::string& path,
                         std::size_t line);

nlohmann::json pose_to_json(const Pose2D& p);

}  // namespace prox3d::detail
