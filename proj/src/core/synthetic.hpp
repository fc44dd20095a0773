#pragma once

#include <string>
#include <vector>

#include "core/geometry.hpp"
#include "core/height_model.hpp"
#include "core/pose.hpp"
#include "core/rng.hpp"
#include "core/skeleton.hpp"

namespace prox3d {

// Spawn volume for sampled pedestrians: a wedge of the viewing frustum.
struct FrustumRegion {
  double z_min = 1.0;
  double z_max = 40.0;
  double x_slope = 0.25;   // |x| <= x_slope * z
  double ground_y = 1.65;  // ground plane height below the camera (y down)
};

struct Scene {
  std::vector<Person3D> people;
  CameraIntrinsics intrinsics;
  double image_width = 1242.0;
  double image_height = 375.0;
};

struct GeneratorConfig {
  double image_width = 1242.0;
  double image_height = 375.0;
  CameraIntrinsics intrinsics{720.0, 720.0, 620.0, 190.0};
  double camera_height_m = 1.65;
  // per-frame uniform offset of the ground plane, +-jitter around
  // camera_height_m; breaks the fixed ground-row depth cue that would
  // otherwise let a regressor sidestep the height ambiguity
  double camera_height_jitter_m = 0.0;
  double z_min = 1.0;
  double z_max = 40.0;
  // fraction of the horizontal half-frustum people may occupy
  double x_frac = 0.8;
  double noise_px = 0.0;
  int people_per_frame = 1;
  HeightDistribution heights = HeightDistribution::preset("adults");
  SkeletonModel skeleton = SkeletonModel::standard();

  FrustumRegion region() const;
};

// Uniform (x, z) in the region, height from dist, feet on the ground
// plane, yaw uniform in (-pi, pi], dims (0.6, h, 0.5).
Person3D sample_person(const HeightDistribution& dist, const FrustumRegion& region,
                       Rng& rng, const SkeletonModel& model = SkeletonModel::standard());

// Projects every person's skeleton, adds i.i.d. Gaussian pixel noise, and
// marks joints landing outside [0, w-1] x [0, h-1] (or behind the camera)
// as not visible with zeroed coordinates. Returns one record per person,
// ground truth attached, frames unset (0).
std::vector<Record> render_scene(const Scene& s, const SkeletonModel& model,
                                 double noise_px, Rng& rng);

// n records, people_per_frame per frame id; persons whose rendered pose
// has fewer than 3 visible joints are resampled, so every record is
// usable as network input. Pure function of (n, config, seed).
std::vector<Record> generate_records(int n, const GeneratorConfig& config,
                                     std::uint64_t seed);

// generate_records + JSONL serialization.
void generate_dataset(const std::string& path, int n, const GeneratorConfig& config,
                      std::uint64_t seed);

}  // namespace prox3d
