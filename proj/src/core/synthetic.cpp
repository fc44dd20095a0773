#include "core/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prox3d {
namespace {

void validate_region(const FrustumRegion& r) {
  if (!(r.z_min > 0.0) || !(r.z_max > r.z_min))
    throw std::invalid_argument("frustum region needs 0 < z_min < z_max");
  if (r.x_slope < 0.0)
    throw std::invalid_argument("frustum region needs x_slope >= 0");
}

Record render_person(const Person3D& person, const CameraIntrinsics& k,
                     double image_width, double image_height,
                     const SkeletonModel& model, double noise_px, Rng& rng) {
  Record rec;
  rec.intrinsics = k;
  rec.gt = person.ground_truth();
  const auto joints = skeleton_from_person(person, model);
  for (int i = 0; i < kNumJoints; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const CartesianLocation& j = joints[idx];
    // consume the noise stream even for dropped joints so visibility does
    // not desynchronize the rng across otherwise-identical scenes
    const double du = rng.normal(0.0, noise_px);
    const double dv = rng.normal(0.0, noise_px);
    if (!(j.z > 0.0)) continue;
    const PixelPoint px = project(j, k);
    const double u = px.u + du;
    const double v = px.v + dv;
    if (u < 0.0 || u > image_width - 1.0 || v < 0.0 || v > image_height - 1.0)
      continue;
    rec.pose.joints[idx] = {u, v, 1.0};
  }
  return rec;
}

}  // namespace

FrustumRegion GeneratorConfig::region() const {
  const double half_px = std::min(intrinsics.cx, image_width - 1.0 - intrinsics.cx);
  FrustumRegion r;
  r.z_min = z_min;
  r.z_max = z_max;
  r.x_slope = x_frac * half_px / intrinsics.fx;
  r.ground_y = camera_height_m;
  return r;
}

Person3D sample_person(const HeightDistribution& dist, const FrustumRegion& region,
                       Rng& rng, const SkeletonModel& model) {
  validate_region(region);
  Person3D p;
  do {
    p.height_m = dist.sample(rng);
  } while (p.height_m <= 0.0);
  p.location.z = rng.uniform(region.z_min, region.z_max);
  const double x_range = region.x_slope * p.location.z;
  p.location.x = rng.uniform(-x_range, x_range);
  p.location.y = region.ground_y - model.vertical_frac[kLeftHip] * p.height_m;
  p.theta = kPi - 2.0 * kPi * rng.uniform01();  // (-pi, pi]
  p.dims = {0.6, p.height_m, 0.5};
  return p;
}

std::vector<Record> render_scene(const Scene& s, const SkeletonModel& model,
                                 double noise_px, Rng& rng) {
  if (noise_px < 0.0) throw std::invalid_argument("pixel noise must be >= 0");
  std::vector<Record> records;
  records.reserve(s.people.size());
  for (const auto& person : s.people) {
    records.push_back(render_person(person, s.intrinsics, s.image_width,
                                    s.image_height, model, noise_px, rng));
  }
  return records;
}

std::vector<Record> generate_records(int n, const GeneratorConfig& config,
                                     std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("record count must be positive");
  if (config.people_per_frame < 1)
    throw std::invalid_argument("people_per_frame must be >= 1");
  if (config.noise_px < 0.0) throw std::invalid_argument("pixel noise must be >= 0");
  const double jitter = config.camera_height_jitter_m;
  if (jitter < 0.0) throw std::invalid_argument("camera height jitter must be >= 0");
  FrustumRegion region = config.region();
  validate_region(region);

  Rng rng(seed);
  std::vector<Record> records;
  records.reserve(static_cast<std::size_t>(n));
  long frame = 0;
  int in_frame = 0;
  // guarded draw keeps the jitter-free stream (and so existing datasets)
  // bit-identical to older configs
  if (jitter != 0.0)
    region.ground_y = config.camera_height_m + rng.uniform(-jitter, jitter);
  while (records.size() < static_cast<std::size_t>(n)) {
    const Person3D person = sample_person(config.heights, region, rng, config.skeleton);
    Record rec = render_person(person, config.intrinsics, config.image_width,
                               config.image_height, config.skeleton,
                               config.noise_px, rng);
    if (rec.pose.visible_count() < 3) continue;  // unusable; resample
    rec.frame = frame;
    records.push_back(std::move(rec));
    if (++in_frame == config.people_per_frame) {
      ++frame;
      in_frame = 0;
      if (jitter != 0.0)
        region.ground_y = config.camera_height_m + rng.uniform(-jitter, jitter);
    }
  }
  return records;
}

void generate_dataset(const std::string& path, int n, const GeneratorConfig& config,
                      std::uint64_t seed) {
  write_records(path, generate_records(n, config, seed));
}

}  // namespace prox3d
