#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace prox3d {

// A person collapsed onto the ground plane: position (x, z) in meters,
// facing direction (cos theta, sin theta), and the Laplace spread of the
// radial distance in meters. b = 0 marks the position as exact.
struct GroundPose {
  double x = 0.0;
  double z = 0.0;
  double theta = 0.0;
  double b = 0.0;
};

// Shared empty region between two people. The center is the midpoint of the
// two candidate centers mu_i = x_i + r * (cos theta_i, sin theta_i); the
// radius r_o is the distance from the center to the nearer of the two.
struct OSpace {
  double center_x = 0.0;
  double center_z = 0.0;
  double r_o = 0.0;
  double r = 0.0;  // candidate radius that generated the disc
};

// Per-condition breakdown of an F-formation test:
//   (a) the two people stand within d_max of each other,
//   (b) nobody else stands strictly inside the o-space disc,
//   (c) the candidate centers agree to within r_max.
// Ties count as compliant throughout.
struct FormationCheck {
  bool distance_ok = false;
  bool disc_clear = false;
  bool centers_close = false;
  OSpace disc;

  bool pass() const { return distance_ok && disc_clear && centers_close; }
};

struct SocialConfig {
  double d_max_m = 2.0;
  std::vector<double> radii_m{0.3, 0.5, 1.0};
  int n_samples = 100;          // Laplace draws per person and pair
  double vote_threshold = 0.25; // fraction of agreeing samples required
  std::uint64_t seed = 0;
};

struct PairVerdict {
  int i = 0;
  int j = 0;
  double vote_fraction = 0.0;
  bool interacting = false;
};

struct DistancingReport {
  std::vector<PairVerdict> pairs;
  std::vector<bool> at_risk;  // one flag per input person
};

OSpace o_space(const GroundPose& p0, const GroundPose& p1, double r);

// Deterministic single-radius check; r_max is the explicit threshold for
// condition (c). `others` holds everyone outside the pair.
FormationCheck f_formation_check(const GroundPose& p0, const GroundPose& p1,
                                 const std::vector<GroundPose>& others, double r,
                                 double d_max, double r_max);

// All-vs-all pairwise verdicts with R_max = r_o. For each pair the two
// positions are resampled n_samples times along their camera rays
// (d ~ Laplace(d, b), azimuth exact) and a sample votes when any candidate
// radius certifies a formation; the pair interacts when the vote fraction
// reaches the threshold. Everyone with b = 0 stays put, so an all-exact
// scene reduces to the plain deterministic check.
std::vector<PairVerdict> detect_interactions(const std::vector<GroundPose>& people,
                                             const SocialConfig& config);

// Same machinery with the relaxed looking-inward rule R_max = 2 * r_o.
// A person is at risk when at least one pair containing them passes.
DistancingReport social_distancing_check(const std::vector<GroundPose>& people,
                                         const SocialConfig& config);

// Ground-truth distancing labels: the relaxed check with every spread
// forced to zero.
std::vector<bool> augment_labels(const std::vector<GroundPose>& gt_people,
                                 const SocialConfig& config);

// {"pairs":[{"i","j","vote_fraction","interacting"}...],"at_risk":[indices]}
std::string verdict_json(const std::vector<PairVerdict>& pairs,
                         const std::vector<bool>& at_risk);

}  // namespace prox3d
