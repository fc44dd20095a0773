#include "core/social.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "core/rng.hpp"

namespace prox3d {

namespace {

void check_pose(const GroundPose& p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.z) || !std::isfinite(p.theta)) {
    throw std::invalid_argument("ground pose has a non-finite component");
  }
  if (!(p.b >= 0.0) || !std::isfinite(p.b)) {
    throw std::invalid_argument("ground pose spread must be finite and >= 0");
  }
}

void check_config(const SocialConfig& config) {
  if (!(config.d_max_m > 0.0)) {
    throw std::invalid_argument("d_max must be positive");
  }
  if (config.radii_m.empty()) {
    throw std::invalid_argument("at least one candidate radius is required");
  }
  for (double r : config.radii_m) {
    if (!(r > 0.0)) throw std::invalid_argument("candidate radii must be positive");
  }
  if (config.n_samples < 1) {
    throw std::invalid_argument("n_samples must be at least 1");
  }
  if (!(config.vote_threshold > 0.0) || !(config.vote_threshold <= 1.0)) {
    throw std::invalid_argument("vote threshold must lie in (0, 1]");
  }
}

double planar_distance(const GroundPose& a, const GroundPose& b) {
  return std::hypot(a.x - b.x, a.z - b.z);
}

// Candidate o-space center mu = x + r * (cos theta, sin theta).
void candidate_center(const GroundPose& p, double r, double& mx, double& mz) {
  mx = p.x + r * std::cos(p.theta);
  mz = p.z + r * std::sin(p.theta);
}

// Radial Laplace perturbation: the position slides along its camera ray by
// the factor d_s / d with d_s ~ Laplace(d, b). Azimuth stays exact.
GroundPose sample_radial(const GroundPose& p, Rng& rng) {
  GroundPose out = p;
  const double d = std::hypot(p.x, p.z);
  if (p.b > 0.0 && d > 0.0) {
    const double scale = rng.laplace(d, p.b) / d;
    out.x *= scale;
    out.z *= scale;
  }
  return out;
}

// True when any candidate radius certifies the pair, with condition (c)
// thresholded at r_max_factor * r_o.
bool formation_any_radius(const GroundPose& p0, const GroundPose& p1,
                          const std::vector<GroundPose>& others,
                          const SocialConfig& config, double r_max_factor) {
  for (double r : config.radii_m) {
    const OSpace disc = o_space(p0, p1, r);
    const FormationCheck check = f_formation_check(
        p0, p1, others, r, config.d_max_m, r_max_factor * disc.r_o);
    if (check.pass()) return true;
  }
  return false;
}

// Shared all-vs-all engine; interaction and distancing differ only in the
// R_max rule. Only the pair under test is resampled, everyone else keeps
// their nominal position for the intrusion condition. Each pair draws from
// its own stream keyed by the sorted indices, so verdicts do not depend on
// evaluation order.
std::vector<PairVerdict> pair_verdicts(const std::vector<GroundPose>& people,
                                       const SocialConfig& config,
                                       double r_max_factor) {
  check_config(config);
  for (const auto& p : people) check_pose(p);

  std::vector<PairVerdict> verdicts;
  const int n = static_cast<int>(people.size());
  if (n < 2) return verdicts;
  verdicts.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);

  const Rng base(config.seed);
  std::vector<GroundPose> others;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      others.clear();
      for (int k = 0; k < n; ++k) {
        if (k != i && k != j) others.push_back(people[k]);
      }

      const bool exact = people[i].b == 0.0 && people[j].b == 0.0;
      const int samples = exact ? 1 : config.n_samples;
      Rng rng = base.derive(static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(j));
      int votes = 0;
      for (int s = 0; s < samples; ++s) {
        const GroundPose a = sample_radial(people[i], rng);
        const GroundPose b = sample_radial(people[j], rng);
        if (formation_any_radius(a, b, others, config, r_max_factor)) ++votes;
      }

      PairVerdict v;
      v.i = i;
      v.j = j;
      v.vote_fraction = static_cast<double>(votes) / samples;
      v.interacting = v.vote_fraction >= config.vote_threshold;
      verdicts.push_back(v);
    }
  }
  return verdicts;
}

}  // namespace

OSpace o_space(const GroundPose& p0, const GroundPose& p1, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("candidate radius must be positive");
  double m0x, m0z, m1x, m1z;
  candidate_center(p0, r, m0x, m0z);
  candidate_center(p1, r, m1x, m1z);

  OSpace disc;
  disc.center_x = 0.5 * (m0x + m1x);
  disc.center_z = 0.5 * (m0z + m1z);
  disc.r = r;
  const double d0 = std::hypot(disc.center_x - p0.x, disc.center_z - p0.z);
  const double d1 = std::hypot(disc.center_x - p1.x, disc.center_z - p1.z);
  disc.r_o = std::min(d0, d1);
  return disc;
}

FormationCheck f_formation_check(const GroundPose& p0, const GroundPose& p1,
                                 const std::vector<GroundPose>& others, double r,
                                 double d_max, double r_max) {
  FormationCheck check;
  check.disc = o_space(p0, p1, r);
  check.distance_ok = planar_distance(p0, p1) <= d_max;

  check.disc_clear = true;
  for (const auto& other : others) {
    const double dist =
        std::hypot(other.x - check.disc.center_x, other.z - check.disc.center_z);
    if (dist < check.disc.r_o) {  // on the boundary is not an intrusion
      check.disc_clear = false;
      break;
    }
  }

  double m0x, m0z, m1x, m1z;
  candidate_center(p0, r, m0x, m0z);
  candidate_center(p1, r, m1x, m1z);
  check.centers_close = std::hypot(m0x - m1x, m0z - m1z) <= r_max;
  return check;
}

std::vector<PairVerdict> detect_interactions(const std::vector<GroundPose>& people,
                                             const SocialConfig& config) {
  return pair_verdicts(people, config, 1.0);
}

DistancingReport social_distancing_check(const std::vector<GroundPose>& people,
                                         const SocialConfig& config) {
  DistancingReport report;
  report.pairs = pair_verdicts(people, config, 2.0);
  report.at_risk.assign(people.size(), false);
  for (const auto& pair : report.pairs) {
    if (pair.interacting) {
      report.at_risk[static_cast<std::size_t>(pair.i)] = true;
      report.at_risk[static_cast<std::size_t>(pair.j)] = true;
    }
  }
  return report;
}

std::vector<bool> augment_labels(const std::vector<GroundPose>& gt_people,
                                 const SocialConfig& config) {
  std::vector<GroundPose> exact = gt_people;
  for (auto& p : exact) p.b = 0.0;
  return social_distancing_check(exact, config).at_risk;
}

std::string verdict_json(const std::vector<PairVerdict>& pairs,
                         const std::vector<bool>& at_risk) {
  nlohmann::json doc;
  doc["pairs"] = nlohmann::json::array();
  for (const auto& pair : pairs) {
    doc["pairs"].push_back(nlohmann::json{{"i", pair.i},
                                          {"j", pair.j},
                                          {"vote_fraction", pair.vote_fraction},
                                          {"interacting", pair.interacting}});
  }
  doc["at_risk"] = nlohmann::json::array();
  for (std::size_t idx = 0; idx < at_risk.size(); ++idx) {
    if (at_risk[idx]) doc["at_risk"].push_back(static_cast<int>(idx));
  }
  return doc.dump(2) + "\n";
}

}  // namespace prox3d
