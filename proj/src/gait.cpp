#include <bit>
#include <numbers>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lamarck/simulator.hpp"

namespace lamarck {

std::string_view to_string(Gait g) {
  switch (g) {
    case Gait::Rolling: return "rolling";
    case Gait::Walking: return "walking";
    case Gait::Worm: return "worm";
    case Gait::Swimming: return "swimming";
  }
  return "?";
}

Gait gait_from_string(std::string_view s) {
  for (auto g : {Gait::Rolling, Gait::Walking, Gait::Worm, Gait::Swimming}) {
    if (to_string(g) == s) return g;
  }
  throw std::invalid_argument("unknown gait '" + std::string(s) + "'");
}

double accumulated_roll(const Trajectory& t) {
  Eigen::Vector2d total = Eigen::Vector2d::Zero();
  for (std::size_t k = 1; k < t.frames.size(); ++k) {
    const Eigen::Quaterniond rel = t.frames[k].orientation * t.frames[k - 1].orientation.conjugate();
    const Eigen::AngleAxisd aa(rel.normalized());
    double angle = aa.angle();
    Eigen::Vector3d axis = aa.axis();
    if (angle > std::numbers::pi) {
      angle = 2.0 * std::numbers::pi - angle;
      axis = -axis;
    }
    total += angle * axis.head<2>();
  }
  return total.norm();
}

Gait classify_gait(const Trajectory& t, const GaitConfig& config) {
  if (accumulated_roll(t) > config.roll_threshold) return Gait::Rolling;

  const std::size_t frames = t.frames.size();
  const int n = std::min(t.module_count, 64);
  if (frames == 0 || n == 0) return Gait::Worm;

  double contact_fraction = 0.0;
  double mean_z = 0.0;
  for (const auto& f : t.frames) {
    contact_fraction += static_cast<double>(std::popcount(f.contacts)) / n;
    mean_z += f.position.z();
  }
  contact_fraction /= static_cast<double>(frames);
  mean_z /= static_cast<double>(frames);
  double var_z = 0.0;
  for (const auto& f : t.frames) var_z += (f.position.z() - mean_z) * (f.position.z() - mean_z);
  const double std_z = std::sqrt(var_z / static_cast<double>(frames));
  if (contact_fraction > config.worm_contact_fraction && std_z < config.worm_max_height_std) return Gait::Worm;

  // walking: two modules whose ground contact alternates
  std::vector<double> duty(static_cast<std::size_t>(n), 0.0);
  for (const auto& f : t.frames) {
    for (int i = 0; i < n; ++i) duty[static_cast<std::size_t>(i)] += static_cast<double>((f.contacts >> i) & 1u);
  }
  for (auto& d : duty) d /= static_cast<double>(frames);
  for (int i = 0; i < n; ++i) {
    const double di = duty[static_cast<std::size_t>(i)];
    if (di < config.walking_min_duty || di > config.walking_max_duty) continue;
    for (int j = i + 1; j < n; ++j) {
      const double dj = duty[static_cast<std::size_t>(j)];
      if (dj < config.walking_min_duty || dj > config.walking_max_duty) continue;
      double cov = 0.0;
      for (const auto& f : t.frames) {
        cov += (static_cast<double>((f.contacts >> i) & 1u) - di) * (static_cast<double>((f.contacts >> j) & 1u) - dj);
      }
      cov /= static_cast<double>(frames);
      const double corr = cov / std::sqrt(di * (1.0 - di) * dj * (1.0 - dj));
      if (corr <= config.walking_max_correlation) return Gait::Walking;
    }
  }
  return Gait::Swimming;
}

}  // namespace lamarck
