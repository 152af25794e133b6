#include "lamarck/terrain.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lamarck/rng.hpp"

namespace lamarck {

namespace {
constexpr double kHillAmplitude = 0.08;
constexpr double kHillWavelength = 1.5;
constexpr double kRuggedAmplitude = 0.04;
constexpr double kRuggedCell = 0.25;
constexpr double kStepRise = 0.05;
constexpr double kStepRun = 0.4;

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }
double smooth_deriv(double t) { return 6.0 * t * (1.0 - t); }
}  // namespace

std::string_view to_string(TerrainKind k) {
  switch (k) {
    case TerrainKind::Flat: return "flat";
    case TerrainKind::Hilly: return "hilly";
    case TerrainKind::Rugged: return "rugged";
    case TerrainKind::Steps: return "steps";
  }
  return "?";
}

TerrainKind terrain_kind_from_string(std::string_view s) {
  if (s == "flat") return TerrainKind::Flat;
  if (s == "hilly") return TerrainKind::Hilly;
  if (s == "rugged") return TerrainKind::Rugged;
  if (s == "steps") return TerrainKind::Steps;
  throw std::invalid_argument("unknown terrain '" + std::string(s) + "'");
}

double Terrain::lattice(std::int64_t i, std::int64_t j) const {
  std::uint64_t h = splitmix64(seed_ ^ splitmix64(static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ull ^
                                                  static_cast<std::uint64_t>(j)));
  // top 53 bits -> [0, 1) -> [-1, 1)
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

double Terrain::height(double x, double y) const {
  switch (kind_) {
    case TerrainKind::Flat:
      return 0.0;
    case TerrainKind::Hilly: {
      const double k = 2.0 * std::numbers::pi / kHillWavelength;
      return kHillAmplitude * std::sin(k * x) * std::sin(k * y);
    }
    case TerrainKind::Rugged: {
      const double gx = x / kRuggedCell;
      const double gy = y / kRuggedCell;
      const double fx = std::floor(gx);
      const double fy = std::floor(gy);
      const auto i = static_cast<std::int64_t>(fx);
      const auto j = static_cast<std::int64_t>(fy);
      const double tx = smooth(gx - fx);
      const double ty = smooth(gy - fy);
      const double a = lattice(i, j) + tx * (lattice(i + 1, j) - lattice(i, j));
      const double b = lattice(i, j + 1) + tx * (lattice(i + 1, j + 1) - lattice(i, j + 1));
      return kRuggedAmplitude * (a + ty * (b - a));
    }
    case TerrainKind::Steps:
      return x > 0.0 ? kStepRise * std::floor(x / kStepRun) : 0.0;
  }
  return 0.0;
}

void Terrain::gradient(double x, double y, double& dx, double& dy) const {
  dx = 0.0;
  dy = 0.0;
  switch (kind_) {
    case TerrainKind::Flat:
    case TerrainKind::Steps:
      return;
    case TerrainKind::Hilly: {
      const double k = 2.0 * std::numbers::pi / kHillWavelength;
      dx = kHillAmplitude * k * std::cos(k * x) * std::sin(k * y);
      dy = kHillAmplitude * k * std::sin(k * x) * std::cos(k * y);
      return;
    }
    case TerrainKind::Rugged: {
      const double gx = x / kRuggedCell;
      const double gy = y / kRuggedCell;
      const double fx = std::floor(gx);
      const double fy = std::floor(gy);
      const auto i = static_cast<std::int64_t>(fx);
      const auto j = static_cast<std::int64_t>(fy);
      const double v00 = lattice(i, j), v10 = lattice(i + 1, j), v01 = lattice(i, j + 1), v11 = lattice(i + 1, j + 1);
      const double tx = smooth(gx - fx), ty = smooth(gy - fy);
      const double dtx = smooth_deriv(gx - fx) / kRuggedCell;
      const double dty = smooth_deriv(gy - fy) / kRuggedCell;
      const double a = v00 + tx * (v10 - v00);
      const double b = v01 + tx * (v11 - v01);
      dx = kRuggedAmplitude * dtx * ((v10 - v00) + ty * ((v11 - v01) - (v10 - v00)));
      dy = kRuggedAmplitude * dty * (b - a);
      return;
    }
  }
}

}  // namespace lamarck
