#pragma once

#include <cstdint>
#include <string_view>

namespace lamarck {

enum class TerrainKind : std::uint8_t { Flat, Hilly, Rugged, Steps };

std::string_view to_string(TerrainKind k);
TerrainKind terrain_kind_from_string(std::string_view s);

/// Immutable heightfield h(x, y) in meters.
///
///   Flat    h = 0
///   Hilly   h = 0.08 sin(2 pi x / 1.5) sin(2 pi y / 1.5)
///   Rugged  bilinear value noise, amplitude 0.04, lattice cell 0.25, seeded
///   Steps   h = 0.05 floor(x / 0.4) for x > 0, else 0
class Terrain {
 public:
  Terrain() = default;
  Terrain(TerrainKind kind, std::uint64_t seed) : kind_(kind), seed_(seed) {}

  TerrainKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  double height(double x, double y) const;

  /// Partial derivatives (dh/dx, dh/dy). Zero on step treads.
  void gradient(double x, double y, double& dx, double& dy) const;

 private:
  double lattice(std::int64_t i, std::int64_t j) const;

  TerrainKind kind_ = TerrainKind::Flat;
  std::uint64_t seed_ = 0;
};

inline Terrain make_terrain(TerrainKind kind, std::uint64_t seed) { return Terrain(kind, seed); }

}  // namespace lamarck
