#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "builders.hpp"
#include "lamarck/simulator.hpp"

using namespace lamarck;

namespace {

Genotype silenced(Genotype g) {
  for (auto& [id, p] : g.params) {
    if (g.controller == ControllerKind::Sine) {
      p[0] = 0.0;
      p[2] = 0.0;
    } else {
      p = {0.0, 0.0, 0.0};
    }
  }
  return g;
}

Frame at(double t, Eigen::Vector3d pos, std::uint64_t contacts = 0) {
  Frame f;
  f.time = t;
  f.position = pos;
  f.contacts = contacts;
  return f;
}

}  // namespace

TEST_CASE("terrain heights") {
  CHECK(make_terrain(TerrainKind::Flat, 9).height(3.7, -2.1) == 0.0);
  const auto hilly = make_terrain(TerrainKind::Hilly, 1);
  CHECK(hilly.height(0.0, 0.0) == 0.0);
  CHECK(std::abs(hilly.height(0.375, 0.375) - 0.08) < 1e-12);
  const auto steps = make_terrain(TerrainKind::Steps, 0);
  CHECK(steps.height(-1.0, 0.0) == 0.0);
  CHECK(std::abs(steps.height(0.5, 3.0) - 0.05) < 1e-12);
  CHECK(std::abs(steps.height(0.81, 0.0) - 0.10) < 1e-12);

  const auto r1 = make_terrain(TerrainKind::Rugged, 42), r2 = make_terrain(TerrainKind::Rugged, 42);
  const auto r3 = make_terrain(TerrainKind::Rugged, 43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double x = -5.0 + 0.1 * i, y = -5.0 + 0.1 * j;
      const double h = r1.height(x, y);
      CHECK(h == r2.height(x, y));
      CHECK(std::isfinite(h));
      CHECK(std::abs(h) <= 0.04 + 1e-12);
      differs = differs || h != r3.height(x, y);
    }
  }
  CHECK(differs);
}

TEST_CASE("terrain gradient matches finite differences") {
  for (auto kind : {TerrainKind::Hilly, TerrainKind::Rugged}) {
    const auto t = make_terrain(kind, 5);
    for (double x : {-0.37, 0.11, 0.93}) {
      for (double y : {-0.71, 0.06, 0.52}) {
        double gx, gy;
        t.gradient(x, y, gx, gy);
        const double e = 1e-6;
        CHECK(gx == doctest::Approx((t.height(x + e, y) - t.height(x - e, y)) / (2 * e)).epsilon(1e-4));
        CHECK(gy == doctest::Approx((t.height(x, y + e) - t.height(x, y - e)) / (2 * e)).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("fitness is horizontal displacement") {
  Trajectory t;
  t.frames = {at(0, {0, 0, 0.05}), at(1, {1, 1, 0.3}), at(2, {3, 4, 0.05})};
  CHECK(fitness(t) == 5.0);
  t.frames = {at(0, {1, 2, 0.05}), at(1, {1, 2, 0.5})};
  CHECK(fitness(t) == 0.0);
  t.frames = {at(0, {0, 0, 0}), at(0.1, {0.6, 0.8, 0})};
  t.terminated_early = true;
  CHECK(fitness(t) == doctest::Approx(1.0));
}

TEST_CASE("rollout shape and determinism") {
  Rng rng(4);
  const auto g = random_genotype(rng, 10, 16, ControllerKind::Sine);
  const auto body = expand_symmetry(g);
  const auto terrain = make_terrain(TerrainKind::Flat, 0);
  SimConfig cfg;
  const auto a = simulate(body, g, terrain, cfg);
  const auto b = simulate(body, g, terrain, cfg);
  REQUIRE_FALSE(a.terminated_early);
  CHECK(a.frames.size() == 301);
  CHECK(a.module_count == static_cast<int>(body.modules.size()));
  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t k = 0; k < a.frames.size(); ++k) {
    CHECK(a.frames[k].position == b.frames[k].position);
    CHECK(a.frames[k].orientation.coeffs() == b.frames[k].orientation.coeffs());
    CHECK(a.frames[k].contacts == b.frames[k].contacts);
  }
  CHECK(fitness(a) == fitness(b));
}

TEST_CASE("lone head settles at half a module height") {
  Genotype head;
  SimConfig cfg;
  cfg.duration = 2.0;
  cfg.settle_time = 0.0;
  cfg.settle_max_time = 0.0;
  cfg.drop_tilt = 0.0;
  const auto t = simulate(expand_symmetry(head), head, make_terrain(TerrainKind::Flat, 0), cfg);
  const double sink = cfg.module_mass * cfg.gravity / cfg.contact_stiffness;
  CHECK(std::abs(t.frames.back().position.z() - (0.05 - sink)) < 1e-4);
  CHECK(fitness(t) < 1e-9);
}

TEST_CASE("translation on flat ground leaves fitness unchanged") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Rng rng(seed);
    const auto g = random_genotype(rng, 8, 14, seed % 2 ? ControllerKind::Cpg : ControllerKind::Sine);
    const auto body = expand_symmetry(g);
    SimConfig cfg;
    cfg.duration = 5.0;
    const auto base = fitness(simulate(body, g, make_terrain(TerrainKind::Flat, 0), cfg));
    cfg.start_x = 0.375;
    cfg.start_y = -0.25;
    const auto moved = fitness(simulate(body, g, make_terrain(TerrainKind::Flat, 0), cfg));
    CHECK(std::abs(base - moved) < 1e-9);
  }
}

TEST_CASE("unactuated robots stay put and rods keep their length") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(1000 + seed);
    const auto g = silenced(random_genotype(rng, 2, 20, seed % 2 ? ControllerKind::Cpg : ControllerKind::Sine));
    const auto body = expand_symmetry(g);
    SimConfig cfg;
    cfg.record_modules = true;
    const auto t = simulate(body, g, make_terrain(TerrainKind::Flat, 0), cfg);
    CHECK(fitness(t) < 0.01);
    for (const auto& f : t.frames) {
      for (const auto& m : body.modules) {
        if (m.parent < 0) continue;
        const double len = (f.modules[static_cast<std::size_t>(m.id)] - f.modules[static_cast<std::size_t>(m.parent)]).norm();
        CHECK(std::abs(len - cfg.module_size) < 0.01 * cfg.module_size);
      }
    }
  }
}

TEST_CASE("energy does not grow without actuation or friction") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(200 + seed);
    const auto g = silenced(random_genotype(rng, 4, 16, ControllerKind::Sine));
    SimConfig cfg;
    cfg.friction = 0.0;
    cfg.duration = 10.0;
    const auto t = simulate(expand_symmetry(g), g, make_terrain(TerrainKind::Flat, 0), cfg);
    // frame-to-frame slack for the explicit contact spring
    const double slack = 1e-4 * std::abs(t.frames.front().energy);
    for (std::size_t k = 1; k < t.frames.size(); ++k) CHECK(t.frames[k].energy <= t.frames[k - 1].energy + slack);
    CHECK(t.frames.back().energy <= t.frames.front().energy + slack);
  }
}

TEST_CASE("gait classification on constructed traces") {
  SUBCASE("steady roll") {
    Trajectory t;
    t.module_count = 4;
    for (int k = 0; k <= 300; ++k) {
      auto f = at(0.1 * k, {0.01 * k, 0, 0.05}, 0b0011);
      f.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(6.0 * std::numbers::pi * k / 300.0, Eigen::Vector3d::UnitY()));
      t.frames.push_back(f);
    }
    CHECK(accumulated_roll(t) == doctest::Approx(6.0 * std::numbers::pi).epsilon(1e-6));
    CHECK(classify_gait(t) == Gait::Rolling);
  }
  SUBCASE("static robot is a worm") {
    Trajectory t;
    t.module_count = 5;
    for (int k = 0; k <= 300; ++k) t.frames.push_back(at(0.1 * k, {0, 0, 0.05}, 0b11111));
    CHECK(classify_gait(t) == Gait::Worm);
  }
  SUBCASE("alternating feet walk") {
    Trajectory t;
    t.module_count = 3;
    for (int k = 0; k <= 300; ++k) {
      const std::uint64_t feet = (k / 5) % 2 == 0 ? 0b010 : 0b100;
      t.frames.push_back(at(0.1 * k, {0.002 * k, 0, 0.08 + 0.02 * ((k / 5) % 2)}, feet));
    }
    CHECK(classify_gait(t) == Gait::Walking);
  }
  SUBCASE("airborne wobble falls through to swimming") {
    Trajectory t;
    t.module_count = 3;
    for (int k = 0; k <= 300; ++k) t.frames.push_back(at(0.1 * k, {0, 0, 0.1 + 0.05 * std::sin(k)}, 0));
    CHECK(classify_gait(t) == Gait::Swimming);
  }
}

TEST_CASE("trajectory export round trip") {
  Rng rng(8);
  const auto g = random_genotype(rng, 5, 10, ControllerKind::Sine);
  SimConfig cfg;
  cfg.duration = 2.0;
  const auto t = simulate(expand_symmetry(g), g, make_terrain(TerrainKind::Hilly, 0), cfg);
  std::stringstream ss;
  write_trajectory(ss, t);
  const auto back = read_trajectory(ss);
  REQUIRE(back.frames.size() == t.frames.size());
  for (std::size_t k = 0; k < t.frames.size(); ++k) {
    CHECK(back.frames[k].position == t.frames[k].position);
    CHECK(back.frames[k].contacts == t.frames[k].contacts);
  }
  CHECK(fitness(back) == fitness(t));
}
