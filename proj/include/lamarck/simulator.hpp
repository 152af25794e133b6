#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "lamarck/genotype.hpp"
#include "lamarck/terrain.hpp"

namespace lamarck {

struct SimConfig {
  double duration = 30.0;  ///< seconds recorded after settling
  double timestep = 0.005;
  double gravity = 9.81;
  double module_size = 0.1;
  double module_mass = 0.1;
  double contact_stiffness = 2000.0;  ///< N/m
  double contact_damping = 10.0;      ///< N s/m
  double friction = 1.0;              ///< Coulomb coefficient
  double tangential_damping = 10.0;   ///< N s/m, viscous regularisation of friction near zero slip
  double servo_gain = 20.0;           ///< 1/s
  double servo_max_speed = 6.0;       ///< rad/s
  double hinge_range_deg = 60.0;      ///< actuation +-1 maps to +-range
  double frame_interval = 0.1;
  double settle_time = 1.5;      ///< minimum settling; joints hold their initial targets, not recorded
  double settle_max_time = 6.0;  ///< settling continues until the body is quiet or this cap
  double settle_speed = 1e-3;    ///< quiet: centre-of-mass speed (m/s) and spin (rad/s, x10) below this for 0.25 s
  double drop_tilt = 0.02;   ///< initial tilt (rad) so balanced poses topple while settling
  double start_x = 0.0;
  double start_y = 0.0;
  double blowup_limit = 1e3;  ///< |coordinate| above this terminates the rollout
  bool record_modules = false;

  int step_count() const { return static_cast<int>(std::lround(duration / timestep)); }
  int frame_stride() const { return static_cast<int>(std::lround(frame_interval / timestep)); }
  int settle_steps() const { return static_cast<int>(std::lround(settle_time / timestep)); }
  int settle_max_steps() const { return static_cast<int>(std::lround(settle_max_time / timestep)); }
};

struct Frame {
  double time = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  ///< core (head) module centre
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  std::uint64_t contacts = 0;  ///< bit i set when module i touches the ground
  double energy = 0.0;         ///< kinetic + gravitational + contact-spring energy
  std::vector<Eigen::Vector3d> modules;  ///< only with SimConfig::record_modules
};

struct Trajectory {
  std::vector<Frame> frames;
  bool terminated_early = false;
  int module_count = 0;
};

/// Deterministic rollout of the genotype's controller on its expanded body.
///
/// The body is a floating base (the head frame) carrying kinematic limbs:
/// hinge angles track the controller targets through a rate-limited servo,
/// and forward kinematics places every module. Linear and angular momentum
/// of the whole body change only through gravity and ground contact
/// (penalty spring, damping, regularised Coulomb friction). The body first
/// settles for `settle_time` holding the initial targets; recording starts
/// afterwards.
Trajectory simulate(const PhenotypeBody& body, const Genotype& g, const Terrain& terrain, const SimConfig& config);

/// Horizontal distance between the core position in the first and last frame.
double fitness(const Trajectory& t);

enum class Gait : std::uint8_t { Rolling, Walking, Worm, Swimming };

std::string_view to_string(Gait g);
Gait gait_from_string(std::string_view s);

struct GaitConfig {
  double roll_threshold = 2.0 * std::numbers::pi;  ///< accumulated horizontal core rotation, rad
  double worm_contact_fraction = 0.9;
  double worm_max_height_std = 0.01;  ///< m
  double walking_max_correlation = -0.5;
  double walking_min_duty = 0.2;
  double walking_max_duty = 0.8;
};

/// Net rotation of the core about horizontal axes, integrated frame to frame.
double accumulated_roll(const Trajectory& t);

Gait classify_gait(const Trajectory& t, const GaitConfig& config = {});

/// Tab-separated export: time x y z qw qx qy qz contacts, one frame per line
/// after a '#'-prefixed header.
void write_trajectory(std::ostream& out, const Trajectory& t);
Trajectory read_trajectory(std::istream& in);

}  // namespace lamarck
