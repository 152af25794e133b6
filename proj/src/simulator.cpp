#include "lamarck/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "lamarck/controller.hpp"

namespace lamarck {

namespace {

using Eigen::Matrix3d;
using Eigen::Quaterniond;
using Eigen::Vector3d;

Matrix3d hinge_rotation(HingeAxis axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Matrix3d r;
  if (axis == HingeAxis::Pitch) {
    r << c, 0, s, 0, 1, 0, -s, 0, c;
  } else {
    r << c, -s, 0, s, c, 0, 0, 0, 1;
  }
  return r;
}

// Forward kinematics over the module tree in the head frame.
class Kinematics {
 public:
  Kinematics(const PhenotypeBody& body, double module_size) : body_(body) {
    const std::size_t n = body.modules.size();
    local_rot_.resize(n);
    offset_.resize(n);
    frames_.resize(n);
    positions_.resize(n);
    for (std::size_t i = 1; i < n; ++i) {
      const auto& m = body.modules[i];
      const Matrix3d parent = body.modules[static_cast<std::size_t>(m.parent)].orientation.cast<double>();
      local_rot_[i] = parent.transpose() * m.orientation.cast<double>();
      offset_[i] = local_rot_[i].col(0) * module_size;
    }
  }

  const std::vector<Vector3d>& solve(const std::vector<double>& angles) {
    frames_[0].setIdentity();
    positions_[0].setZero();
    for (std::size_t i = 1; i < body_.modules.size(); ++i) {
      const auto& m = body_.modules[i];
      const auto p = static_cast<std::size_t>(m.parent);
      const auto& pm = body_.modules[p];
      if (pm.kind == ModuleKind::Joint) {
        const auto j = static_cast<std::size_t>(pm.joint);
        const Matrix3d carrier = frames_[p] * hinge_rotation(body_.joints[j].axis, angles[j]);
        frames_[i] = carrier * local_rot_[i];
        positions_[i] = positions_[p] + carrier * offset_[i];
      } else {
        frames_[i] = frames_[p] * local_rot_[i];
        positions_[i] = positions_[p] + frames_[p] * offset_[i];
      }
    }
    return positions_;
  }

 private:
  const PhenotypeBody& body_;
  std::vector<Matrix3d> local_rot_;
  std::vector<Vector3d> offset_;
  std::vector<Matrix3d> frames_;
  std::vector<Vector3d> positions_;
};

Quaterniond integrate_rotation(const Quaterniond& q, const Vector3d& omega, double dt) {
  const double angle = omega.norm() * dt;
  if (angle < 1e-15) return q;
  const Quaterniond dq(Eigen::AngleAxisd(angle, omega.normalized()));
  return (dq * q).normalized();
}

bool finite(const Vector3d& v) { return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z()); }

class Rollout {
 public:
  Rollout(const PhenotypeBody& body, const Genotype& g, const Terrain& terrain, const SimConfig& cfg)
      : body_(body),
        terrain_(terrain),
        cfg_(cfg),
        controller_(body, g, cfg.timestep),
        kinematics_(body, cfg.module_size),
        n_(body.modules.size()),
        joints_(body.joints.size()),
        range_(cfg.hinge_range_deg * std::numbers::pi / 180.0) {
    state_ = controller_.initial_state();
    targets_.assign(joints_, 0.0);
    angles_.assign(joints_, 0.0);
    shape_.assign(n_, Vector3d::Zero());
    shape_velocity_.assign(n_, Vector3d::Zero());
    world_.assign(n_, Vector3d::Zero());
    mass_ = cfg.module_mass * static_cast<double>(n_);
    cube_inertia_ = static_cast<double>(n_) * cfg.module_mass * cfg.module_size * cfg.module_size / 6.0;
    radius_ = 0.5 * cfg.module_size;
  }

  Trajectory run() {
    Trajectory traj;
    traj.module_count = static_cast<int>(n_);

    controller_.outputs(state_, targets_);
    for (std::size_t j = 0; j < joints_; ++j) angles_[j] = targets_[j] * range_;
    update_shape(false);
    place();

    const int quiet_needed = static_cast<int>(std::lround(0.25 / cfg_.timestep));
    int quiet = 0;
    for (int k = 0; k < cfg_.settle_max_steps(); ++k) {
      if (!physics_step()) {
        traj.terminated_early = true;
        return traj;
      }
      const bool still = velocity_.norm() < cfg_.settle_speed && omega_.norm() < 10.0 * cfg_.settle_speed;
      quiet = still ? quiet + 1 : 0;
      if (k + 1 >= cfg_.settle_steps() && quiet >= quiet_needed) break;
    }

    const int steps = cfg_.step_count();
    const int stride = std::max(1, cfg_.frame_stride());
    for (int k = 0;; ++k) {
      if (k % stride == 0) traj.frames.push_back(frame(k * cfg_.timestep));
      if (k == steps) break;
      controller_.outputs(state_, targets_);
      if (!physics_step()) {
        traj.terminated_early = true;
        break;
      }
      try {
        controller_.step(state_);
      } catch (const NumericalBlowup&) {
        traj.terminated_early = true;
        break;
      }
    }
    return traj;
  }

 private:
  void update_shape(bool with_velocity) {
    const auto& pos = kinematics_.solve(angles_);
    Vector3d centre = Vector3d::Zero();
    for (const auto& p : pos) centre += p;
    centre /= static_cast<double>(n_);
    const double inv_dt = 1.0 / cfg_.timestep;
    for (std::size_t i = 0; i < n_; ++i) {
      const Vector3d s = pos[i] - centre;
      shape_velocity_[i] = with_velocity ? Vector3d((s - shape_[i]) * inv_dt) : Vector3d::Zero();
      shape_[i] = s;
    }
  }

  void place() {
    // head over the start point, lowest module just above the terrain
    orientation_ = Quaterniond(Eigen::AngleAxisd(cfg_.drop_tilt, Vector3d(0.6, 0.8, 0.0)));
    const Matrix3d rot = orientation_.toRotationMatrix();
    double lift = -1e300;
    for (std::size_t i = 0; i < n_; ++i) {
      const Vector3d rel = rot * (shape_[i] - shape_[0]);
      const double x = cfg_.start_x + rel.x();
      const double y = cfg_.start_y + rel.y();
      lift = std::max(lift, terrain_.height(x, y) + radius_ - rel.z());
    }
    const Vector3d head(cfg_.start_x, cfg_.start_y, lift + 1e-3);
    com_ = head - rot * shape_[0];
    velocity_.setZero();
    momentum_.setZero();
  }

  Matrix3d inertia(const Matrix3d& rot) {
    Matrix3d inertia = Matrix3d::Identity() * cube_inertia_;
    for (std::size_t i = 0; i < n_; ++i) {
      world_[i] = rot * shape_[i];
      const Vector3d& r = world_[i];
      inertia += cfg_.module_mass * (r.squaredNorm() * Matrix3d::Identity() - r * r.transpose());
    }
    return inertia;
  }

  bool physics_step() {
    const double dt = cfg_.timestep;
    const double max_delta = cfg_.servo_max_speed * dt;
    for (std::size_t j = 0; j < joints_; ++j) {
      const double target = targets_[j] * range_;
      const double delta = std::clamp(cfg_.servo_gain * (target - angles_[j]) * dt, -max_delta, max_delta);
      angles_[j] = std::clamp(angles_[j] + delta, -range_, range_);
    }
    update_shape(true);

    const Matrix3d rot = orientation_.toRotationMatrix();
    const Matrix3d inv_inertia = inertia(rot).inverse();
    const Vector3d omega = inv_inertia * momentum_;

    Vector3d force(0.0, 0.0, -mass_ * cfg_.gravity);
    Vector3d torque = Vector3d::Zero();
    contacts_ = 0;
    spring_energy_ = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const Vector3d& r = world_[i];
      const Vector3d x = com_ + r;
      const double h = terrain_.height(x.x(), x.y());
      if (x.z() - radius_ >= h) continue;
      double gx, gy;
      terrain_.gradient(x.x(), x.y(), gx, gy);
      const double inv_norm = 1.0 / std::sqrt(1.0 + gx * gx + gy * gy);
      const Vector3d normal(-gx * inv_norm, -gy * inv_norm, inv_norm);
      const double depth = (h - x.z()) * inv_norm + radius_;
      if (depth <= 0.0) continue;
      contacts_ |= (i < 64 ? (std::uint64_t{1} << i) : 0);
      spring_energy_ += 0.5 * cfg_.contact_stiffness * depth * depth;

      const Vector3d v = velocity_ + omega.cross(r) + rot * shape_velocity_[i];
      const double vn = v.dot(normal);
      const double fn = std::max(0.0, cfg_.contact_stiffness * depth - cfg_.contact_damping * vn);
      Vector3d f = fn * normal;
      const Vector3d vt = v - vn * normal;
      const double slip = vt.norm();
      if (slip > 0.0) {
        const double ft = std::min(cfg_.friction * fn, cfg_.tangential_damping * slip);
        f -= (ft / slip) * vt;
      }
      force += f;
      torque += r.cross(f);
    }

    velocity_ += force * (dt / mass_);
    com_ += velocity_ * dt;
    momentum_ += torque * dt;
    const Vector3d omega_next = inv_inertia * momentum_;
    orientation_ = integrate_rotation(orientation_, omega_next, dt);
    omega_ = omega_next;

    if (!finite(com_) || !finite(velocity_) || !finite(momentum_)) return false;
    return com_.cwiseAbs().maxCoeff() <= cfg_.blowup_limit && velocity_.cwiseAbs().maxCoeff() <= cfg_.blowup_limit;
  }

  Frame frame(double t) const {
    Frame f;
    f.time = t;
    const Matrix3d rot = orientation_.toRotationMatrix();
    f.position = com_ + rot * shape_[0];
    f.orientation = orientation_;
    f.contacts = contacts_;
    const double kinetic = 0.5 * mass_ * velocity_.squaredNorm() + 0.5 * omega_.dot(momentum_);
    f.energy = kinetic + mass_ * cfg_.gravity * com_.z() + spring_energy_;
    if (cfg_.record_modules) {
      f.modules.reserve(n_);
      for (std::size_t i = 0; i < n_; ++i) f.modules.push_back(com_ + rot * shape_[i]);
    }
    return f;
  }

  const PhenotypeBody& body_;
  const Terrain& terrain_;
  const SimConfig& cfg_;
  BodyController controller_;
  Kinematics kinematics_;
  std::size_t n_;
  std::size_t joints_;
  double range_;
  double mass_ = 0.0;
  double cube_inertia_ = 0.0;
  double radius_ = 0.05;

  ControllerState state_;
  std::vector<double> targets_;
  std::vector<double> angles_;
  std::vector<Vector3d> shape_;           // module positions relative to the centre of mass, head frame
  std::vector<Vector3d> shape_velocity_;  // d(shape)/dt, head frame
  std::vector<Vector3d> world_;           // shape rotated into the world

  Vector3d com_ = Vector3d::Zero();
  Vector3d velocity_ = Vector3d::Zero();
  Vector3d momentum_ = Vector3d::Zero();  // angular, about the centre of mass
  Vector3d omega_ = Vector3d::Zero();
  Quaterniond orientation_ = Quaterniond::Identity();
  std::uint64_t contacts_ = 0;
  double spring_energy_ = 0.0;
};

}  // namespace

Trajectory simulate(const PhenotypeBody& body, const Genotype& g, const Terrain& terrain, const SimConfig& config) {
  Rollout rollout(body, g, terrain, config);
  return rollout.run();
}

double fitness(const Trajectory& t) {
  if (t.frames.empty()) return 0.0;
  const Eigen::Vector3d d = t.frames.back().position - t.frames.front().position;
  return std::hypot(d.x(), d.y());
}

}  // namespace lamarck
