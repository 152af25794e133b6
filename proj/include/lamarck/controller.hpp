#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "lamarck/genotype.hpp"

namespace lamarck {

inline constexpr double kSineFrequency = 4.0;
inline constexpr double kCpgInitialState = 0.70710678118654752440;  // sqrt(2)/2

struct SineParams {
  double amplitude;
  double phase;
  double offset;
};

struct CpgParams {
  double w_internal;
  double w_dist1;  ///< weight on neighbours at grid Manhattan distance 1
  double w_dist2;  ///< weight on neighbours at grid Manhattan distance 2
};

class NumericalBlowup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NeighborEdge {
  int joint;
  int distance;  ///< 1 or 2
};

/// Per joint, the joints within grid Manhattan distance 2.
struct NeighborGraph {
  std::vector<std::vector<NeighborEdge>> adjacency;
};

struct ControllerState {
  ControllerKind kind = ControllerKind::Sine;
  std::vector<double> phase;  ///< sine: per-joint phase accumulator
  std::vector<double> x;      ///< cpg: output neuron
  std::vector<double> y;      ///< cpg: partner neuron
};

/// Target = A sin(phi + P') + O, with P' = P + pi for mirrored joints in
/// alternating mode. Not clamped.
double sine_output(const SineParams& p, double phi, bool mirrored, bool alternating);

double sine_step(double phi, double dphi, double frequency);

NeighborGraph build_neighbor_graph(const PhenotypeBody& body);

/// One explicit Euler step of the two-neuron oscillators. Both updates read
/// the pre-step x. Throws NumericalBlowup when a neuron leaves [-1e6, 1e6].
void cpg_step(ControllerState& state, std::span<const CpgParams> params, const NeighborGraph& graph, double dt);

ControllerState controller_init(const PhenotypeBody& body, const Genotype& g);

inline double clamp_actuation(double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }

/// Binds a genotype's parameters to the joints of its expanded body.
class BodyController {
 public:
  BodyController(const PhenotypeBody& body, const Genotype& g, double dt);

  ControllerState initial_state() const;

  /// Joint targets in [-1, 1], one per body joint.
  void outputs(const ControllerState& s, std::span<double> targets) const;

  void step(ControllerState& s) const;

  std::size_t joint_count() const { return mirrored_.size(); }

 private:
  ControllerKind kind_;
  bool alternating_;
  double dt_;
  std::vector<bool> mirrored_;
  std::vector<SineParams> sine_;
  std::vector<CpgParams> cpg_;
  NeighborGraph graph_;
};

}  // namespace lamarck
