#include "lamarck/controller.hpp"

#include <cmath>
#include <numbers>

namespace lamarck {

namespace {
constexpr double kBlowupLimit = 1e6;
}

double sine_output(const SineParams& p, double phi, bool mirrored, bool alternating) {
  const double shift = (mirrored && alternating) ? std::numbers::pi : 0.0;
  return p.amplitude * std::sin(phi + p.phase + shift) + p.offset;
}

double sine_step(double phi, double dphi, double frequency) { return phi + dphi * frequency; }

NeighborGraph build_neighbor_graph(const PhenotypeBody& body) {
  NeighborGraph g;
  const std::size_t n = body.joints.size();
  g.adjacency.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pi = body.modules[static_cast<std::size_t>(body.joints[i].module)].position;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& pj = body.modules[static_cast<std::size_t>(body.joints[j].module)].position;
      const int d = (pi - pj).cwiseAbs().sum();
      if (d == 1 || d == 2) g.adjacency[i].push_back({static_cast<int>(j), d});
    }
  }
  return g;
}

void cpg_step(ControllerState& state, std::span<const CpgParams> params, const NeighborGraph& graph, double dt) {
  const std::size_t n = state.x.size();
  std::vector<double> x_next(n);
  std::vector<double> y_next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CpgParams& w = params[i];
    double dx = w.w_internal * state.y[i];
    for (const auto& e : graph.adjacency[i]) {
      dx += (e.distance == 1 ? w.w_dist1 : w.w_dist2) * state.x[static_cast<std::size_t>(e.joint)];
    }
    x_next[i] = state.x[i] + dt * dx;
    y_next[i] = state.y[i] - dt * w.w_internal * state.x[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(x_next[i]) <= kBlowupLimit) || !(std::abs(y_next[i]) <= kBlowupLimit)) {
      throw NumericalBlowup("cpg neuron state exceeded 1e6");
    }
  }
  state.x = std::move(x_next);
  state.y = std::move(y_next);
}

ControllerState controller_init(const PhenotypeBody& body, const Genotype& g) {
  ControllerState s;
  s.kind = g.controller;
  const std::size_t n = body.joints.size();
  if (g.controller == ControllerKind::Sine) {
    s.phase.assign(n, 0.0);
  } else {
    s.x.assign(n, kCpgInitialState);
    s.y.assign(n, kCpgInitialState);
  }
  return s;
}

BodyController::BodyController(const PhenotypeBody& body, const Genotype& g, double dt)
    : kind_(g.controller), alternating_(g.alternating_phase), dt_(dt) {
  for (const auto& j : body.joints) {
    const auto& p = g.params.at(j.group);
    mirrored_.push_back(j.mirrored);
    sine_.push_back({p[0], p[1], p[2]});
    cpg_.push_back({p[0], p[1], p[2]});
  }
  if (kind_ == ControllerKind::Cpg) graph_ = build_neighbor_graph(body);
}

ControllerState BodyController::initial_state() const {
  ControllerState s;
  s.kind = kind_;
  if (kind_ == ControllerKind::Sine) {
    s.phase.assign(mirrored_.size(), 0.0);
  } else {
    s.x.assign(mirrored_.size(), kCpgInitialState);
    s.y.assign(mirrored_.size(), kCpgInitialState);
  }
  return s;
}

void BodyController::outputs(const ControllerState& s, std::span<double> targets) const {
  for (std::size_t i = 0; i < mirrored_.size(); ++i) {
    const double raw = kind_ == ControllerKind::Sine ? sine_output(sine_[i], s.phase[i], mirrored_[i], alternating_) : s.x[i];
    targets[i] = clamp_actuation(raw);
  }
}

void BodyController::step(ControllerState& s) const {
  if (kind_ == ControllerKind::Sine) {
    for (auto& phi : s.phase) phi = sine_step(phi, dt_, kSineFrequency);
  } else {
    cpg_step(s, cpg_, graph_, dt_);
  }
}

}  // namespace lamarck
