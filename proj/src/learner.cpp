#include "lamarck/learner.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>

namespace lamarck {

std::string_view to_string(InheritanceMode m) {
  switch (m) {
    case InheritanceMode::NoInheritance: return "no_inheritance";
    case InheritanceMode::InheritSamples: return "inherit_samples";
    case InheritanceMode::Reevaluate: return "reevaluate";
  }
  return "?";
}

InheritanceMode inheritance_mode_from_string(std::string_view s) {
  for (auto m : {InheritanceMode::NoInheritance, InheritanceMode::InheritSamples, InheritanceMode::Reevaluate}) {
    if (to_string(m) == s) return m;
  }
  throw std::invalid_argument("unknown inheritance mode '" + std::string(s) + "'");
}

ParamLayout layout_of(const Genotype& g) {
  ParamLayout layout;
  layout.kind = g.controller;
  for (const auto& [id, p] : g.params) layout.groups.push_back(id);
  return layout;
}

Eigen::VectorXd to_normalized(const Genotype& g, const ParamLayout& layout) {
  const auto& bounds = param_bounds(layout.kind);
  Eigen::VectorXd x(layout.dim());
  for (std::size_t k = 0; k < layout.groups.size(); ++k) {
    const auto& p = g.params.at(layout.groups[k]);
    for (std::size_t i = 0; i < 3; ++i) {
      x(static_cast<Eigen::Index>(3 * k + i)) = (p[i] - bounds[i].lo) / (bounds[i].hi - bounds[i].lo);
    }
  }
  return x;
}

Genotype apply_normalized(const Genotype& g, const ParamLayout& layout, const Eigen::VectorXd& x) {
  if (x.size() != layout.dim()) throw std::invalid_argument("parameter vector does not match layout");
  const auto& bounds = param_bounds(layout.kind);
  Genotype out = g;
  for (std::size_t k = 0; k < layout.groups.size(); ++k) {
    auto& p = out.params.at(layout.groups[k]);
    for (std::size_t i = 0; i < 3; ++i) {
      const double u = std::clamp(x(static_cast<Eigen::Index>(3 * k + i)), 0.0, 1.0);
      p[i] = bounds[i].lo + u * (bounds[i].hi - bounds[i].lo);
    }
  }
  return out;
}

std::vector<Sample> map_samples(const std::vector<Sample>& parent_samples, const ParamLayout& parent_layout,
                                const ParamLayout& offspring_layout, Rng& rng) {
  std::unordered_map<ParamGroupId, std::size_t> parent_index;
  for (std::size_t k = 0; k < parent_layout.groups.size(); ++k) parent_index[parent_layout.groups[k]] = k;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Sample> out;
  out.reserve(parent_samples.size());
  for (const auto& s : parent_samples) {
    Sample m = s;
    m.x.resize(offspring_layout.dim());
    for (std::size_t k = 0; k < offspring_layout.groups.size(); ++k) {
      const auto it = parent_index.find(offspring_layout.groups[k]);
      for (std::size_t i = 0; i < 3; ++i) {
        const auto dst = static_cast<Eigen::Index>(3 * k + i);
        m.x(dst) = it != parent_index.end() ? s.x(static_cast<Eigen::Index>(3 * it->second + i)) : unit(rng);
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Sample> select_reevaluation(const LearnResult& parent, int k) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < parent.samples.size(); ++i) {
    if (parent.samples[i].self_measured()) idx.push_back(i);
  }
  if (k < 0 || static_cast<std::size_t>(k) > idx.size()) {
    throw InsufficientSamples("parent has " + std::to_string(idx.size()) + " evaluated samples, " +
                              std::to_string(k) + " requested");
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return parent.samples[a].y > parent.samples[b].y; });
  std::vector<Sample> out;
  for (int i = 0; i < k; ++i) out.push_back(parent.samples[idx[static_cast<std::size_t>(i)]]);
  return out;
}

namespace {

class Loop {
 public:
  Loop(const ParamLayout& layout, const Objective& objective, const LearnConfig& config)
      : objective_(objective), config_(config) {
    result_.layout = layout;
  }

  void add_prior(Sample s) {
    s.origin = SampleOrigin::Inherited;
    s.noise_var = config_.inherited_noise_var;
    result_.samples.push_back(std::move(s));
    result_.wall_ms.push_back(0.0);
    ++result_.inherited;
  }

  void evaluate(const Eigen::VectorXd& x, SampleOrigin origin) {
    const auto start = std::chrono::steady_clock::now();
    const double y = objective_(x);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    result_.samples.push_back(Sample{x, y, 0.0, origin});
    result_.wall_ms.push_back(ms);
    ++result_.evaluations;
    if (origin == SampleOrigin::Reevaluated) {
      ++result_.reevaluated;
    } else {
      ++result_.fresh;
    }
    if (!best_ || y > best_->y) best_ = Sample{x, y, 0.0, origin};
    result_.incumbent.push_back(best_->y);
  }

  void bo_step(Rng& rng) {
    const Eigen::Index dim = result_.layout.dim();
    std::optional<GpModel> model;
    if (!result_.samples.empty()) {
      try {
        model = GpModel::fit(result_.samples, config_.hyper);
      } catch (const SingularMatrix&) {
        model.reset();  // degenerate sample set; fall back to a uniform draw
      }
    }
    evaluate(propose_next(model ? &*model : nullptr, dim, rng, config_.proposal), SampleOrigin::Evaluated);
  }

  int remaining() const { return config_.budget - result_.evaluations; }

  LearnResult finish() {
    if (best_) {
      result_.best_x = best_->x;
      result_.best_y = best_->y;
    }
    return std::move(result_);
  }

 private:
  const Objective& objective_;
  const LearnConfig& config_;
  LearnResult result_;
  std::optional<Sample> best_;
};

}  // namespace

LearnResult learn_controller(const ParamLayout& layout, const Eigen::VectorXd& seed_x, InheritanceMode mode,
                             const LearnResult* parent, const Objective& objective, Rng& rng,
                             const LearnConfig& config) {
  if (config.budget < 1) throw std::invalid_argument("learning budget must be positive");
  if (seed_x.size() != layout.dim()) throw std::invalid_argument("seed vector does not match layout");
  Loop loop(layout, objective, config);

  if (layout.dim() == 0) {
    // nothing to search; spend the budget on the fixed controller
    while (loop.remaining() > 0) loop.evaluate(seed_x, SampleOrigin::Evaluated);
    return loop.finish();
  }

  if (parent == nullptr) mode = InheritanceMode::NoInheritance;
  switch (mode) {
    case InheritanceMode::NoInheritance:
      loop.evaluate(seed_x, SampleOrigin::Evaluated);
      break;
    case InheritanceMode::InheritSamples: {
      std::vector<Sample> own;
      for (const auto& s : parent->samples) {
        if (s.self_measured()) own.push_back(s);
      }
      for (auto& s : map_samples(own, parent->layout, layout, rng)) loop.add_prior(std::move(s));
      break;
    }
    case InheritanceMode::Reevaluate: {
      const int available = static_cast<int>(std::count_if(parent->samples.begin(), parent->samples.end(),
                                                           [](const Sample& s) { return s.self_measured(); }));
      const int k = std::min({config.reeval_count, available, config.budget});
      for (const auto& s : map_samples(select_reevaluation(*parent, k), parent->layout, layout, rng)) {
        loop.evaluate(s.x, SampleOrigin::Reevaluated);
      }
      break;
    }
  }
  while (loop.remaining() > 0) loop.bo_step(rng);
  return loop.finish();
}

Objective simulation_objective(const Genotype& g, const PhenotypeBody& body, const Terrain& terrain,
                               const SimConfig& sim) {
  return [&g, &body, &terrain, &sim, layout = layout_of(g)](const Eigen::VectorXd& x) {
    const Genotype candidate = apply_normalized(g, layout, x);
    return fitness(simulate(body, candidate, terrain, sim));
  };
}

LearnResult learn_controller(const Genotype& g, const PhenotypeBody& body, const Terrain& terrain,
                             InheritanceMode mode, const LearnResult* parent, Rng& rng, const LearnConfig& config,
                             const SimConfig& sim) {
  const ParamLayout layout = layout_of(g);
  return learn_controller(layout, to_normalized(g, layout), mode, parent, simulation_objective(g, body, terrain, sim),
                          rng, config);
}

double best_of_random(const ParamLayout& layout, const Objective& objective, int n, Rng& rng,
                      std::vector<double>* values) {
  if (n < 1) throw std::invalid_argument("best_of_random needs n >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(layout.dim());
    for (Eigen::Index d = 0; d < x.size(); ++d) x(d) = unit(rng);
    const double y = objective(x);
    if (values != nullptr) values->push_back(y);
    if (i == 0 || y > best) best = y;
  }
  return best;
}

double best_of_random(const Genotype& g, const PhenotypeBody& body, const Terrain& terrain, int n, Rng& rng,
                      const SimConfig& sim) {
  return best_of_random(layout_of(g), simulation_objective(g, body, terrain, sim), n, rng);
}

}  // namespace lamarck
