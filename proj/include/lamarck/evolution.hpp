#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lamarck/genotype.hpp"
#include "lamarck/learner.hpp"
#include "lamarck/rng.hpp"
#include "lamarck/simulator.hpp"
#include "lamarck/terrain.hpp"

namespace lamarck {

struct EvoConfig {
  int population_size = 200;
  int offspring_per_generation = 20;
  int tournament_size = 5;
  int generations = 500;
  int init_min_size = 15;
  int init_max_size = 20;
  int max_size = 20;
  int max_mutation_step = 3;
  double controller_sigma = 0.1;
  InheritanceMode mode = InheritanceMode::NoInheritance;
  ControllerKind controller = ControllerKind::Sine;
  TerrainKind terrain = TerrainKind::Flat;
  std::uint64_t seed = 0;
  /// Write the learned optimum back into the genotype under NoInheritance too.
  bool baseline_writeback = false;
  int threads = 1;
  LearnConfig learn;
  SimConfig sim;
};

/// Empty when valid, otherwise a message naming the offending field.
std::string validate(const EvoConfig& cfg);

struct Individual {
  int id = 0;
  Genotype genotype;  ///< as it lives in the population (after any write-back)
  int birth = 0;
  std::optional<int> parent;
  std::optional<BodyMutation> mutation;
  LearnResult learn;
  double fitness = 0.0;
};

/// k distinct members drawn uniformly; best fitness wins, ties to the lowest id.
const Individual& tournament_select(const std::vector<Individual>& pop, int k, Rng& rng);

struct Offspring {
  Genotype genotype;
  BodyMutation mutation;
};

/// Parent genotype copy, one body mutation, then a controller mutation.
Offspring reproduce(const Individual& parent, const EvoConfig& cfg, Rng& rng);

/// Drops the |offspring| oldest (ties to the lowest id) and appends the offspring.
void replace_oldest(std::vector<Individual>& pop, std::vector<Individual> offspring);

struct GenerationStats {
  int generation = 0;
  double best = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double best_ever = 0.0;
  long long evaluations = 0;  ///< cumulative
};

/// Builds the learning objective for one robot. The returned callable may be
/// invoked from a worker thread and must not outlive `g` and `body`.
using ObjectiveFactory = std::function<Objective(const Genotype& g, const PhenotypeBody& body)>;

ObjectiveFactory simulation_objective_factory(const Terrain& terrain, const SimConfig& sim);

struct EvolutionObserver {
  virtual ~EvolutionObserver() = default;
  /// Called once per generation, in id order, after all its robots are learned.
  virtual void on_generation(const std::vector<const Individual*>& born, const GenerationStats& stats) = 0;
};

struct ResumeState {
  std::vector<Individual> individuals;  ///< every individual of generations 0..last_generation
  int last_generation = 0;
};

struct EvolutionResult {
  std::vector<Individual> population;
  std::vector<GenerationStats> stats;
  long long evaluations = 0;
  double best_ever = 0.0;
  int best_ever_id = -1;
};

EvolutionResult run_evolution(const EvoConfig& cfg, const ObjectiveFactory& objective,
                              EvolutionObserver* observer = nullptr, const ResumeState* resume = nullptr);

/// Closed-form evaluation count for a complete run.
inline long long expected_evaluations(const EvoConfig& cfg) {
  return (static_cast<long long>(cfg.population_size) +
          static_cast<long long>(cfg.offspring_per_generation) * cfg.generations) *
         cfg.learn.budget;
}

}  // namespace lamarck
