#include "lamarck/evolution.hpp"

#include <algorithm>
#include <numeric>

#include "lamarck/parallel.hpp"

namespace lamarck {

std::string validate(const EvoConfig& c) {
  if (c.population_size < 1) return "population_size must be positive";
  if (c.offspring_per_generation < 1) return "offspring_per_generation must be positive";
  if (c.offspring_per_generation > c.population_size) return "offspring_per_generation exceeds population_size";
  if (c.tournament_size < 1 || c.tournament_size > c.population_size) {
    return "tournament_size must lie in [1, population_size]";
  }
  if (c.generations < 0) return "generations must be non-negative";
  if (c.init_min_size < 1 || c.init_min_size > c.init_max_size) return "init_min_size must lie in [1, init_max_size]";
  if (c.init_max_size > c.max_size) return "init_max_size exceeds max_size";
  if (c.max_size > 64) return "max_size above 64 is not supported";
  if (c.max_mutation_step < 1) return "max_mutation_step must be positive";
  if (!(c.controller_sigma > 0.0)) return "controller_sigma must be positive";
  if (c.threads < 1) return "threads must be positive";
  if (c.learn.budget < 1) return "learn_budget must be positive";
  if (c.learn.reeval_count < 1 || c.learn.reeval_count >= c.learn.budget) {
    return "reeval_count must lie in [1, learn_budget)";
  }
  if (!(c.learn.inherited_noise_var >= 0.0)) return "inherited_noise_var must be non-negative";
  const auto& h = c.learn.hyper;
  if (!(h.lengthscale > 0.0) || !(h.signal_var > 0.0) || !(h.jitter > 0.0) || !(h.ucb_beta >= 0.0)) {
    return "gp_lengthscale, gp_signal_var and gp_jitter must be positive, ucb_beta non-negative";
  }
  if (c.learn.proposal.n_candidates < 1) return "n_candidates must be positive";
  if (c.learn.proposal.n_local < 0) return "n_local must be non-negative";
  if (!(c.learn.proposal.local_sigma > 0.0)) return "local_sigma must be positive";
  if (!(c.sim.timestep > 0.0) || !(c.sim.duration > 0.0)) return "sim_timestep and sim_duration must be positive";
  return {};
}

const Individual& tournament_select(const std::vector<Individual>& pop, int k, Rng& rng) {
  if (k < 1 || static_cast<std::size_t>(k) > pop.size()) throw std::invalid_argument("tournament size out of range");
  std::vector<std::size_t> idx(pop.size());
  std::iota(idx.begin(), idx.end(), 0);
  const Individual* best = nullptr;
  for (int i = 0; i < k; ++i) {
    const auto pick = static_cast<std::size_t>(uniform_int(rng, i, static_cast<int>(pop.size()) - 1));
    std::swap(idx[static_cast<std::size_t>(i)], idx[pick]);
    const Individual& c = pop[idx[static_cast<std::size_t>(i)]];
    if (best == nullptr || c.fitness > best->fitness || (c.fitness == best->fitness && c.id < best->id)) best = &c;
  }
  return *best;
}

Offspring reproduce(const Individual& parent, const EvoConfig& cfg, Rng& rng) {
  auto body = mutate_body_detailed(parent.genotype, rng, cfg.max_size, cfg.max_mutation_step);
  return {mutate_controller(body.genotype, rng, cfg.controller_sigma), body.applied};
}

void replace_oldest(std::vector<Individual>& pop, std::vector<Individual> offspring) {
  if (offspring.size() > pop.size()) throw std::invalid_argument("more offspring than population");
  std::stable_sort(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
    return a.birth != b.birth ? a.birth < b.birth : a.id < b.id;
  });
  pop.erase(pop.begin(), pop.begin() + static_cast<std::ptrdiff_t>(offspring.size()));
  for (auto& o : offspring) pop.push_back(std::move(o));
}

ObjectiveFactory simulation_objective_factory(const Terrain& terrain, const SimConfig& sim) {
  return [&terrain, &sim](const Genotype& g, const PhenotypeBody& body) {
    return simulation_objective(g, body, terrain, sim);
  };
}

namespace {

struct Task {
  Individual individual;
  const LearnResult* parent = nullptr;
};

void learn_one(Task& task, const EvoConfig& cfg, const ObjectiveFactory& factory) {
  Individual& ind = task.individual;
  const PhenotypeBody body = expand_symmetry(ind.genotype);
  const ParamLayout layout = layout_of(ind.genotype);
  Rng rng = make_stream(cfg.seed, StreamTag::Learn, static_cast<std::uint64_t>(ind.id));
  const Objective objective = factory(ind.genotype, body);
  ind.learn = learn_controller(layout, to_normalized(ind.genotype, layout), cfg.mode, task.parent, objective, rng,
                               cfg.learn);
  ind.fitness = ind.learn.best_y;
  if (cfg.mode != InheritanceMode::NoInheritance || cfg.baseline_writeback) {
    ind.genotype = apply_normalized(ind.genotype, layout, ind.learn.best_x);
  }
}

void learn_all(std::vector<Task>& tasks, const EvoConfig& cfg, const ObjectiveFactory& factory) {
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) { learn_one(tasks[i], cfg, factory); });
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

class Tracker {
 public:
  void add(const Individual& ind) {
    evaluations_ += ind.learn.evaluations;
    if (best_id_ < 0 || ind.fitness > best_) {
      best_ = ind.fitness;
      best_id_ = ind.id;
    }
  }

  GenerationStats stats(int generation, const std::vector<Individual>& pop) const {
    GenerationStats s;
    s.generation = generation;
    std::vector<double> f;
    for (const auto& i : pop) f.push_back(i.fitness);
    s.best = *std::max_element(f.begin(), f.end());
    s.median = median_of(f);
    s.mean = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
    s.best_ever = best_;
    s.evaluations = evaluations_;
    return s;
  }

  long long evaluations() const { return evaluations_; }
  double best() const { return best_; }
  int best_id() const { return best_id_; }

 private:
  long long evaluations_ = 0;
  double best_ = 0.0;
  int best_id_ = -1;
};

}  // namespace

EvolutionResult run_evolution(const EvoConfig& cfg, const ObjectiveFactory& objective, EvolutionObserver* observer,
                              const ResumeState* resume) {
  if (const auto err = validate(cfg); !err.empty()) throw std::invalid_argument(err);
  EvolutionResult result;
  Tracker tracker;
  std::vector<Individual>& pop = result.population;
  int next_id = 0;
  int first_generation = 1;

  if (resume != nullptr && !resume->individuals.empty()) {
    // replay the survivor selection over the recorded generations
    std::vector<Individual> all = resume->individuals;
    std::sort(all.begin(), all.end(), [](const Individual& a, const Individual& b) { return a.id < b.id; });
    std::vector<Individual> batch;
    int gen = 0;
    auto flush = [&] {
      for (const auto& b : batch) tracker.add(b);
      if (gen == 0) {
        pop = std::move(batch);
      } else {
        replace_oldest(pop, std::move(batch));
      }
      result.stats.push_back(tracker.stats(gen, pop));
      batch.clear();
    };
    for (auto& ind : all) {
      if (ind.birth > resume->last_generation) break;
      while (ind.birth != gen) {
        flush();
        ++gen;
      }
      next_id = std::max(next_id, ind.id + 1);
      batch.push_back(std::move(ind));
    }
    flush();
    if (gen != resume->last_generation) throw std::invalid_argument("resume state has a gap in its generations");
    first_generation = gen + 1;
  } else {
    std::vector<Task> tasks(static_cast<std::size_t>(cfg.population_size));
    for (auto& t : tasks) {
      Rng rng = make_stream(cfg.seed, StreamTag::Init, static_cast<std::uint64_t>(next_id));
      t.individual.id = next_id++;
      t.individual.genotype = random_genotype(rng, cfg.init_min_size, cfg.init_max_size, cfg.controller);
    }
    learn_all(tasks, cfg, objective);
    for (auto& t : tasks) {
      tracker.add(t.individual);
      pop.push_back(std::move(t.individual));
    }
    result.stats.push_back(tracker.stats(0, pop));
    if (observer != nullptr) {
      std::vector<const Individual*> born;
      for (const auto& i : pop) born.push_back(&i);
      observer->on_generation(born, result.stats.back());
    }
  }

  for (int gen = first_generation; gen <= cfg.generations; ++gen) {
    Rng select_rng = make_stream(cfg.seed, StreamTag::Select, static_cast<std::uint64_t>(gen));
    std::vector<Task> tasks(static_cast<std::size_t>(cfg.offspring_per_generation));
    for (auto& t : tasks) {
      const Individual& parent = tournament_select(pop, cfg.tournament_size, select_rng);
      Rng rng = make_stream(cfg.seed, StreamTag::Reproduce, static_cast<std::uint64_t>(next_id));
      auto child = reproduce(parent, cfg, rng);
      t.individual.id = next_id++;
      t.individual.genotype = std::move(child.genotype);
      t.individual.mutation = child.mutation;
      t.individual.birth = gen;
      t.individual.parent = parent.id;
      t.parent = &parent.learn;
    }
    learn_all(tasks, cfg, objective);

    std::vector<Individual> offspring;
    for (auto& t : tasks) {
      tracker.add(t.individual);
      offspring.push_back(std::move(t.individual));
    }
    tasks.clear();
    replace_oldest(pop, std::move(offspring));
    result.stats.push_back(tracker.stats(gen, pop));
    if (observer != nullptr) {
      std::vector<const Individual*> born;
      for (const auto& i : pop) {
        if (i.birth == gen) born.push_back(&i);
      }
      observer->on_generation(born, result.stats.back());
    }
  }

  result.evaluations = tracker.evaluations();
  result.best_ever = tracker.best();
  result.best_ever_id = tracker.best_id();
  return result;
}

}  // namespace lamarck
