#include "lamarck/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "lamarck/parallel.hpp"

namespace lamarck {

double DeltaSeries::slope() const {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r.generation);
    y.push_back(r.mean);
  }
  return linear_slope(x, y);
}

namespace {

std::uint64_t record_seed(const RunRecord& record, std::uint64_t seed) {
  return splitmix64(seed) ^ record.config.evo.seed;
}

}  // namespace

DeltaSeries learning_delta(const RunRecord& record, const ObjectiveFactory& objective, const DeltaOptions& options) {
  const std::uint64_t base = record_seed(record, options.seed);
  Rng pick = make_stream(base, StreamTag::Analysis, 0);
  std::vector<const Individual*> chosen;
  for (const auto& ind : record.individuals) {
    if (ind.birth == 0) continue;
    if (uniform01(pick) < options.subsample) chosen.push_back(&ind);
  }

  DeltaSeries series;
  series.points.resize(chosen.size());
  parallel_for(chosen.size(), options.threads, [&](std::size_t i) {
    const Individual& ind = *chosen[i];
    const PhenotypeBody body = expand_symmetry(ind.genotype);
    Rng rng = make_stream(base, StreamTag::Analysis, static_cast<std::uint64_t>(ind.id) + 1);
    const double random = best_of_random(layout_of(ind.genotype), objective(ind.genotype, body),
                                         options.random_samples, rng);
    series.points[i] = {ind.birth, ind.id, ind.fitness, random, ind.fitness - random};
  });

  std::map<int, std::vector<double>> per_gen;
  for (const auto& p : series.points) per_gen[p.generation].push_back(p.delta);
  for (const auto& [gen, deltas] : per_gen) {
    DeltaRow row;
    row.generation = gen;
    row.count = static_cast<int>(deltas.size());
    row.mean = std::accumulate(deltas.begin(), deltas.end(), 0.0) / static_cast<double>(deltas.size());
    row.q25 = quantile(deltas, 0.25);
    row.q75 = quantile(deltas, 0.75);
    series.rows.push_back(row);
  }
  return series;
}

LongBudgetCurve long_budget_curve(const RunRecord& record, const ObjectiveFactory& objective,
                                  const LongBudgetOptions& options) {
  if (options.budget < 1) throw std::invalid_argument("budget must be positive");
  if (options.n_robots < 1 || static_cast<std::size_t>(options.n_robots) > record.individuals.size()) {
    throw InsufficientRobots("requested " + std::to_string(options.n_robots) + " robots, record holds " +
                             std::to_string(record.individuals.size()));
  }
  const std::uint64_t base = record_seed(record, options.seed);
  Rng pick = make_stream(base, StreamTag::Analysis, 0);
  std::vector<std::size_t> idx(record.individuals.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), pick);
  idx.resize(static_cast<std::size_t>(options.n_robots));
  std::sort(idx.begin(), idx.end());

  LearnConfig learn = options.learn;
  learn.budget = options.budget;
  learn.reeval_count = 1;
  const auto budget = static_cast<std::size_t>(options.budget);
  std::vector<std::vector<double>> ratios(idx.size());
  parallel_for(idx.size(), options.threads, [&](std::size_t r) {
    const Individual& ind = record.individuals[idx[r]];
    const PhenotypeBody body = expand_symmetry(ind.genotype);
    const ParamLayout layout = layout_of(ind.genotype);
    const Objective f = objective(ind.genotype, body);
    Rng rng = make_stream(base, StreamTag::Analysis, 2 * static_cast<std::uint64_t>(ind.id) + 1);
    Eigen::VectorXd seed(layout.dim());
    for (Eigen::Index d = 0; d < seed.size(); ++d) seed(d) = uniform01(rng);
    const LearnResult bo = learn_controller(layout, seed, InheritanceMode::NoInheritance, nullptr, f, rng, learn);

    Rng rrng = make_stream(base, StreamTag::Analysis, 2 * static_cast<std::uint64_t>(ind.id) + 2);
    std::vector<double> values;
    best_of_random(layout, f, options.budget, rrng, &values);
    double best = values.front();
    ratios[r].resize(budget);
    for (std::size_t k = 0; k < budget; ++k) {
      best = std::max(best, values[k]);
      ratios[r][k] = std::max(bo.incumbent[k], kRatioFloor) / std::max(best, kRatioFloor);
    }
  });

  LongBudgetCurve curve;
  curve.rows = summarize_curve(ratios);
  curve.ratios = std::move(ratios);
  return curve;
}

std::vector<CurveRow> summarize_curve(const std::vector<std::vector<double>>& ratios) {
  std::vector<CurveRow> rows;
  if (ratios.empty()) return rows;
  std::size_t len = ratios.front().size();
  for (const auto& r : ratios) len = std::min(len, r.size());
  for (std::size_t k = 0; k < len; ++k) {
    std::vector<double> col;
    for (const auto& r : ratios) col.push_back(r[k]);
    rows.push_back({static_cast<int>(k) + 1, std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size()),
                    quantile(col, 0.25), quantile(col, 0.75)});
  }
  return rows;
}

std::map<int, int> ted_histogram(const RunRecord& record, bool improving_only) {
  std::map<int, int> hist;
  for (const auto& ind : record.individuals) {
    if (!ind.parent) continue;
    const Individual* parent = record.find(*ind.parent);
    if (parent == nullptr) throw RecordError("individual " + std::to_string(ind.id) + " has an unknown parent");
    if (improving_only && !(ind.fitness > parent->fitness)) continue;
    ++hist[tree_edit_distance(ind.genotype, parent->genotype)];
  }
  return hist;
}

const Individual& best_individual(const RunRecord& record) {
  if (record.individuals.empty()) throw RecordError("record holds no individuals");
  const Individual* best = &record.individuals.front();
  for (const auto& ind : record.individuals) {
    if (ind.fitness > best->fitness) best = &ind;
  }
  return *best;
}

double best_fitness(const RunRecord& record) { return best_individual(record).fitness; }

Trajectory replay(const Individual& ind, const ExperimentConfig& cfg) {
  const ParamLayout layout = layout_of(ind.genotype);
  const Genotype g = apply_normalized(ind.genotype, layout, ind.learn.best_x);
  const PhenotypeBody body = expand_symmetry(g);
  const Terrain terrain = make_terrain(cfg.evo.terrain, cfg.evo.seed);
  return simulate(body, g, terrain, cfg.evo.sim);
}

GaitTable gait_table(const std::vector<GaitObservation>& observations) {
  std::map<GaitRowKey, std::array<int, 4>> counts;
  for (const auto& o : observations) ++counts[{o.controller, o.terrain}][static_cast<std::size_t>(o.gait)];
  GaitTable table;
  for (const auto& [key, c] : counts) {
    const double total = std::accumulate(c.begin(), c.end(), 0);
    auto& row = table[key];
    for (std::size_t i = 0; i < 4; ++i) row[i] = 100.0 * c[i] / total;
  }
  return table;
}

GaitTable gait_distribution(const std::vector<RunRecord>& records) {
  std::vector<GaitObservation> obs;
  for (const auto& r : records) {
    const Trajectory t = replay(best_individual(r), r.config);
    obs.push_back({r.config.evo.controller, r.config.evo.terrain, classify_gait(t)});
  }
  return gait_table(obs);
}

}  // namespace lamarck
