#pragma once

#include <array>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lamarck/evolution.hpp"
#include "lamarck/run_record.hpp"
#include "lamarck/simulator.hpp"

namespace lamarck {

enum class Alternative : std::uint8_t { TwoSided, Greater, Less };

struct MannWhitney {
  double u = 0.0;  ///< U of the first sample: pairs a > b plus half the ties
  double p = 1.0;
  bool exact = false;
};

/// Midranks for ties; exact enumeration when |a| + |b| <= 12, otherwise the
/// normal approximation with tie and continuity correction. `Greater` tests
/// whether a tends to exceed b.
MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b,
                           Alternative alt = Alternative::TwoSided);

inline constexpr int kExactLimit = 12;

/// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> v, double q);

/// Ordinary least-squares slope of y against x.
double linear_slope(std::span<const double> x, std::span<const double> y);

struct DeltaPoint {
  int generation = 0;
  int robot = 0;
  double learned = 0.0;
  double random = 0.0;
  double delta = 0.0;
};

struct DeltaRow {
  int generation = 0;
  int count = 0;
  double mean = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct DeltaSeries {
  std::vector<DeltaPoint> points;
  std::vector<DeltaRow> rows;  ///< generations with at least one sampled offspring

  /// Slope of the per-generation mean over generation index.
  double slope() const;
};

struct DeltaOptions {
  double subsample = 1.0;
  int random_samples = 30;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Learned fitness minus best-of-n random controllers on the same body, for
/// the offspring of every generation (generation 0 excluded).
DeltaSeries learning_delta(const RunRecord& record, const ObjectiveFactory& objective, const DeltaOptions& options);

class InsufficientRobots : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CurveRow {
  int iteration = 0;  ///< 1-based evaluation count
  double mean = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

inline constexpr double kRatioFloor = 1e-3;

struct LongBudgetOptions {
  int budget = 100;
  int n_robots = 20;
  std::uint64_t seed = 0;
  int threads = 1;
  LearnConfig learn;
};

struct LongBudgetCurve {
  std::vector<std::vector<double>> ratios;  ///< per robot, per iteration
  std::vector<CurveRow> rows;
};

/// Fresh BO and random search side by side on sampled morphologies. The
/// reported value per iteration is the incumbent ratio
/// max(bo, floor) / max(random, floor), summarised across robots.
LongBudgetCurve long_budget_curve(const RunRecord& record, const ObjectiveFactory& objective,
                                  const LongBudgetOptions& options);

std::vector<CurveRow> summarize_curve(const std::vector<std::vector<double>>& ratios);

/// Tree edit distance between each offspring and its parent; counts per distance.
std::map<int, int> ted_histogram(const RunRecord& record, bool improving_only);

/// Best-ever fitness of a run.
double best_fitness(const RunRecord& record);
const Individual& best_individual(const RunRecord& record);

/// Re-simulates an individual's best controller.
Trajectory replay(const Individual& ind, const ExperimentConfig& cfg);

struct GaitObservation {
  ControllerKind controller;
  TerrainKind terrain;
  Gait gait;
};

using GaitRowKey = std::pair<ControllerKind, TerrainKind>;
using GaitTable = std::map<GaitRowKey, std::array<double, 4>>;  ///< percentages by Gait enum order

GaitTable gait_table(const std::vector<GaitObservation>& observations);

/// Classifies the best robot of each record on its own terrain.
GaitTable gait_distribution(const std::vector<RunRecord>& records);

}  // namespace lamarck
