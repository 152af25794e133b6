#pragma once

#include <functional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lamarck/genotype.hpp"
#include "lamarck/gp.hpp"
#include "lamarck/rng.hpp"
#include "lamarck/simulator.hpp"
#include "lamarck/terrain.hpp"

namespace lamarck {

enum class InheritanceMode : std::uint8_t { NoInheritance, InheritSamples, Reevaluate };

std::string_view to_string(InheritanceMode m);
InheritanceMode inheritance_mode_from_string(std::string_view s);

struct LearnConfig {
  int budget = 30;
  int reeval_count = 5;
  double inherited_noise_var = 2.0;
  GpHyper hyper{.standardize = true};
  ProposalConfig proposal;
};

/// Coordinate system of a genotype's sample vectors: three normalised
/// dimensions per parameter group, groups in creation order.
struct ParamLayout {
  ControllerKind kind = ControllerKind::Sine;
  std::vector<ParamGroupId> groups;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(3 * groups.size()); }
  bool operator==(const ParamLayout&) const = default;
};

ParamLayout layout_of(const Genotype& g);

/// Genotype parameters mapped into [0,1]^dim by the controller bounds.
Eigen::VectorXd to_normalized(const Genotype& g, const ParamLayout& layout);

/// Copy of `g` with its parameters set from a normalised vector.
Genotype apply_normalized(const Genotype& g, const ParamLayout& layout, const Eigen::VectorXd& x);

struct LearnResult {
  ParamLayout layout;
  std::vector<Sample> samples;       ///< in insertion order, inherited priors first
  std::vector<double> wall_ms;       ///< per sample; 0 for inherited ones
  std::vector<double> incumbent;     ///< best self-measured y after each evaluation
  Eigen::VectorXd best_x;
  double best_y = 0.0;
  int evaluations = 0;
  int inherited = 0;
  int reevaluated = 0;
  int fresh = 0;
};

class InsufficientSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Re-expresses parent samples in the offspring layout: shared groups are
/// copied, new groups get an independent uniform draw per sample, dropped
/// groups vanish. Objective values, noise and origin are carried over.
std::vector<Sample> map_samples(const std::vector<Sample>& parent_samples, const ParamLayout& parent_layout,
                                const ParamLayout& offspring_layout, Rng& rng);

/// Top-k self-measured samples by y, ties to the earlier sample.
std::vector<Sample> select_reevaluation(const LearnResult& parent, int k);

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Bayesian optimisation of one robot's controller under a fixed budget.
/// `seed_x` is the genotype's own parameter vector, evaluated first whenever
/// no parent samples are used. `parent` may be null (generation 0).
LearnResult learn_controller(const ParamLayout& layout, const Eigen::VectorXd& seed_x, InheritanceMode mode,
                             const LearnResult* parent, const Objective& objective, Rng& rng,
                             const LearnConfig& config = {});

/// Objective that rolls out `g` with the candidate parameters and returns fitness.
Objective simulation_objective(const Genotype& g, const PhenotypeBody& body, const Terrain& terrain,
                               const SimConfig& sim);

LearnResult learn_controller(const Genotype& g, const PhenotypeBody& body, const Terrain& terrain,
                             InheritanceMode mode, const LearnResult* parent, Rng& rng, const LearnConfig& config,
                             const SimConfig& sim);

/// Best objective over n uniform random parameter vectors.
double best_of_random(const ParamLayout& layout, const Objective& objective, int n, Rng& rng,
                      std::vector<double>* values = nullptr);

double best_of_random(const Genotype& g, const PhenotypeBody& body, const Terrain& terrain, int n, Rng& rng,
                      const SimConfig& sim);

}  // namespace lamarck
