#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include "lamarck/rng.hpp"

namespace lamarck {

enum class SampleOrigin : std::uint8_t { Evaluated, Inherited, Reevaluated };

std::string_view to_string(SampleOrigin o);
SampleOrigin sample_origin_from_string(std::string_view s);

/// One point in normalised controller space with its objective value.
struct Sample {
  Eigen::VectorXd x;       ///< components in [0, 1]
  double y = 0.0;          ///< objective (m)
  double noise_var = 0.0;  ///< observation-noise variance on the diagonal
  SampleOrigin origin = SampleOrigin::Evaluated;

  bool self_measured() const { return origin != SampleOrigin::Inherited; }
};

struct GpHyper {
  double lengthscale = 0.2;
  double signal_var = 1.0;
  double jitter = 1e-8;
  double ucb_beta = 3.0;
  /// Fit on (y - mean) / std and map predictions back. With it off the prior
  /// mean is zero over raw targets.
  bool standardize = false;
};

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Prediction {
  double mean;
  double variance;
};

double matern52(double r, double lengthscale, double signal_var);

double ucb(double mean, double variance, double beta);

/// Exact GP posterior with per-sample observation noise and a Matern 5/2 kernel.
/// Immutable after construction.
class GpModel {
 public:
  /// Factorises K + diag(noise_var) + jitter I, escalating jitter x10 up to 1e-4
  /// before giving up with SingularMatrix.
  static GpModel fit(std::vector<Sample> samples, const GpHyper& hyper);

  Prediction predict(const Eigen::VectorXd& x) const;

  /// Column-wise batch prediction; `points` is dim x m.
  void predict_batch(const Eigen::MatrixXd& points, Eigen::VectorXd& mean, Eigen::VectorXd& variance) const;

  const std::vector<Sample>& samples() const { return samples_; }
  const GpHyper& hyper() const { return hyper_; }
  Eigen::Index dim() const { return dim_; }
  double jitter_used() const { return jitter_; }
  double y_shift() const { return shift_; }
  double y_scale() const { return scale_; }

 private:
  GpModel() = default;

  std::vector<Sample> samples_;
  GpHyper hyper_;
  Eigen::Index dim_ = 0;
  Eigen::MatrixXd inputs_;  // dim x n
  Eigen::MatrixXd lower_;   // Cholesky factor
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
  double shift_ = 0.0;
  double scale_ = 1.0;
};

inline GpModel gp_fit(std::vector<Sample> samples, const GpHyper& hyper) { return GpModel::fit(std::move(samples), hyper); }
inline Prediction gp_predict(const GpModel& model, const Eigen::VectorXd& x) { return model.predict(x); }

struct ProposalConfig {
  int n_candidates = 1000;
  int n_local = 32;
  double local_sigma = 0.05;
};

/// UCB argmax over uniform candidates plus Gaussian perturbations of the
/// incumbent; ties go to the lowest candidate index. Without a model the
/// proposal is a fresh uniform draw.
Eigen::VectorXd propose_next(const GpModel* model, Eigen::Index dim, Rng& rng, const ProposalConfig& config = {});

}  // namespace lamarck
