#include "lamarck/gp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace lamarck {

std::string_view to_string(SampleOrigin o) {
  switch (o) {
    case SampleOrigin::Evaluated: return "evaluated";
    case SampleOrigin::Inherited: return "inherited";
    case SampleOrigin::Reevaluated: return "reevaluated";
  }
  return "?";
}

SampleOrigin sample_origin_from_string(std::string_view s) {
  for (auto o : {SampleOrigin::Evaluated, SampleOrigin::Inherited, SampleOrigin::Reevaluated}) {
    if (to_string(o) == s) return o;
  }
  throw std::invalid_argument("unknown sample origin '" + std::string(s) + "'");
}

double matern52(double r, double lengthscale, double signal_var) {
  const double a = std::sqrt(5.0) * r / lengthscale;
  return signal_var * (1.0 + a + a * a / 3.0) * std::exp(-a);
}

double ucb(double mean, double variance, double beta) { return mean + beta * std::sqrt(std::max(0.0, variance)); }

GpModel GpModel::fit(std::vector<Sample> samples, const GpHyper& hyper) {
  if (samples.empty()) throw std::invalid_argument("gp_fit needs at least one sample");
  GpModel m;
  m.hyper_ = hyper;
  m.dim_ = samples.front().x.size();
  const auto n = static_cast<Eigen::Index>(samples.size());
  m.inputs_.resize(m.dim_, n);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    if (s.x.size() != m.dim_) throw std::invalid_argument("gp_fit: inconsistent sample dimensions");
    m.inputs_.col(i) = s.x;
    y(i) = s.y;
  }

  if (hyper.standardize) {
    m.shift_ = y.mean();
    const double var = n > 1 ? (y.array() - m.shift_).square().sum() / static_cast<double>(n) : 0.0;
    m.scale_ = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  const Eigen::VectorXd target = (y.array() - m.shift_) / m.scale_;
  const double noise_scale = 1.0 / (m.scale_ * m.scale_);

  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = hyper.signal_var + samples[static_cast<std::size_t>(i)].noise_var * noise_scale;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double r = (m.inputs_.col(i) - m.inputs_.col(j)).norm();
      k(i, j) = k(j, i) = matern52(r, hyper.lengthscale, hyper.signal_var);
    }
  }

  for (double jitter = hyper.jitter;; jitter *= 10.0) {
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(kj);
    if (llt.info() == Eigen::Success) {
      m.lower_ = llt.matrixL();
      m.alpha_ = llt.solve(target);
      m.jitter_ = jitter;
      break;
    }
    if (jitter >= 1e-4 * (1.0 - 1e-9)) throw SingularMatrix("covariance not positive definite after jitter escalation");
  }
  m.samples_ = std::move(samples);
  return m;
}

Prediction GpModel::predict(const Eigen::VectorXd& x) const {
  Eigen::VectorXd mean, var;
  predict_batch(x, mean, var);
  return {mean(0), var(0)};
}

void GpModel::predict_batch(const Eigen::MatrixXd& points, Eigen::VectorXd& mean, Eigen::VectorXd& variance) const {
  const Eigen::Index n = inputs_.cols();
  const Eigen::Index m = points.cols();
  Eigen::MatrixXd cross(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      cross(i, c) = matern52((inputs_.col(i) - points.col(c)).norm(), hyper_.lengthscale, hyper_.signal_var);
    }
  }
  mean = (cross.transpose() * alpha_).array() * scale_ + shift_;
  const Eigen::MatrixXd v = lower_.triangularView<Eigen::Lower>().solve(cross);
  variance.resize(m);
  const double s2 = scale_ * scale_;
  for (Eigen::Index c = 0; c < m; ++c) {
    variance(c) = std::max(0.0, hyper_.signal_var - v.col(c).squaredNorm()) * s2;
  }
}

Eigen::VectorXd propose_next(const GpModel* model, Eigen::Index dim, Rng& rng, const ProposalConfig& config) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (model == nullptr || model->samples().empty()) {
    Eigen::VectorXd x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x(i) = unit(rng);
    return x;
  }
  if (config.n_candidates < 1) throw std::invalid_argument("propose_next needs at least one candidate");

  // incumbent: best self-measured sample, else best overall
  const auto& samples = model->samples();
  const Sample* best = nullptr;
  for (const auto& s : samples) {
    if (s.self_measured() && (best == nullptr || s.y > best->y)) best = &s;
  }
  if (best == nullptr) {
    for (const auto& s : samples) {
      if (best == nullptr || s.y > best->y) best = &s;
    }
  }

  const int total = config.n_candidates + config.n_local;
  Eigen::MatrixXd cand(dim, total);
  for (int c = 0; c < config.n_candidates; ++c) {
    for (Eigen::Index i = 0; i < dim; ++i) cand(i, c) = unit(rng);
  }
  std::normal_distribution<double> jiggle(0.0, config.local_sigma);
  for (int c = config.n_candidates; c < total; ++c) {
    for (Eigen::Index i = 0; i < dim; ++i) cand(i, c) = std::clamp(best->x(i) + jiggle(rng), 0.0, 1.0);
  }

  Eigen::VectorXd mean, var;
  model->predict_batch(cand, mean, var);
  const double beta = model->hyper().ucb_beta;
  int arg = 0;
  double top = ucb(mean(0), var(0), beta);
  for (int c = 1; c < total; ++c) {
    const double score = ucb(mean(c), var(c), beta);
    if (score > top) {
      top = score;
      arg = c;
    }
  }
  return cand.col(arg);
}

}  // namespace lamarck
