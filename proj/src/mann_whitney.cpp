#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lamarck/analysis.hpp"

namespace lamarck {

namespace {

// Midranks of the pooled sample; returns the tie term sum(t^3 - t).
double midranks(const std::vector<double>& pooled, std::vector<double>& rank) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  rank.assign(n, 0.0);
  double ties = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    const double t = static_cast<double>(j - i + 1);
    ties += t * t * t - t;
    i = j + 1;
  }
  return ties;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b, Alternative alt) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u needs non-empty samples");
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t total = n + m;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<double> rank;
  const double ties = midranks(pooled, rank);

  const double offset = static_cast<double>(n * (n + 1)) / 2.0;
  double ra = 0.0;
  for (std::size_t i = 0; i < n; ++i) ra += rank[i];
  MannWhitney r;
  r.u = ra - offset;
  const double mu = static_cast<double>(n * m) / 2.0;
  constexpr double eps = 1e-9;

  if (static_cast<int>(total) <= kExactLimit) {
    r.exact = true;
    long long hits = 0;
    long long count = 0;
    for (unsigned mask = 0; mask < (1u << total); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < total; ++i) {
        if (mask & (1u << i)) s += rank[i];
      }
      const double u = s - offset;
      ++count;
      bool extreme = false;
      switch (alt) {
        case Alternative::TwoSided: extreme = std::abs(u - mu) >= std::abs(r.u - mu) - eps; break;
        case Alternative::Greater: extreme = u >= r.u - eps; break;
        case Alternative::Less: extreme = u <= r.u + eps; break;
      }
      if (extreme) ++hits;
    }
    r.p = static_cast<double>(hits) / static_cast<double>(count);
    return r;
  }

  const double N = static_cast<double>(total);
  const double var = static_cast<double>(n * m) / 12.0 * ((N + 1.0) - ties / (N * (N - 1.0)));
  if (var <= 0.0) {
    r.p = 1.0;
    return r;
  }
  const double sd = std::sqrt(var);
  switch (alt) {
    case Alternative::TwoSided: {
      const double z = std::max(0.0, std::abs(r.u - mu) - 0.5) / sd;
      r.p = std::min(1.0, 2.0 * normal_sf(z));
      break;
    }
    case Alternative::Greater: r.p = normal_sf((r.u - mu - 0.5) / sd); break;
    case Alternative::Less: r.p = normal_sf((mu - r.u - 0.5) / sd); break;
  }
  return r;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double linear_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return 0.0;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace lamarck
