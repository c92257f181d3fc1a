#include "pce/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace pce {

double relative_error(double reference_sd, double estimate_sd) {
  if (!(reference_sd > 0.0)) throw ParameterError("relative_error requires reference > 0");
  return std::abs(reference_sd - estimate_sd) / reference_sd;
}

namespace {

// k-th smallest |s - x| over sorted s, excluding up to `skip` exact self-matches.
double knn_distance(const std::vector<double>& s, double x, int k, int skip_self) {
  const auto n = static_cast<std::ptrdiff_t>(s.size());
  auto it = std::lower_bound(s.begin(), s.end(), x);
  std::ptrdiff_t right = it - s.begin();
  std::ptrdiff_t left = right - 1;
  int found = 0;
  int skipped = 0;
  double dist = 0.0;
  while (found < k) {
    double dl = left >= 0 ? x - s[static_cast<std::size_t>(left)]
                          : std::numeric_limits<double>::infinity();
    double dr = right < n ? s[static_cast<std::size_t>(right)] - x
                          : std::numeric_limits<double>::infinity();
    if (dl <= dr) {
      dist = dl;
      --left;
    } else {
      dist = dr;
      ++right;
    }
    if (dist == 0.0 && skipped < skip_self) {
      ++skipped;
      continue;
    }
    ++found;
  }
  return dist;
}

}  // namespace

double kl_divergence_knn(const Vector& true_samples, const Vector& model_samples, int k) {
  if (k < 1) throw ParameterError("kl_divergence_knn requires k >= 1");
  const Index n = true_samples.size();
  const Index m = model_samples.size();
  if (n < k + 1 || m < k + 1)
    throw ParameterError("kl_divergence_knn requires at least k+1 samples on both sides");

  if (!model_samples.allFinite()) return std::numeric_limits<double>::infinity();
  const double model_mean = model_samples.mean();
  const double model_var =
      (model_samples.array() - model_mean).matrix().squaredNorm() / static_cast<double>(m);
  if (model_var == 0.0) return std::numeric_limits<double>::infinity();

  std::vector<double> ts(true_samples.data(), true_samples.data() + n);
  std::vector<double> ms(model_samples.data(), model_samples.data() + m);
  std::sort(ts.begin(), ts.end());
  std::sort(ms.begin(), ms.end());

  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double x = ts[static_cast<std::size_t>(i)];
    const double rho = knn_distance(ts, x, k, 1);  // skip the sample itself
    const double nu = knn_distance(ms, x, k, 0);
    if (nu == 0.0) {
      if (rho > 0.0) return std::numeric_limits<double>::infinity();
      continue;  // both vanish: treat the ratio as 1
    }
    if (rho == 0.0) return std::numeric_limits<double>::infinity();
    acc += std::log(nu / rho);
  }
  return acc / static_cast<double>(n) +
         std::log(static_cast<double>(m) / static_cast<double>(n - 1));
}

RunAggregate summarize_runs(const std::vector<double>& values) {
  if (values.empty()) throw ParameterError("summarize_runs requires a non-empty list");
  RunAggregate agg;
  for (double v : values) {
    if (std::isinf(v) || std::isnan(v)) {
      agg.infinite = true;
      return agg;
    }
  }
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  agg.mean = mean;
  agg.standard_error = sd / std::sqrt(n);
  return agg;
}

}  // namespace pce
