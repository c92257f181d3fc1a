#include "pce/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pce {

namespace {

// Counts inversions of v by merge sort.
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& buf,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = (lo + hi) / 2;
  std::uint64_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      buf[k++] = v[j++];
      inv += mid - i;
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

}  // namespace

// Tau-a: assumes continuous data (ties have measure zero for every sampler here).
double kendall_tau(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ShapeError("kendall_tau requires equal lengths");
  const auto n = static_cast<std::size_t>(a.size());
  if (n < 2) throw ParameterError("kendall_tau requires at least two observations");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const auto ii = static_cast<Index>(i), jj = static_cast<Index>(j);
    if (a[ii] != a[jj]) return a[ii] < a[jj];
    return b[ii] < b[jj];
  });
  std::vector<double> bs(n);
  for (std::size_t i = 0; i < n; ++i) bs[i] = b[static_cast<Index>(order[i])];

  std::vector<double> buf(n);
  const std::uint64_t discordant = count_inversions(bs, buf, 0, n);
  const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return 1.0 - 2.0 * static_cast<double>(discordant) / total;
}

double ks_uniform_statistic(const Vector& u) {
  const auto n = static_cast<std::size_t>(u.size());
  if (n == 0) throw ParameterError("ks_uniform_statistic requires a non-empty sample");
  std::vector<double> s(u.data(), u.data() + u.size());
  std::sort(s.begin(), s.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - s[i];
    const double lo = s[i] - static_cast<double>(i) / static_cast<double>(n);
    d = std::max({d, hi, lo});
  }
  return d;
}

double ks_critical_value(Index n, double alpha) {
  // c(alpha) = sqrt(-log(alpha/2)/2), asymptotic Kolmogorov quantile.
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c / std::sqrt(static_cast<double>(n));
}

}  // namespace pce
