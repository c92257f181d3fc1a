#pragma once

#include "pce/common.hpp"

namespace pce {

/// Kendall rank correlation, O(n log n) via inversion counting.
double kendall_tau(const Vector& a, const Vector& b);

/// Kolmogorov-Smirnov statistic of a sample against U(0,1).
double ks_uniform_statistic(const Vector& u);

/// Asymptotic KS critical value at significance level alpha.
double ks_critical_value(Index n, double alpha);

}  // namespace pce
