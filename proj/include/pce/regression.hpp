#pragma once

#include "pce/polybasis.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pce {

/// Orthonormal basis plus fitted coefficients.
struct PceModel {
  OrthonormalBasis basis;
  Vector theta;

  /// Predictions at new points through the monomial representation.
  Vector predict(const Matrix& x_raw) const;
};

/// Coefficients minimizing sum_j (y_j - sum_i theta_i psi_i(x_j))^2, solved
/// by column-pivoted QR of the evaluation matrix (never normal equations).
PceModel least_squares_fit(OrthonormalBasis basis, const Vector& y);

/// (mean, variance) read off the coefficients: mean = theta_0,
/// variance = sum_{i>=1} theta_i^2. Member 0 must be the constant.
std::pair<double, double> moments_from_coefficients(const PceModel& model);

/// Least-angle regression path.
struct LarPath {
  std::vector<int> order;            // entry order, feature indices
  std::vector<Vector> coefficients;  // per step, original feature scale
  std::vector<double> intercepts;    // per step
  std::vector<int> excluded;         // zero-variance features left out
};

/// Standard LAR: equiangular advance until another predictor ties in
/// absolute correlation. Features are standardized and the response is
/// centered internally; returned coefficients are on the original scale.
/// Runs up to min(q, m-1) steps unless max_steps caps it earlier.
LarPath lar_path(const Matrix& features, const Vector& y, Index max_steps = -1);

/// JSON model serialization; doubles are hexadecimal floats so values
/// round-trip bit-exactly.
std::string model_to_json(const PceModel& model);
PceModel model_from_json(const std::string& text);
void save_model(const std::string& path, const PceModel& model);
PceModel load_model(const std::string& path);

}  // namespace pce
