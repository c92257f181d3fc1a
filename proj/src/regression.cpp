#include "pce/regression.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>

namespace pce {

Vector PceModel::predict(const Matrix& x_raw) const {
  return basis.evaluate(x_raw) * theta;
}

PceModel least_squares_fit(OrthonormalBasis basis, const Vector& y) {
  if (y.size() != basis.train_size())
    throw ShapeError("response length does not match basis training size");
  if (basis.size() > y.size())
    throw ParameterError("least squares requires m >= basis size");

  Eigen::ColPivHouseholderQR<Matrix> qr(basis.values);
  qr.setThreshold(1e-12);
  if (qr.rank() < basis.size()) {
    const int bad = static_cast<int>(qr.colsPermutation().indices()[qr.rank()]);
    throw ConditioningError("rank-deficient design, column " + std::to_string(bad), bad);
  }
  Vector theta = qr.solve(y);
  return PceModel{std::move(basis), std::move(theta)};
}

std::pair<double, double> moments_from_coefficients(const PceModel& model) {
  const double mean = model.theta.size() > 0 ? model.theta[0] : 0.0;
  double var = 0.0;
  for (Index i = 1; i < model.theta.size(); ++i) var += model.theta[i] * model.theta[i];
  return {mean, var};
}

LarPath lar_path(const Matrix& features, const Vector& y, Index max_steps) {
  const Index m = features.rows();
  const Index q = features.cols();
  if (y.size() != m) throw ShapeError("lar_path response length mismatch");
  if (m < 2) throw ParameterError("lar_path requires at least two observations");

  LarPath path;

  // Standardize columns to zero mean, unit Euclidean norm; center response.
  std::vector<int> usable;
  Vector mu = Vector::Zero(q), sd = Vector::Ones(q);
  const double y_scale = std::max(1.0, y.norm());
  Matrix xs(m, q);
  Index nu = 0;
  for (Index j = 0; j < q; ++j) {
    mu[j] = features.col(j).mean();
    Vector c = features.col(j).array() - mu[j];
    const double norm = c.norm();
    if (norm <= 1e-13 * std::max(1.0, std::abs(mu[j]) * std::sqrt(double(m)))) {
      path.excluded.push_back(static_cast<int>(j));
      continue;
    }
    sd[j] = norm;
    xs.col(nu++) = c / norm;
    usable.push_back(static_cast<int>(j));
  }
  xs.conservativeResize(m, nu);

  const double y_mean = y.mean();
  Vector r = y.array() - y_mean;

  const Index step_cap = std::min<Index>(nu, m - 1);
  const Index limit = max_steps < 0 ? step_cap : std::min<Index>(max_steps, step_cap);

  std::vector<char> active(static_cast<std::size_t>(nu), 0);
  std::vector<Index> active_list;
  Vector beta_std = Vector::Zero(nu);
  Matrix chol;  // lower Cholesky factor of the active Gram matrix

  while (static_cast<Index>(active_list.size()) < limit) {
    Vector corr = xs.transpose() * r;
    Index next = -1;
    double cmax = 0.0;
    for (Index j = 0; j < nu; ++j) {
      if (active[static_cast<std::size_t>(j)]) continue;
      const double a = std::abs(corr[j]);
      if (a > cmax) {
        cmax = a;
        next = j;
      }
    }
    if (next < 0 || cmax <= 1e-12 * y_scale) break;

    // Append to the Cholesky factor of X_A' X_A.
    const Index k = static_cast<Index>(active_list.size());
    Vector g(k);
    for (Index i = 0; i < k; ++i) g[i] = xs.col(active_list[static_cast<std::size_t>(i)]).dot(xs.col(next));
    Vector l(k);
    if (k > 0)
      l = chol.topLeftCorner(k, k).triangularView<Eigen::Lower>().solve(g);
    const double d2 = 1.0 - (k > 0 ? l.squaredNorm() : 0.0);
    if (d2 <= 1e-12) {
      // Collinear with the active set; leave it out of the path.
      active[static_cast<std::size_t>(next)] = 1;
      path.excluded.push_back(usable[static_cast<std::size_t>(next)]);
      continue;
    }
    chol.conservativeResizeLike(Matrix::Zero(k + 1, k + 1));
    if (k > 0) chol.block(k, 0, 1, k) = l.transpose();
    chol(k, k) = std::sqrt(d2);
    active[static_cast<std::size_t>(next)] = 1;
    active_list.push_back(next);
    const Index ka = k + 1;

    // Equiangular direction.
    const double big_c = std::abs(corr[next]);
    Vector s(ka);
    for (Index i = 0; i < ka; ++i) {
      const double ci = xs.col(active_list[static_cast<std::size_t>(i)]).dot(r);
      s[i] = ci >= 0.0 ? 1.0 : -1.0;
    }
    Vector w = chol.topLeftCorner(ka, ka).triangularView<Eigen::Lower>().solve(s);
    w = chol.topLeftCorner(ka, ka).triangularView<Eigen::Lower>().transpose().solve(w);
    const double aa = 1.0 / std::sqrt(s.dot(w));
    w *= aa;
    Vector u = Vector::Zero(m);
    for (Index i = 0; i < ka; ++i) u += w[i] * xs.col(active_list[static_cast<std::size_t>(i)]);
    Vector a_corr = xs.transpose() * u;

    // Step length to the next tie in absolute correlation.
    double gamma = big_c / aa;
    for (Index j = 0; j < nu; ++j) {
      if (active[static_cast<std::size_t>(j)]) continue;
      const double t1 = (big_c - corr[j]) / (aa - a_corr[j]);
      const double t2 = (big_c + corr[j]) / (aa + a_corr[j]);
      if (t1 > 1e-14 && t1 < gamma) gamma = t1;
      if (t2 > 1e-14 && t2 < gamma) gamma = t2;
    }
    if (!std::isfinite(gamma) || gamma <= 0.0) break;

    for (Index i = 0; i < ka; ++i) beta_std[active_list[static_cast<std::size_t>(i)]] += gamma * w[i];
    r -= gamma * u;

    // Record the step on the original scale.
    Vector beta = Vector::Zero(q);
    double intercept = y_mean;
    for (Index i = 0; i < ka; ++i) {
      const Index js = active_list[static_cast<std::size_t>(i)];
      const int jo = usable[static_cast<std::size_t>(js)];
      beta[jo] = beta_std[js] / sd[jo];
      intercept -= beta[jo] * mu[jo];
    }
    path.order.push_back(usable[static_cast<std::size_t>(next)]);
    path.coefficients.push_back(std::move(beta));
    path.intercepts.push_back(intercept);
  }
  return path;
}

namespace {

std::string double_to_hex(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double hex_to_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

nlohmann::ordered_json vector_to_hex(const Vector& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(double_to_hex(v[i]));
  return arr;
}

Vector vector_from_hex(const nlohmann::json& arr) {
  Vector v(static_cast<Index>(arr.size()));
  Index i = 0;
  for (const auto& item : arr) v[i++] = hex_to_double(item.get<std::string>());
  return v;
}

}  // namespace

std::string model_to_json(const PceModel& model) {
  nlohmann::ordered_json j;
  j["multi_indices"] = nlohmann::ordered_json::array();
  for (const auto& mi : model.basis.monomials) j["multi_indices"].push_back(mi);
  j["monomial_coefficients"] = nlohmann::ordered_json::array();
  for (Index b = 0; b < model.basis.size(); ++b)
    j["monomial_coefficients"].push_back(vector_to_hex(model.basis.coeffs.col(b)));
  j["rescale_map"] = {{"scale", vector_to_hex(model.basis.rescale.scale)},
                      {"offset", vector_to_hex(model.basis.rescale.offset)}};
  j["theta"] = vector_to_hex(model.theta);
  return j.dump(2);
}

PceModel model_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  PceModel model;
  for (const auto& mi : j.at("multi_indices"))
    model.basis.monomials.push_back(mi.get<MultiIndex>());
  const auto& coeff_arr = j.at("monomial_coefficients");
  const Index t = static_cast<Index>(model.basis.monomials.size());
  const Index b = static_cast<Index>(coeff_arr.size());
  model.basis.coeffs.resize(t, b);
  for (Index k = 0; k < b; ++k)
    model.basis.coeffs.col(k) = vector_from_hex(coeff_arr[static_cast<std::size_t>(k)]);
  model.basis.rescale.scale = vector_from_hex(j.at("rescale_map").at("scale"));
  model.basis.rescale.offset = vector_from_hex(j.at("rescale_map").at("offset"));
  model.theta = vector_from_hex(j.at("theta"));
  model.basis.values.resize(0, b);
  model.basis.source.assign(static_cast<std::size_t>(b), -1);
  if (model.theta.size() != b)
    throw IoError("model JSON: theta length does not match basis size");
  return model;
}

void save_model(const std::string& path, const PceModel& model) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << model_to_json(model) << '\n';
}

PceModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace pce
