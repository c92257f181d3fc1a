#include "pce/models.hpp"

#include "pce/distributions.hpp"
#include "pce/metrics.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace pce {

double ishigami(double x1, double x2, double x3) {
  const double s2 = std::sin(x2);
  return std::sin(x1) + 7.0 * s2 * s2 + 0.1 * x3 * x3 * x3 * x3 * std::sin(x1);
}

double ishigami_reference_sd() {
  const double a = 7.0, b = 0.1;
  const double pi4 = std::pow(std::numbers::pi, 4);
  const double pi8 = pi4 * pi4;
  return std::sqrt(a * a / 8.0 + b * pi4 / 5.0 + b * b * pi8 / 18.0 + 0.5);
}

Dataset ishigami_sample(Index count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Dataset data{Matrix(count, 3), Vector(count)};
  for (Index i = 0; i < count; ++i) {
    for (Index j = 0; j < 3; ++j)
      data.inputs(i, j) = rng.uniform(-std::numbers::pi, std::numbers::pi);
    data.outputs[i] = ishigami(data.inputs(i, 0), data.inputs(i, 1), data.inputs(i, 2));
  }
  return data;
}

Dataset example2_sample(Index count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix sigma = Matrix::Identity(4, 4);
  sigma(2, 3) = sigma(3, 2) = 0.3;
  const Matrix gauss = sample_mvn(GaussianCovariance(sigma), Vector::Zero(4), count, rng);

  Dataset data{Matrix(count, 6), Vector(count)};
  data.inputs.leftCols(4) = gauss;
  for (Index i = 0; i < count; ++i) {
    // One latent driver and one shared additive noise; only X5 and X6 are observed.
    const double x = rng.uniform01();
    const double u = rng.uniform01();
    const double x5 = 0.4 * x + u;
    const double x6 = 0.6 * x + x * x + u;
    data.inputs(i, 4) = x5;
    data.inputs(i, 5) = x6;
    data.outputs[i] = gauss(i, 0) * gauss(i, 1) + gauss(i, 2) * gauss(i, 3) + x5 * x6;
  }
  return data;
}

namespace {

// Response-surface coefficients over standardized inputs
// z = (E1', E2', A1', A2', P1'..P6').
constexpr double kTrussIntercept = 2.8070;
constexpr double kTrussLinear[10] = {1.2598,  0.2147,  1.2559,  0.2133,  -0.1510,
                                     -0.4238, -0.6100, -0.6100, -0.4238, -0.1510};
constexpr double kTrussSquare[10] = {-0.1978, -0.0362, -0.2016, -0.0346, 0.0023,
                                     0.0008,  0.0036,  0.0036,  0.0008,  0.0023};
struct TrussCross {
  int i, j;
  double c;
};
constexpr TrussCross kTrussCross[] = {
    {0, 1, -0.0042}, {0, 2, -0.3022}, {0, 3, -0.0110}, {0, 4, 0.0381}, {0, 5, 0.0871},
    {0, 6, 0.1232},  {0, 7, 0.1232},  {0, 8, 0.0871},  {0, 9, 0.0346}, {1, 2, 0.0041},
    {2, 3, 0.0110},  {2, 4, 0.0261},  {2, 5, 0.0831},  {2, 6, 0.1172}, {2, 7, 0.1172},
    {2, 8, 0.0832},  {2, 9, 0.0296}};

constexpr double kTrussMeans[10] = {2.1e11, 2.1e11, 2.0e-3, 1.0e-3, 5.0e4,
                                    5.0e4,  5.0e4,  5.0e4,  5.0e4,  5.0e4};
constexpr double kTrussSds[10] = {2.1e10, 2.1e10, 2.0e-4, 1.0e-4, 7.5e3,
                                  7.5e3,  7.5e3,  7.5e3,  7.5e3,  7.5e3};

}  // namespace

double truss_response_standardized(const Eigen::Ref<const Vector>& z) {
  double y = kTrussIntercept;
  for (int j = 0; j < 10; ++j) y += kTrussLinear[j] * z[j] + kTrussSquare[j] * z[j] * z[j];
  for (const auto& t : kTrussCross) y += t.c * z[t.i] * z[t.j];
  return y;
}

Dataset truss_sample(Index count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const auto [alpha, beta] = gumbel_params_from_moments(5.0e4, 7.5e3);
  const MarginalSpec e_spec = MarginalSpec::lognormal(2.1e11, 2.1e10);
  const MarginalSpec a1_spec = MarginalSpec::lognormal(2.0e-3, 2.0e-4);
  const MarginalSpec a2_spec = MarginalSpec::lognormal(1.0e-3, 1.0e-4);
  const CVineSpec vine = CVineSpec::uniform_theta(6, 1.1);

  Dataset data{Matrix(count, 10), Vector(count)};
  Vector z(10);
  double u[6];
  for (Index i = 0; i < count; ++i) {
    data.inputs(i, 0) = draw_marginal(e_spec, rng);
    data.inputs(i, 1) = draw_marginal(e_spec, rng);
    data.inputs(i, 2) = draw_marginal(a1_spec, rng);
    data.inputs(i, 3) = draw_marginal(a2_spec, rng);
    sample_cvine_row(vine, rng, u);
    for (Index j = 0; j < 6; ++j)
      data.inputs(i, 4 + j) = gumbel_quantile(alpha, beta, u[j]);
    for (int j = 0; j < 10; ++j)
      z[j] = (data.inputs(i, j) - kTrussMeans[j]) / kTrussSds[j];
    data.outputs[i] = truss_response_standardized(z);
  }
  return data;
}

namespace {

constexpr double kHivLo[10] = {0.0261, 0.027, 0.36, 0.18, 0.072, 1.8, 1.8, 0.018, 0.54, 0.09};
constexpr double kHivHi[10] = {0.0319, 0.033, 0.44, 0.22, 0.088, 2.2, 2.2, 0.022, 0.66, 0.11};

}  // namespace

double hiv_r0(const Eigen::Ref<const Vector>& x) {
  const double q0 = x[0], beta0 = x[1], gamma = x[2], beta1 = x[3], beta2 = x[4];
  const double n1 = x[5], n2 = x[6], theta_d = x[7], alpha = x[8], kappa = x[9];
  const double num = beta0 * (1.0 - gamma) * theta_d * theta_d +
                     beta1 * n1 * q0 * (theta_d - kappa) + beta2 * n2 * alpha * q0 +
                     (1.0 - gamma) * (kappa + alpha) * beta0 * theta_d;
  const double den = theta_d * (theta_d + kappa) * (theta_d + alpha);
  return num / den;
}

Dataset hiv_sample(Index count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Dataset data{Matrix(count, 10), Vector(count)};
  // (beta1, n1) and (beta2, n2) carry the target Pearson correlations; the
  // range maps are affine, so the correlations survive them.
  const Matrix pair1 = sample_correlated_uniforms(0.3, count, rng);
  const Matrix pair2 = sample_correlated_uniforms(0.5, count, rng);
  for (Index i = 0; i < count; ++i) {
    Vector u(10);
    u[3] = pair1(i, 0);
    u[5] = pair1(i, 1);
    u[4] = pair2(i, 0);
    u[6] = pair2(i, 1);
    for (int j : {0, 1, 2, 7, 8, 9}) u[j] = rng.uniform01();
    for (int j = 0; j < 10; ++j)
      data.inputs(i, j) = kHivLo[j] + (kHivHi[j] - kHivLo[j]) * u[j];
    data.outputs[i] = hiv_r0(data.inputs.row(i));
  }
  return data;
}

TestModel get_model(const std::string& name) {
  if (name == "ishigami")
    return {"ishigami", 3, ishigami_reference_sd(), "analytic", ishigami_sample};
  if (name == "example2") return {"example2", 6, 1.655, "paper", example2_sample};
  if (name == "truss") return {"truss", 10, 2.169, "monte-carlo", truss_sample};
  if (name == "hiv") return {"hiv", 10, 0.252, "paper", hiv_sample};
  throw ParameterError("unknown model: " + name);
}

std::pair<double, double> monte_carlo_reference(const TestModel& model, int runs,
                                                Index samples_per_run, std::uint64_t seed,
                                                int jobs) {
  if (runs < 1 || samples_per_run < 2)
    throw ParameterError("monte_carlo_reference requires runs >= 1 and samples >= 2");
  std::vector<double> sds(static_cast<std::size_t>(runs));
  const auto worker = [&](int r) {
    const Dataset d = model.sample(samples_per_run, mix_seed(seed, static_cast<std::uint64_t>(r)));
    const double mean = d.outputs.mean();
    const double ss = (d.outputs.array() - mean).matrix().squaredNorm();
    sds[static_cast<std::size_t>(r)] = std::sqrt(ss / static_cast<double>(d.size() - 1));
  };
  if (jobs <= 1) {
    for (int r = 0; r < runs; ++r) worker(r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) worker(r);
      });
    for (auto& th : pool) th.join();
  }
  const RunAggregate agg = summarize_runs(sds);
  return {agg.mean, agg.standard_error};
}

}  // namespace pce
