// Scratch numeric probe (not part of the build).
#include "pce/benchmark.hpp"
#include "pce/distributions.hpp"
#include "pce/fss.hpp"
#include "pce/models.hpp"
#include "pce/stats.hpp"

#include <chrono>
#include <cstdio>

using namespace pce;

static double sample_sd(const Vector& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).matrix().squaredNorm() / double(v.size() - 1));
}

int main() {
  {  // Example 2 output sd (paper reference 1.655)
    const Dataset d = example2_sample(2000000, 1);
    std::printf("example2 sd (2e6): %.5f\n", sample_sd(d.outputs));
  }
  {  // HIV output sd under the (theta_d - kappa) reading (paper reference 0.252)
    const Dataset d = hiv_sample(1000000, 2);
    std::printf("hiv sd (1e6): %.5f  mean R0: %.5f\n", sample_sd(d.outputs), d.outputs.mean());
    Vector mid(10);
    const double lo[10] = {0.0261, 0.027, 0.36, 0.18, 0.072, 1.8, 1.8, 0.018, 0.54, 0.09};
    const double hi[10] = {0.0319, 0.033, 0.44, 0.22, 0.088, 2.2, 2.2, 0.022, 0.66, 0.11};
    for (int j = 0; j < 10; ++j) mid[j] = 0.5 * (lo[j] + hi[j]);
    std::printf("hiv R0 at midpoints: %.6f\n", hiv_r0(mid));
  }
  {  // Truss output sd (paper MC reference 2.169)
    const auto t0 = std::chrono::steady_clock::now();
    const auto [mc, se] = monte_carlo_reference(get_model("truss"), 20, 100000, 7, 2);
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("truss MC sd (20x1e5): %.5f +- %.5f   [%.1f s]\n", mc, se, dt);
  }
  {  // Ishigami analytic reference
    std::printf("ishigami analytic sd: %.6f\n", ishigami_reference_sd());
  }
  {  // Gram-Schmidt orthogonality at the worst acceptance-criterion case
    for (int rep = 0; rep < 3; ++rep) {
      const int n = 5, p = 6;
      const auto idx = total_degree_indices(n, p);
      const Index m = 2 * Index(idx.size());
      SplitMix64 rng(100 + rep);
      Dataset d{Matrix(m, n), Vector(m)};
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) d.inputs(i, j) = rng.uniform(-1.0, 2.0);
      d.outputs = d.inputs.col(0);
      GramSchmidtOptions opts;
      const auto gs = build_monomial_basis(d, p, opts);
      std::printf("MGS gram deviation n=5 p=6 m=%ld: %.3e (size %ld)\n", long(m),
                  gs.basis.gram_deviation(), long(gs.basis.size()));
    }
  }
  {  // C-vine Kendall tau at theta=1.1 (expect 1 - 1/1.1 = 0.0909)
    SplitMix64 rng(11);
    const Matrix u = sample_cvine(CVineSpec::uniform_theta(6, 1.1), 100000, rng);
    for (int j = 1; j < 6; ++j)
      std::printf("tau(u1,u%d) = %.4f  ", j + 1, kendall_tau(u.col(0), u.col(j)));
    std::printf("\n");
  }
  return 0;
}
