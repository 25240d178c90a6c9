#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "spinlab/error.hpp"
#include "spinlab/estimate.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/samplers.hpp"
#include "spinlab/stats.hpp"

using namespace spinlab;

namespace {

SpinConfig random_spins(const InteractionGraph& g, Rng& rng) { return random_config(g, Boundary::Free, rng); }

}  // namespace

TEST(PseudoLikelihood, GradientMatchesFiniteDifferences) {
  const auto g = build_lattice(2, 6);
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const auto x = random_spins(g, rng);
    const double b = 2.0 * uniform01(rng), h = uniform01(rng) - 0.5;
    const auto pl = pseudo_loglik(b, h, x, g);
    const double e = 1e-5;
    const double db = (pseudo_loglik(b + e, h, x, g).value - pseudo_loglik(b - e, h, x, g).value) / (2 * e);
    const double dh = (pseudo_loglik(b, h + e, x, g).value - pseudo_loglik(b, h - e, x, g).value) / (2 * e);
    EXPECT_NEAR(pl.gradient[0], db, 1e-6 * (1 + std::abs(db)));
    EXPECT_NEAR(pl.gradient[1], dh, 1e-6 * (1 + std::abs(dh)));
    const double hbb = (pseudo_loglik(b + e, h, x, g).gradient[0] - pseudo_loglik(b - e, h, x, g).gradient[0]) / (2 * e);
    const double hbh = (pseudo_loglik(b, h + e, x, g).gradient[0] - pseudo_loglik(b, h - e, x, g).gradient[0]) / (2 * e);
    EXPECT_NEAR(pl.hessian[0][0], hbb, 1e-5 * (1 + std::abs(hbb)));
    EXPECT_NEAR(pl.hessian[0][1], hbh, 1e-5 * (1 + std::abs(hbh)));
    EXPECT_DOUBLE_EQ(pl.hessian[0][1], pl.hessian[1][0]);
  }
}

TEST(PseudoLikelihood, HessianNegativeSemidefinite) {
  const auto g = build_lattice(2, 5);
  Rng rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = random_spins(g, rng);
    const auto pl = pseudo_loglik(5.0 * uniform01(rng), 4.0 * uniform01(rng) - 2.0, x, g);
    const auto& H = pl.hessian;
    EXPECT_LE(H[0][0], 1e-12);
    EXPECT_LE(H[1][1], 1e-12);
    EXPECT_GE(H[0][0] * H[1][1] - H[0][1] * H[1][0], -1e-9 * (1 + H[0][0] * H[0][0] + H[1][1] * H[1][1]));
  }
}

TEST(PseudoLikelihood, SingleSiteTerm) {
  const auto g = build_custom(1, {});
  SpinConfig x{{1}, {}};
  const auto pl = pseudo_loglik(0.7, 0.4, x, g);
  EXPECT_NEAR(pl.value, 0.4 - std::log(2 * std::cosh(0.4)), 1e-15);
  EXPECT_NEAR(pl.gradient[1], 1 - std::tanh(0.4), 1e-15);
  EXPECT_DOUBLE_EQ(pl.gradient[0], 0.0);
}

TEST(Fit, ConstantConfigurationIsDegenerate) {
  const auto g = build_lattice(2, 4);
  EXPECT_THROW(fit_pseudo_likelihood(make_config(g, Boundary::Free, 1), g), DegenerateError);
  EXPECT_THROW(fit_pseudo_likelihood(make_config(g, Boundary::Free, -1), g), DegenerateError);
}

TEST(Fit, NoEdgesRecoversAtanhOfMean) {
  const std::size_t n = 50;
  const auto g = build_custom(n, {});
  Rng rng(4);
  SpinConfig x{std::vector<std::int8_t>(n), {}};
  double sum = 0;
  for (auto& s : x.spins) {
    s = uniform01(rng) < 0.7 ? 1 : -1;
    sum += s;
  }
  const auto rec = fit_pseudo_likelihood(x, g);
  EXPECT_TRUE(rec.converged);
  EXPECT_NEAR(rec.h_hat, std::atanh(sum / n), 1e-7);
}

TEST(Fit, StationaryPointAndBounds) {
  const auto g = build_lattice(2, 16);
  const auto x = draw_state(g, IsingParams::uniform_field(256, 0.3, 0.1), UpdateKind::Cluster, 200, 17);
  const auto rec = fit_pseudo_likelihood(x, g);
  ASSERT_TRUE(rec.converged);
  const auto pl = pseudo_loglik(rec.beta_hat, rec.h_hat, x, g);
  if (rec.beta_hat > 0) EXPECT_LT(std::hypot(pl.gradient[0], pl.gradient[1]), 1e-8);
  EXPECT_GE(rec.beta_hat, 0.0);
  EXPECT_LE(rec.beta_hat, 5.0);
  // Nearby points do not improve the objective.
  for (double db : {-1e-3, 1e-3})
    for (double dh : {-1e-3, 1e-3})
      EXPECT_LE(pseudo_loglik(std::max(0.0, rec.beta_hat + db), rec.h_hat + dh, x, g).value, rec.objective_final + 1e-12);

  FitOptions opts;
  opts.init = std::array<double, 2>{4.0, -1.0};
  const auto other = fit_pseudo_likelihood(x, g, opts);
  ASSERT_TRUE(other.converged);
  EXPECT_NEAR(other.beta_hat, rec.beta_hat, 1e-6);
  EXPECT_NEAR(other.h_hat, rec.h_hat, 1e-6);
}

TEST(Fit, ApproximatelyUnbiasedOnLargeBox) {
  const auto g = build_lattice(2, 32);
  const double beta = 0.2, h = 0.1;
  const auto p = IsingParams::uniform_field(g.size(), beta, h);
  std::vector<double> bs, hs;
  for (std::uint64_t r = 0; r < 200; ++r) {
    const auto rec = fit_pseudo_likelihood(draw_state(g, p, UpdateKind::Cluster, 200, derive_seed(5, 0, r)), g);
    ASSERT_TRUE(rec.converged);
    bs.push_back(rec.beta_hat);
    hs.push_back(rec.h_hat);
  }
  const auto mb = stats::mean_se(bs), mh = stats::mean_se(hs);
  EXPECT_NEAR(mb.mean, beta, 3 * mb.se);
  EXPECT_NEAR(mh.mean, h, 3 * mh.se);
}

TEST(LowerBound, IndependentSpins) {
  const auto g = build_lattice(2, 10);
  const auto lb = lower_bound_value(g, 0.0);
  EXPECT_NEAR(lb.var_s, 100.0, 1e-9);
  EXPECT_NEAR(lb.q_sq, 2.0 * 180, 1e-12);
  EXPECT_NEAR(lb.bound, 1.0 / 360 + 1.0 / 100, 1e-12);
}

TEST(LowerBound, BoundedDegreeScalesAsInverseN) {
  for (int side : {4, 8, 16}) {
    const auto g = build_lattice(2, side);
    const double n = static_cast<double>(g.size());
    const double C = g.max_row_sum();
    EXPECT_LE(g.sum_squared_couplings(), C * C * n + 1e-9);
    McOptions mc;
    mc.sweeps = 2000;
    mc.burn_in = 200;
    EXPECT_GE(lower_bound_value(g, 0.2, mc).bound, 1.0 / (C * C * n));
  }
}

TEST(LowerBound, ExactOnSmallBox) {
  const auto g = build_lattice(2, 4);
  const auto lb = lower_bound_value(g, 0.3);
  EXPECT_TRUE(lb.exact);
  EXPECT_GT(lb.var_s, 16.0);
}

TEST(Mse, SmallExperimentShape) {
  MseSpec spec;
  spec.beta = 0.2;
  spec.h = 0.1;
  spec.n_grid = {64, 256};
  spec.replicates = 40;
  spec.sweeps = 100;
  spec.bound_mc.sweeps = 1000;
  spec.bound_mc.burn_in = 100;
  const auto rows = mse_experiment(square_lattice_of_size, spec);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].n, 64u);
  EXPECT_TRUE(std::isnan(rows[0].slope_running));
  EXPECT_FALSE(std::isnan(rows[1].slope_running));
  EXPECT_EQ(rows[1].fits + rows[1].excluded, 40u);
  EXPECT_LT(rows[1].mse_beta, rows[0].mse_beta);
  std::ostringstream csv;
  write_mse_csv(csv, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "n,mse_beta,mse_h,bound_qsq,bound_var,slope_running,excluded");
  const auto again = mse_experiment(square_lattice_of_size, spec);
  EXPECT_EQ(again[1].mse_beta, rows[1].mse_beta);
  EXPECT_THROW(square_lattice_of_size(50), ParameterError);
}
