#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rankzo/core.hpp"
#include "rankzo/errors.hpp"
#include "rankzo/verify.hpp"

using namespace rankzo;
using namespace rankzo::verify;

namespace {

// Maclaurin series of erf, summed to convergence; independent of std::erf.
double erf_series(double x) {
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    const double add = term / (2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-18) break;
  }
  return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

double phi_series(double x) { return 0.5 * (1.0 + erf_series(x / std::numbers::sqrt2)); }

}  // namespace

TEST(Divergence, KnownValues) {
  EXPECT_EQ(kl_binary(0.3, 0.3), 0.0);
  EXPECT_NEAR(kl_binary(0.25, 0.0224), 0.404329453335082, 1e-13);
  EXPECT_NEAR(kl_binary(0.5, 0.25), 0.143841036225890, 1e-13);
  EXPECT_GT(kl_binary(0.1, 0.2), 0.0);
  EXPECT_THROW(kl_binary(0.0, 0.5), DomainError);
  EXPECT_THROW(kl_binary(0.5, 1.0), DomainError);
}

TEST(NormalCdf, MatchesSeriesOracle) {
  for (double x : {-3.0, -1.5, -0.2, 0.0, 0.3, 1.0, 2.0, 2.5}) {
    EXPECT_NEAR(normal_cdf(x), phi_series(x), 1e-14) << x;
  }
  EXPECT_NEAR(upper_tail_at_two(), 0.0227501319481792, 1e-15);
  EXPECT_NEAR(normal_cdf(0.3), 0.617911422188953, 1e-14);
}

TEST(ChiSquare, MatchesReferenceTails) {
  // scipy.stats.chi2.sf
  EXPECT_NEAR(chi_square_sf(1, 0.5), 0.47950012218695337, 1e-14);
  EXPECT_NEAR(chi_square_sf(2, 3.0), 0.22313016014842982, 1e-14);
  EXPECT_NEAR(chi_square_sf(3, 2.5), 0.4752910833430205, 1e-14);
  EXPECT_NEAR(chi_square_sf(5, 7.0), 0.22064030793671066, 1e-14);
  EXPECT_NEAR(chi_square_sf(20, 25.99146454710798), 0.16609396198194432, 1e-13);
  EXPECT_NEAR(chi_square_sf(4, 40.0), 4.328422607120966e-08, 1e-20);
  EXPECT_NEAR(chi_square_sf(1, 2.0 + 3.0 * std::log(2.0)), 0.04340800333225633, 1e-14);
  EXPECT_EQ(chi_square_sf(3, 0.0), 1.0);
  EXPECT_THROW(chi_square_sf(0, 1.0), DomainError);
}

TEST(McReport, PassRules) {
  const McReport lower = make_report("x", BoundKind::Lower, 10000, 9000, 0.908);
  EXPECT_DOUBLE_EQ(lower.empirical_freq, 0.9);
  EXPECT_NEAR(lower.standard_error, 0.003, 1e-12);
  EXPECT_TRUE(lower.pass);  // 0.9 >= 0.908 - 0.009
  EXPECT_FALSE(make_report("x", BoundKind::Lower, 10000, 9000, 0.92).pass);
  const McReport upper = make_report("x", BoundKind::Upper, 10000, 600, 0.05);
  EXPECT_FALSE(upper.pass);  // 0.06 > 0.05 + 3 * 0.00237
  EXPECT_TRUE(make_report("x", BoundKind::Upper, 10000, 550, 0.05).pass);
}

TEST(OrderStatistics, ExactProbability) {
  // multinomial sums in 30-digit arithmetic (mpmath)
  EXPECT_NEAR(order_statistics_event_probability(4, 0.3), 0.5454, 1e-12);
  EXPECT_NEAR(order_statistics_event_probability(8, upper_tail_at_two()),
              9.95025479147577e-05, 1e-16);
  EXPECT_NEAR(order_statistics_event_probability(64, upper_tail_at_two()) / 7.21103505911069e-27,
              1.0, 1e-9);
}

TEST(OrderStatistics, SmallNReportWellFormed) {
  const McReport r = mc_order_statistics_event(4, 10000, 1);
  EXPECT_EQ(r.trials, 10000);
  EXPECT_DOUBLE_EQ(r.empirical_freq, static_cast<double>(r.successes) / 10000.0);
  // 1 - 2 exp(-4 K(1/4 || 0.0224)); the event itself is rare at N = 4
  EXPECT_NEAR(r.theoretical_bound, 1.0 - 2.0 * std::exp(-4.0 * 0.404329453335082), 1e-12);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(*r.detail("p_bound"), 0.0224, 0.0);
  EXPECT_NEAR(*r.detail("p_exact"), 0.0227501319481792, 1e-15);
  // Pr(at least one of 4 draws >= 2 and one <= -2)
  const double p = upper_tail_at_two();
  EXPECT_NEAR(r.empirical_freq, order_statistics_event_probability(4, p), 5.0 * r.standard_error + 1e-4);
}

TEST(OrderStatistics, SeedDeterminism) {
  const McReport a = mc_order_statistics_event(16, 2000, 7);
  const McReport b = mc_order_statistics_event(16, 2000, 7);
  EXPECT_EQ(a.successes, b.successes);
  EXPECT_THROW(mc_order_statistics_event(16, 10, 7), DomainError);
  EXPECT_THROW(mc_order_statistics_event(10, 2000, 7), DomainError);
}

TEST(VectorNorm, Dim1TailMatchesChiSquare) {
  const McReport r = mc_vector_norm_bound(1, 0.5, 100000, 3);
  EXPECT_NEAR(*r.detail("threshold"), 2.0 + 3.0 * std::log(2.0), 1e-12);
  EXPECT_NEAR(r.empirical_freq, 0.04340800333225633, 4.0 * r.standard_error);
  EXPECT_TRUE(r.pass);
}

TEST(VectorNorm, Dim50) {
  const McReport r = mc_vector_norm_bound(50, 0.05, 10000, 4);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(*r.detail("exact_violation_probability"), 2.853950316318871e-06, 1e-15);
}

TEST(DirectionNorm, MeanMatchesClosedForm) {
  const McReport r = mc_direction_norm_bound(32, 20, 0.05, 20000, 5);
  EXPECT_NEAR(*r.detail("reference_mean"), 5.0, 0.0);
  EXPECT_NEAR(*r.detail("mean_sq_norm"), 5.0, 4.0 * *r.detail("mean_sq_norm_se"));
  // ||d||^2 = (8/N) chi^2_d exactly under a fixed ranking
  EXPECT_NEAR(r.empirical_freq, *r.detail("exact_violation_probability"), 4.0 * r.standard_error);
}

TEST(DirectionNorm, DoublingNHalvesMean) {
  const double m32 = *mc_direction_norm_bound(32, 20, 0.05, 20000, 6).detail("mean_sq_norm");
  const double m64 = *mc_direction_norm_bound(64, 20, 0.05, 20000, 6).detail("mean_sq_norm");
  EXPECT_NEAR(m64 / m32, 0.5, 0.05);
}

TEST(ScalarGaussian, TailAndMax) {
  const ScalarGaussianReport r = mc_scalar_gaussian_bounds(2.0, 100, 0.1, 100000, 8);
  EXPECT_NEAR(r.tail.theoretical_bound, 2.0 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(r.tail.empirical_freq, 2.0 * upper_tail_at_two(), 4.0 * r.tail.standard_error);
  EXPECT_TRUE(r.pass());
  const ScalarGaussianReport tiny = mc_scalar_gaussian_bounds(1e-9, 4, 0.5, 1000, 1);
  EXPECT_GE(tiny.tail.theoretical_bound, 1.0);
  EXPECT_TRUE(tiny.tail.pass);
}

TEST(DescentSum, NegativeMeanAndRotationInvariance) {
  const McReport a = mc_descent_sum_bound(8, 5, 5000, 9);
  EXPECT_LT(*a.detail("mean_S") + 5.0 * *a.detail("mean_S_se"), 0.0);
  Vector g = Vector::Ones(5);
  const McReport b = mc_descent_sum_bound(8, 5, 5000, 10, g);
  const double se = std::hypot(*a.detail("mean_S_se"), *b.detail("mean_S_se"));
  EXPECT_LT(std::abs(*a.detail("mean_S") - *b.detail("mean_S")), 3.0 * se);
  EXPECT_THROW(mc_descent_sum_bound(8, 5, 5000, 9, Vector::Zero(5)), DomainError);
}

TEST(DescentSum, MeanMatchesOrderStatistics) {
  // E S = -2 E[sum of the N/4 largest of N standard normals]; -40.08 for N = 64
  // (numpy, 2e5 sorted samples).
  const McReport r = mc_descent_sum_bound(64, 50, 10000, 11);
  EXPECT_NEAR(*r.detail("mean_S"), -40.08, 5.0 * *r.detail("mean_S_se") + 0.05);
}

TEST(Recursion, ZeroRhoGivesBeta) {
  const std::vector<double> rho(5, 0.0);
  const std::vector<double> beta = {0.1, 0.2, 0.3, 0.4, 0.5};
  const auto d = recursion_sequence(rho, beta, 9.0);
  for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(d[t + 1], beta[t]);
  EXPECT_TRUE(check_recursion_unroll(rho, beta, 9.0));
}

TEST(Recursion, TelescopesWithUnitRho) {
  const std::vector<double> rho(10, 1.0);
  const std::vector<double> beta(10, 0.25);
  const auto d = recursion_sequence(rho, beta, 2.0);
  for (std::size_t t = 0; t <= 10; ++t) EXPECT_DOUBLE_EQ(d[t], 2.0 + 0.25 * t);
  EXPECT_TRUE(check_recursion_unroll(rho, beta, 2.0));
}

TEST(Recursion, RandomSweep) {
  const SweepResult r = sweep_recursion_unroll(1000, 12);
  EXPECT_EQ(r.cases, 1000);
  EXPECT_EQ(r.violations, 0);
  const std::vector<double> rho(2, 0.0);
  const std::vector<double> beta(3, 0.0);
  EXPECT_THROW(check_recursion_unroll(rho, beta, 1.0), DomainError);
}

TEST(SequenceRate, Examples) {
  EXPECT_TRUE(check_sequence_rate(0.0, 1.0, 100));
  EXPECT_TRUE(check_sequence_rate(1.0, 0.0, 100));
  const SweepResult r = sweep_sequence_rate(100, 200, 13);
  EXPECT_EQ(r.violations, 0);
  EXPECT_THROW(check_sequence_rate(1.0, 1.0, 100, 10.0), DomainError);
}

TEST(ConvexityBounds, Quadratics) {
  auto tight = functions::make_quadratic(6, 1.0, 1.0, functions::NoiseSpec{0.0}, 2.0);
  EXPECT_TRUE(check_convexity_bounds(*tight, 1000, 1));
  Rng rng = make_rng(2);
  for (int i = 0; i < 100; ++i) {
    const Vector x = tight->sample_region_point(rng);
    EXPECT_NEAR(tight->gradient(x).squaredNorm(), 2.0 * tight->value(x), 1e-10);
  }
  auto wide = functions::make_quadratic(6, 1.0, 4.0, functions::NoiseSpec{0.0}, 2.0);
  EXPECT_TRUE(check_convexity_bounds(*wide, 1000, 3));
}

TEST(ConvexityBounds, CosineSmoothSideOnly) {
  auto p = functions::make_nonconvex_cosine(5, 2.0, functions::NoiseSpec{0.0}, 2.0);
  EXPECT_TRUE(check_convexity_bounds(*p, 1000, 4));
  EXPECT_THROW(check_convexity_bounds(*p, 10, 4), DomainError);
}
