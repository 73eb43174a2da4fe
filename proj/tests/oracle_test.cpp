#include "dpricing/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "dpricing/scenarios.hpp"

namespace dpricing::oracle {
namespace {

MarketParams with_lambda(double lambda) {
  auto p = default_params();
  p.lambda = lambda;
  return p;
}

TEST(ScanSpec, GridIncludesBothEnds) {
  const ScanSpec s{10.0, 38.0, 1e-4};
  EXPECT_EQ(s.intervals(), 280000u);
  EXPECT_EQ(s.point(0), 10.0);
  EXPECT_EQ(s.point(s.intervals()), 38.0);

  const ScanSpec odd{0.0, 1.0, 0.3};
  EXPECT_EQ(odd.intervals(), 4u);
  EXPECT_NEAR(odd.point(3), 0.9, 1e-15);
  EXPECT_EQ(odd.point(4), 1.0);
}

TEST(ScanSpec, RejectsDegenerateScans) {
  EXPECT_THROW((ScanSpec{1.0, 1.0, 0.1}.check()), StructuralError);
  EXPECT_THROW((ScanSpec{2.0, 1.0, 0.1}.check()), StructuralError);
  EXPECT_THROW((ScanSpec{0.0, 1.0, 0.0}.check()), StructuralError);
  EXPECT_THROW((ScanSpec{0.0, 100.0, 1e-6}.check()), StructuralError);
  EXPECT_NO_THROW((ScanSpec{0.0, 10.0, 1e-6}.check()));
}

TEST(Scan, TiesGoToSmallerArgument) {
  const ScanSpec s{-2.0, 2.0, 0.5};
  const auto r = scan_minimize([](double x) { return std::abs(std::abs(x) - 1.0); }, s);
  EXPECT_EQ(r.argument, -1.0);
  const auto flat = scan_maximize([](double) { return 3.0; }, s);
  EXPECT_EQ(flat.argument, -2.0);
  EXPECT_EQ(flat.index, 0u);
}

TEST(Scan, CoarseToFineAgreesWithExhaustiveOnConvexFunctions) {
  const ScanSpec s{0.0, 50.0, 1e-3};
  for (double centre : {0.0, 1e-3, 7.3217, 25.0, 49.9995, 50.0, 80.0, -4.0}) {
    auto f = [centre](double x) { return (x - centre) * (x - centre) * (1.0 + 0.01 * x); };
    const auto a = scan_minimize(f, s, ScanStrategy::exhaustive);
    const auto b = scan_minimize(f, s, ScanStrategy::coarse_to_fine);
    EXPECT_EQ(a.index, b.index) << "centre " << centre;
    EXPECT_EQ(a.argument, b.argument);
  }
}

TEST(BestResponseOracle, ZeroPrice) {
  const auto u = EnergyUser::make("u", 10, 1);
  EXPECT_NEAR(best_response_oracle(0.0, u, response_scan(u)), 5.0, 1e-3);
}

TEST(BestResponseOracle, AgreesWithClosedForm) {
  const auto a = EnergyUser::make("u", 150, 2);
  EXPECT_NEAR(best_response_oracle(12.038, a, response_scan(a)), 40.5095, 1e-3);
  EXPECT_NEAR(best_response_oracle(12.038, a, response_scan(a)), best_response(12.038, a), 1e-3);
  const auto b = EnergyUser::make("u", 150, 3);
  EXPECT_NEAR(best_response_oracle(38.0, b, response_scan(b)), 31.333, 1e-3);
}

TEST(BestResponseOracle, RequiresFullRange) {
  const auto u = EnergyUser::make("u", 150, 2);
  EXPECT_THROW(best_response_oracle(10.0, u, ScanSpec{0.0, 100.0, 1e-3}), StructuralError);
}

TEST(RefinedResponseOracle, WellBelowGridStep) {
  for (double alpha : {0.5, 1.0, 3.0}) {
    for (double c : {0.0, 10.0, 38.0}) {
      const auto u = EnergyUser::make("u", 120, alpha);
      EXPECT_NEAR(refined_response_oracle(c, u), (c + 120.0) / (2.0 * alpha), 1e-9);
    }
  }
}

TEST(Stage1PriceOracle, InteriorAndLowerBoundary) {
  const SfaCostCoefficients k{};
  const auto p = with_lambda(1000);
  EXPECT_NEAR(stage1_price_oracle(EnergyUser::make("u", 150, 2), k, p, price_scan(p)), 12.0377,
              1e-4);
  EXPECT_EQ(stage1_price_oracle(EnergyUser::make("u", 150, 1), k, p, price_scan(p)), 10.0);
}

TEST(Stage1PriceOracle, DegenerateMultiplierHitsLowerBound) {
  const SfaCostCoefficients k{};
  auto p = with_lambda(k.a);
  p.grid_price = 0.0;
  EXPECT_EQ(stage1_price_oracle(EnergyUser::make("u", 150, 2), k, p, price_scan(p)), p.price_min);
}

TEST(Stage1PriceOracle, ScanMustCoverBox) {
  const auto p = default_params();
  EXPECT_THROW(stage1_price_oracle(EnergyUser::make("u", 150, 2), {}, p, ScanSpec{12, 38, 1e-3}),
               StructuralError);
}

TEST(FiniteDifference, UtilityCurvature) {
  const auto u = EnergyUser::make("u", 150, 2.5);
  auto f = [&](double e) { return utility(e, 20.0, u); };
  const auto d = finite_difference(f, 30.0, 1e-3);
  EXPECT_NEAR(d.second, -5.0, 1e-4);
  EXPECT_NEAR(d.first, 20.0 + 150.0 - 2.0 * 2.5 * 30.0, 1e-6);
}

TEST(FiniteDifference, LeaderTermCurvature) {
  const auto u = EnergyUser::make("u", 150, 2);
  const auto p = default_params();
  auto f = [&](double c) { return stage1_objective_oracle(c, u, {}, p); };
  for (double c : {10.0, 20.0, 37.0}) {
    const auto d = finite_difference(f, c, 1e-3);
    EXPECT_NEAR(d.second, (6.0 * c + 2.0 * 150.0) / 4.0, 1e-2) << "c=" << c;
    EXPECT_GT(d.second, 0.0);
  }
}

TEST(FiniteDifference, ConstantFunction) {
  const auto d = finite_difference([](double) { return 4.2; }, 1.0, 1e-3);
  EXPECT_EQ(d.first, 0.0);
  EXPECT_EQ(d.second, 0.0);
  EXPECT_THROW(finite_difference([](double) { return 0.0; }, 1.0, 0.0), DomainError);
}

void expect_outcomes_match(const EquilibriumOutcome& a, const EquilibriumOutcome& b,
                           double price_tol) {
  ASSERT_EQ(a.prices.size(), b.prices.size());
  for (std::size_t i = 0; i < a.prices.size(); ++i) {
    EXPECT_NEAR(a.prices[i], b.prices[i], price_tol) << "user " << i;
  }
}

TEST(SpeOracle, MatchesSolverOnCaseMixes) {
  for (int c = 1; c <= 6; ++c) {
    const auto inst = build_case_mix(table2_case(c), default_params());
    expect_outcomes_match(spe_oracle(inst), solve_spe(inst), 1e-4);
  }
}

TEST(SpeOracle, SingleUserFullOutcome) {
  const auto inst = make_instance({EnergyUser::make("u", 150, 2)}, default_params());
  const auto scanned = spe_oracle(inst);
  const auto solved = solve_spe(inst);
  EXPECT_NEAR(scanned.prices[0], solved.prices[0], 1e-4);
  // The leader's cost moves by about 2 e c + c^2 / (2 alpha), roughly 1e3, per
  // unit price, so a 1e-4 price grid allows about 0.1 in cost.
  EXPECT_NEAR(scanned.total_cost, solved.total_cost, 0.15);
}

TEST(SpeOracle, ForcedLowerClampIsIdentical) {
  const auto inst = make_instance({EnergyUser::make("u", 150, 1)}, default_params());
  const auto a = spe_oracle(inst);
  const auto b = solve_spe(inst);
  EXPECT_EQ(a.prices, b.prices);
  EXPECT_EQ(a.clamp_flags, b.clamp_flags);
  EXPECT_NEAR(a.quantities[0], b.quantities[0], 1e-9);
  EXPECT_NEAR(a.utilities[0], b.utilities[0], 1e-7);
  EXPECT_NEAR(a.total_cost, b.total_cost, 1e-6);
  EXPECT_NEAR(a.grid_purchase, b.grid_purchase, 1e-9);
  EXPECT_EQ(a.warnings, b.warnings);
}

TEST(SpeOracle, PinnedPriceBox) {
  auto p = default_params();
  p.price_min = 25.0;
  p.price_max = 25.0;
  const auto inst = build_case_mix(table2_case(2), p);
  const auto a = spe_oracle(inst);
  const auto b = solve_spe(inst);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    EXPECT_EQ(a.prices[i], 25.0);
    EXPECT_EQ(b.prices[i], 25.0);
  }
}

TEST(SpeOracle, UserLimit) {
  CaseMix mix;
  mix.counts[2.0] = 21;
  EXPECT_THROW(spe_oracle(build_case_mix(mix, default_params())), StructuralError);
}

TEST(Suite, SmallRunIsWithinTolerance) {
  SuiteConfig cfg;
  cfg.trials = 50;
  cfg.seed = 11;
  const auto r = run_suite(cfg);
  EXPECT_EQ(r.trials, 50);
  EXPECT_TRUE(r.passed(1e-4, 1e-3)) << r.max_price_deviation << " " << r.max_response_deviation;
  EXPECT_EQ(r.price_violations, 0);
  EXPECT_EQ(r.response_violations, 0);
  EXPECT_LE(r.max_quadratic_residual, 1e-6);
}

}  // namespace
}  // namespace dpricing::oracle
