#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mobility/temporal.hpp"

using namespace mobility;

namespace {

MobilityTechnology base_tech() {
  return {EndowmentCoefficients(1.0, 0.5, 0.0),
          OrganicParameters(0.4, 0.4, 0.6, 1.0)};
}

}  // namespace

TEST_CASE("time paths interpolate linearly and extrapolate flat") {
  const TimePath path({{0.0, 1.0}, {4.0, 3.0}, {10.0, 3.0}});
  CHECK(path.value_at(0.0) == doctest::Approx(1.0));
  CHECK(path.value_at(2.0) == doctest::Approx(2.0));
  CHECK(path.value_at(4.0) == doctest::Approx(3.0));
  CHECK(path.value_at(7.0) == doctest::Approx(3.0));
  CHECK(path.value_at(-5.0) == doctest::Approx(1.0));
  CHECK(path.value_at(25.0) == doctest::Approx(3.0));
  CHECK(path.is_breakpoint(4.0));
  CHECK_FALSE(path.is_breakpoint(2.0));
}

TEST_CASE("time path rejects unsorted or empty breakpoints") {
  CHECK_THROWS_AS(TimePath({}), std::invalid_argument);
  CHECK_THROWS_AS(TimePath({{3.0, 1.0}, {1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("r-rate matches the analytic slope on a linear coefficient path") {
  // Only b varies: db/dt = 0.02, so dM/dt = 0.02 * l^gamma at a fixed
  // bundle.
  TemporalTechnology temporal = TemporalTechnology::constant(base_tech());
  temporal.b = TimePath({{0.0, 0.5}, {10.0, 0.7}});
  InputBundle bundle;
  bundle.joint_labor = 4.0;
  bundle.joint_capital = 9.0;
  bundle.solo_labor = 16.0;
  const double expected = 0.02 * std::pow(16.0, 0.6);
  CHECK(r_rate(temporal, bundle, 5.0) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("classification splits improving from degenerating technologies") {
  InputBundle bundle;
  bundle.joint_labor = 4.0;
  bundle.joint_capital = 9.0;
  bundle.solo_labor = 16.0;
  const std::vector<double> grid{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};

  TemporalTechnology improving = TemporalTechnology::constant(base_tech());
  improving.b = TimePath({{0.0, 0.5}, {5.0, 0.7}});
  CHECK(classify(improving, bundle, grid) == MobilityFunctionType::Type1);

  TemporalTechnology degenerating = TemporalTechnology::constant(base_tech());
  degenerating.a = TimePath({{0.0, 1.0}, {5.0, 0.6}});
  degenerating.b = TimePath({{0.0, 0.5}, {5.0, 0.3}});
  CHECK(classify(degenerating, bundle, grid) == MobilityFunctionType::Type2);

  TemporalTechnology mixed = TemporalTechnology::constant(base_tech());
  mixed.b = TimePath({{0.0, 0.5}, {2.0, 0.8}, {5.0, 0.2}});
  CHECK_THROWS_AS(classify(mixed, bundle, grid), MixedSignError);
}

TEST_CASE("npv reproduces the annuity formula") {
  InvestmentScenario scenario;
  scenario.upfront_costs = {{0, 9000.0}};
  for (int t = 1; t <= 5; ++t) scenario.recurring_savings[t] = 9000.0;
  scenario.horizon = 5;
  scenario.discount_rate = 0.05;
  const double annuity = 9000.0 * (1.0 - std::pow(1.05, -5)) / 0.05;
  CHECK(npv(scenario) == doctest::Approx(annuity - 9000.0).epsilon(1e-12));
}

TEST_CASE("npv of a break-even one-period deal at zero discount is zero") {
  InvestmentScenario scenario;
  scenario.upfront_costs = {{0, 9000.0}};
  scenario.recurring_savings = {{1, 9000.0}};
  scenario.horizon = 1;
  scenario.discount_rate = 0.0;
  CHECK(npv(scenario) == doctest::Approx(0.0));
  const auto payback = payback_period(scenario);
  REQUIRE(payback.has_value());
  CHECK(*payback == 1);
}

TEST_CASE("payback is the first period cumulative flow turns nonnegative") {
  InvestmentScenario scenario;
  scenario.upfront_costs = {{0, 10000.0}};
  for (int t = 1; t <= 6; ++t) scenario.recurring_savings[t] = 3000.0;
  scenario.horizon = 6;
  scenario.discount_rate = 0.10;  // payback ignores discounting
  const auto payback = payback_period(scenario);
  REQUIRE(payback.has_value());
  CHECK(*payback == 4);

  scenario.recurring_savings.clear();
  scenario.recurring_savings[1] = 1.0;
  CHECK_FALSE(payback_period(scenario).has_value());
}

TEST_CASE("investment scenario validation") {
  InvestmentScenario scenario;
  scenario.upfront_costs = {{0, 100.0}};
  scenario.horizon = 0;
  CHECK_THROWS_AS(scenario.validate(), std::invalid_argument);
  scenario.horizon = 2;
  scenario.discount_rate = -0.5;
  CHECK_THROWS_AS(scenario.validate(), std::invalid_argument);
  scenario.discount_rate = 0.05;
  scenario.recurring_savings = {{3, 10.0}};  // beyond horizon
  CHECK_THROWS_AS(scenario.validate(), std::invalid_argument);
}

TEST_CASE("independence premium equalizes old and new utility") {
  const PriceSystem prices(25.0, 1.0, 1.0);
  const Preference pref(0.5);
  const MobilityTechnology old_tech = base_tech();
  MobilityTechnology new_tech{EndowmentCoefficients(1.3, 0.8, 0.2),
                              OrganicParameters(0.4, 0.4, 0.6, 0.9)};
  const double budget = 10000.0;
  const PolicyOutcome old_outcome = solve_under_regime(
      old_tech, pref, prices, FungibleRegime{budget});
  const PolicyOutcome new_outcome = solve_under_regime(
      new_tech, pref, prices, FungibleRegime{budget});

  const double pi = independence_premium(old_outcome, new_outcome, new_tech,
                                         pref, prices);
  CHECK(pi > 0.0);  // the richer technology is worth paying for
  const Allocation shaved =
      maximize_utility(new_tech, pref, prices, budget - pi);
  CHECK(shaved.utility_value ==
        doctest::Approx(old_outcome.allocation.utility_value).epsilon(1e-6));

  // Symmetric direction: moving to the worse technology needs a subsidy.
  const double subsidy = independence_premium(new_outcome, old_outcome,
                                              old_tech, pref, prices);
  CHECK(subsidy < 0.0);
}

TEST_CASE("comparative statics reports dominance and is parallel-invariant") {
  std::vector<TemporalCreator> population;
  const PriceSystem prices(25.0, 1.0, 1.0);
  for (int i = 0; i < 8; ++i) {
    TemporalTechnology temporal = TemporalTechnology::constant(base_tech());
    temporal.b = TimePath({{0.0, 0.5}, {5.0, 0.5 + 0.02 * (i + 1)}});
    population.push_back(
        {i, temporal, Preference(0.45 + 0.01 * i), prices,
         5000.0 + 500.0 * i});
  }
  const ParetoReport serial = comparative_statics(population, 0.0, 5.0);
  CHECK(serial.verdict == ParetoVerdict::SecondDominates);
  REQUIRE(serial.per_creator.size() == population.size());
  for (const auto& entry : serial.per_creator) {
    CHECK_FALSE(entry.failed);
    CHECK(entry.delta_utility > 0.0);
  }

  const ParetoReport parallel =
      comparative_statics(population, 0.0, 5.0, {}, 4);
  REQUIRE(parallel.per_creator.size() == serial.per_creator.size());
  for (size_t i = 0; i < serial.per_creator.size(); ++i)
    CHECK(parallel.per_creator[i].delta_utility ==
          serial.per_creator[i].delta_utility);

  // Reversing the window flips the verdict.
  CHECK(comparative_statics(population, 5.0, 0.0).verdict ==
        ParetoVerdict::FirstDominates);
  // Zero-width window is equivalence.
  CHECK(comparative_statics(population, 2.0, 2.0).verdict ==
        ParetoVerdict::Equivalent);
}

TEST_CASE("reinvestment rule validation") {
  ReinvestmentRule rule;
  rule.fraction = 1.5;
  CHECK_THROWS_AS(rule.validate(), std::invalid_argument);
  rule.fraction = 0.5;
  rule.alpha_per_dollar = -1.0;
  CHECK_THROWS_AS(rule.validate(), std::invalid_argument);
}

TEST_CASE("long-run convergence: reinvested savings never reduce utility") {
  const PriceSystem prices(25.0, 1.0, 1.0);
  const Preference pref(0.5);
  ReinvestmentRule rule;
  rule.fraction = 0.5;
  rule.alpha_per_dollar = 1e-5;
  rule.gamma_per_dollar = 1e-5;
  const std::vector<double> utilities = long_run_convergence(
      base_tech(), pref, prices, 10000.0, rule, 12);
  REQUIRE(utilities.size() == 13);
  for (size_t t = 1; t < utilities.size(); ++t)
    CHECK(utilities[t] >= utilities[t - 1] - 1e-9 * (1.0 + utilities[t - 1]));

  // A zero rule leaves utility flat.
  const std::vector<double> flat = long_run_convergence(
      base_tech(), pref, prices, 10000.0, ReinvestmentRule{}, 5);
  for (size_t t = 1; t < flat.size(); ++t)
    CHECK(flat[t] == doctest::Approx(flat[0]).epsilon(1e-9));
}

TEST_CASE("intertemporal residual vanishes on a stationary trajectory") {
  const PriceSystem prices(25.0, 1.0, 1.0);
  const Preference pref(0.5);
  const MobilityTechnology tech = base_tech();
  const Allocation alloc = maximize_utility(tech, pref, prices, 10000.0);
  std::vector<TrajectoryPoint> trajectory;
  for (int t = 0; t < 4; ++t)
    trajectory.push_back({tech, alloc, static_cast<double>(t)});
  CHECK(std::abs(intertemporal_foc_residual(trajectory, pref)) < 1e-9);
}
