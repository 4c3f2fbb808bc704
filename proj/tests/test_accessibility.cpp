#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mobility/accessibility.hpp"

using namespace mobility;

namespace {

CreatorProblem make_creator(double budget, double phi) {
  // Constant returns to scale, so utility is linear in the budget and the
  // equivalent variation has a closed form.
  return {MobilityTechnology{EndowmentCoefficients(1.0, 0.0, 0.0),
                             OrganicParameters(0.5, 0.5, 1.0, 1.0)},
          Preference(phi), PriceSystem(25.0, 1.0, 1.0), budget};
}

AccessPopulation two_creator_population() {
  AccessPopulation population;
  population.creators = {make_creator(10000.0, 0.5), make_creator(6000.0, 0.4)};
  population.baseline_rho = 0.5;
  return population;
}

}  // namespace

TEST_CASE("social benefit is the rho gap times total base utility") {
  const std::vector<double> utilities{10.0, 25.0, 65.0};  // sums to 100
  CHECK(social_benefit(utilities, 0.1, 0.99) ==
        doctest::Approx(0.89 * 100.0).epsilon(1e-15));
  CHECK(social_benefit(utilities, 0.7, 0.7) == doctest::Approx(0.0));
  // Interval additivity.
  const double whole = social_benefit(utilities, 0.2, 0.9);
  const double split = social_benefit(utilities, 0.2, 0.55) +
                       social_benefit(utilities, 0.55, 0.9);
  CHECK(std::abs(whole - split) < 1e-12 * std::abs(whole));
  // Linearity in the utilities.
  std::vector<double> doubled{20.0, 50.0, 130.0};
  CHECK(social_benefit(doubled, 0.2, 0.9) == doctest::Approx(2.0 * whole));
}

TEST_CASE("monetized benefit matches the closed form for homogeneous utility") {
  // Cobb-Douglas utility is homogeneous of degree one in the budget, so
  // the equivalent variation for rho_a -> rho_b is E * (rho_b/rho_a - 1).
  AccessPopulation population = two_creator_population();
  const double value = monetized_benefit(population, 0.8);
  const double expected = 10000.0 * (0.8 / 0.5 - 1.0) +
                          6000.0 * (0.8 / 0.5 - 1.0);
  CHECK(value == doctest::Approx(expected).epsilon(1e-4));
  CHECK(monetized_benefit(population, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("kaldor-hicks compares discounted benefits with cost and R") {
  AccessPopulation population = two_creator_population();
  const std::vector<AccessProject> projects{{"ramps", 50000.0, 0.2, 1}};
  CBAConfig config;
  config.discount_rate = 0.03;
  config.horizon = 10;

  const KaldorHicksResult plain =
      kaldor_hicks_test(projects, population, config, false);
  CHECK(plain.total_cost == doctest::Approx(50000.0));
  CHECK(plain.margin ==
        doctest::Approx(plain.pv_benefit - plain.total_cost).epsilon(1e-12));
  CHECK(plain.pass == (plain.margin >= 0.0));

  // Fragmentation subtracts the residual inefficiency from the margin.
  config.residual_inefficiency = 12345.0;
  const KaldorHicksResult fragmented =
      kaldor_hicks_test(projects, population, config, true);
  CHECK(fragmented.pv_benefit == doctest::Approx(plain.pv_benefit));
  CHECK(fragmented.margin ==
        doctest::Approx(plain.margin - 12345.0).epsilon(1e-9));

  // Pushing R past the margin flips the verdict.
  REQUIRE(plain.pass);
  config.residual_inefficiency = plain.margin + 1.0;
  CHECK_FALSE(kaldor_hicks_test(projects, population, config, true).pass);
}

TEST_CASE("marginal project rule accepts in benefit-cost order and stops") {
  AccessPopulation population = two_creator_population();
  CBAConfig config;
  config.discount_rate = 0.03;
  config.horizon = 10;
  const std::vector<AccessProject> projects{
      {"elevator", 2000000.0, 0.05, 10},  // dreadful ratio
      {"curb-cuts", 5000.0, 0.10, 10},    // best ratio
      {"ramp-retrofit", 20000.0, 0.15, 10},
  };
  const std::vector<AccessProject> accepted =
      marginal_project_rule(projects, population, config);
  REQUIRE(accepted.size() == 2);
  CHECK(accepted[0].name == "curb-cuts");
  CHECK(accepted[1].name == "ramp-retrofit");

  // With no budget-worthy projects nothing is accepted.
  const std::vector<AccessProject> hopeless{{"gold-ramp", 1e9, 0.01, 10}};
  CHECK(marginal_project_rule(hopeless, population, config).empty());
}

TEST_CASE("project and config validation") {
  AccessProject bad{"x", -1.0, 0.1, 1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {"x", 1.0, 0.0, 1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {"x", 1.0, 0.1, 0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  CBAConfig config;
  config.horizon = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.horizon = 1;
  config.fragmentation_kappa = -1.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("status quo filter demands a strict gain above kappa") {
  Allocation old_alloc;
  old_alloc.utility_value = 10.0;
  Allocation candidate;
  candidate.utility_value = 12.0;

  CHECK(&status_quo_filter(old_alloc, candidate, 0.0) == &candidate);
  CHECK(&status_quo_filter(old_alloc, candidate, 1.9) == &candidate);
  CHECK(&status_quo_filter(old_alloc, candidate, 2.0) == &old_alloc);
  CHECK(&status_quo_filter(old_alloc, candidate, 5.0) == &old_alloc);
  // A worse candidate is never adopted.
  candidate.utility_value = 9.0;
  CHECK(&status_quo_filter(old_alloc, candidate, 0.0) == &old_alloc);
}

TEST_CASE("measured residual inefficiency is zero at kappa 0 and grows") {
  std::vector<std::pair<Allocation, Allocation>> pairs(3);
  const double gains[] = {0.5, 2.0, 8.0};
  for (size_t i = 0; i < pairs.size(); ++i) {
    pairs[i].first.utility_value = 10.0;
    pairs[i].second.utility_value = 10.0 + gains[i];
  }
  CHECK(measured_residual_inefficiency(pairs, 0.0) == doctest::Approx(0.0));
  // kappa = 1 blocks only the 0.5 gain; kappa = 3 also blocks the 2.0.
  CHECK(measured_residual_inefficiency(pairs, 1.0) == doctest::Approx(0.5));
  CHECK(measured_residual_inefficiency(pairs, 3.0) == doctest::Approx(2.5));
  CHECK(measured_residual_inefficiency(pairs, 100.0) ==
        doctest::Approx(0.5 + 2.0 + 8.0));
  // Nondecreasing in kappa.
  double prev = 0.0;
  for (double kappa = 0.0; kappa <= 10.0; kappa += 0.25) {
    const double value = measured_residual_inefficiency(pairs, kappa);
    CHECK(value >= prev);
    prev = value;
  }
}
