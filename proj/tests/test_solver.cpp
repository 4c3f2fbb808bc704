#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "mobility/solver.hpp"

using namespace mobility;

namespace {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit(uint64_t& state) { return (splitmix64(state) >> 11) * 0x1.0p-53; }

const PriceSystem kUnitPrices(1.0, 1.0, 1.0);

}  // namespace

TEST_CASE("closed-form Cobb-Douglas optimum: L=25, K=25, A=50") {
  // With only the joint term active the problem is pure Cobb-Douglas and
  // expenditure shares are alpha*phi/Z, beta*phi/Z, (1-phi)/Z.
  MobilityTechnology tech{EndowmentCoefficients(1.0, 0.0, 0.0),
                          OrganicParameters(0.5, 0.5, 1.0, 1.0)};
  const Allocation alloc =
      maximize_utility(tech, Preference(0.5), kUnitPrices, 100.0);
  CHECK(alloc.status != SolveStatus::MaxIterations);
  CHECK(alloc.bundle.joint_labor == doctest::Approx(25.0).epsilon(1e-6));
  CHECK(alloc.bundle.joint_capital == doctest::Approx(25.0).epsilon(1e-6));
  CHECK(alloc.other_goods == doctest::Approx(50.0).epsilon(1e-6));
  CHECK(alloc.utility_value == doctest::Approx(std::sqrt(25.0 * 50.0)));
}

TEST_CASE("closed-form two-good case: l = 100/3, A = 200/3") {
  MobilityTechnology tech{EndowmentCoefficients(0.0, 1.0, 0.0),
                          OrganicParameters(0.5, 0.5, 0.5, 1.0)};
  const Allocation alloc =
      maximize_utility(tech, Preference(0.5), kUnitPrices, 100.0);
  CHECK(alloc.bundle.solo_labor == doctest::Approx(100.0 / 3.0).epsilon(1e-6));
  CHECK(alloc.other_goods == doctest::Approx(200.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("closed-form shares under non-unit prices") {
  // Cobb-Douglas spending is price-invariant: share alpha*phi/Z on joint
  // labor regardless of the wage.
  MobilityTechnology tech{EndowmentCoefficients(1.0, 0.0, 0.0),
                          OrganicParameters(0.3, 0.5, 1.0, 1.0)};
  const Preference pref(0.4);
  const PriceSystem prices(25.0, 3.0, 2.0);
  const double z = 0.3 * 0.4 + 0.5 * 0.4 + 0.6;
  const double budget = 1000.0;
  const Allocation alloc = maximize_utility(tech, pref, prices, budget);
  CHECK(alloc.bundle.joint_labor * prices.wage ==
        doctest::Approx(budget * 0.3 * 0.4 / z).epsilon(1e-6));
  CHECK(alloc.bundle.joint_capital * prices.capital_rate ==
        doctest::Approx(budget * 0.5 * 0.4 / z).epsilon(1e-6));
  CHECK(alloc.other_goods * prices.composite_price ==
        doctest::Approx(budget * 0.6 / z).epsilon(1e-6));
}

TEST_CASE("budget edge cases") {
  MobilityTechnology tech{EndowmentCoefficients(1.0, 0.0, 0.0),
                          OrganicParameters(0.5, 0.5, 1.0, 1.0)};
  CHECK_THROWS_AS(maximize_utility(tech, Preference(0.5), kUnitPrices, -1.0),
                  std::invalid_argument);
  const Allocation zero =
      maximize_utility(tech, Preference(0.5), kUnitPrices, 0.0);
  CHECK(zero.utility_value == 0.0);
  CHECK(zero.split.total == 0.0);
}

TEST_CASE("solver matches the grid oracle on random concave instances") {
  uint64_t rng = 2024;
  SolverConfig config;
  for (int trial = 0; trial < 25; ++trial) {
    // At most three active inputs so the oracle grid stays sharp.
    // Moderate scales keep the optimum away from the grid's resolution
    // limit, where a 1/60 share step costs more than 1e-3 in utility.
    const int mode = static_cast<int>(splitmix64(rng) % 3);
    const double a = mode == 2 ? 0.0 : 0.5 + unit(rng);
    const double b = mode == 0 ? 0.0 : 0.5 + unit(rng);
    const double c = mode == 1 ? 0.0 : 0.5 + unit(rng);
    const double alpha = 0.2 + 0.25 * unit(rng);
    const double beta = 0.2 + 0.25 * unit(rng);
    MobilityTechnology tech{
        EndowmentCoefficients(a, b, c),
        OrganicParameters(alpha, beta, 0.5 + 0.4 * unit(rng),
                          0.5 + 0.4 * unit(rng))};
    const Preference pref(0.3 + 0.4 * unit(rng));
    const PriceSystem prices(0.5 + 2.0 * unit(rng), 0.5 + 2.0 * unit(rng),
                             0.5 + 2.0 * unit(rng));
    const double budget = 100.0 + 900.0 * unit(rng);

    const Allocation oracle = brute_force_oracle(tech, pref, prices, budget,
                                                 config.oracle_grid);
    // The grid can only certify optima it can resolve: skip instances
    // whose oracle solution sits within two grid steps of a boundary.
    const double min_share = 2.0 / config.oracle_grid;
    const double spend[5] = {
        oracle.bundle.joint_labor * prices.wage,
        oracle.bundle.joint_capital * prices.capital_rate,
        oracle.bundle.solo_labor * prices.wage,
        oracle.bundle.solo_capital * prices.capital_rate,
        oracle.other_goods * prices.composite_price};
    const double active[5] = {a, a, b, c, 1.0};
    bool resolvable = true;
    for (int i = 0; i < 5; ++i)
      if (active[i] > 0.0 && spend[i] < min_share * budget) resolvable = false;

    const Allocation solved = maximize_utility(tech, pref, prices, budget,
                                               config);
    CHECK(solved.utility_value >=
          oracle.utility_value - 1e-6 * (1.0 + oracle.utility_value));
    if (resolvable)
      CHECK(oracle.utility_value >= solved.utility_value * (1.0 - 1e-3));
  }
}

TEST_CASE("first-order conditions hold at the optimum") {
  MobilityTechnology tech{EndowmentCoefficients(1.0, 0.5, 0.25),
                          OrganicParameters(0.4, 0.3, 0.6, 0.8)};
  const Preference pref(0.55);
  const PriceSystem prices(25.0, 2.0, 1.0);
  const Allocation alloc = maximize_utility(tech, pref, prices, 5000.0);
  const FocResidual res = foc_residual(tech, pref, prices, alloc);
  CHECK(res.norm < 1e-4);
  // All five inputs active for this instance.
  for (bool inc : res.included) CHECK(inc);
}

TEST_CASE("argmax is invariant to the accessibility multiplier and scaling") {
  // rho and any positive scaling of utility drop out of the log-gradient,
  // so the chosen bundle cannot move. Scaling all production coefficients
  // scales M without moving the argmax either.
  MobilityTechnology tech{EndowmentCoefficients(1.0, 0.75, 0.0),
                          OrganicParameters(0.4, 0.4, 0.7, 1.0)};
  // Exact power-of-two scaling cancels bitwise in the log-gradient, so
  // the iterates cannot diverge.
  MobilityTechnology scaled{EndowmentCoefficients(4.0, 3.0, 0.0),
                            OrganicParameters(0.4, 0.4, 0.7, 1.0)};
  const Preference pref(0.5);
  const PriceSystem prices(25.0, 1.0, 1.0);
  const Allocation base = maximize_utility(tech, pref, prices, 2000.0);
  const Allocation alt = maximize_utility(scaled, pref, prices, 2000.0);
  CHECK(alt.bundle.joint_labor ==
        doctest::Approx(base.bundle.joint_labor).epsilon(1e-9));
  CHECK(alt.bundle.joint_capital ==
        doctest::Approx(base.bundle.joint_capital).epsilon(1e-9));
  CHECK(alt.bundle.solo_labor ==
        doctest::Approx(base.bundle.solo_labor).epsilon(1e-9));
  CHECK(alt.other_goods == doctest::Approx(base.other_goods).epsilon(1e-9));
}

TEST_CASE("shares are budget-invariant when only the joint term is active") {
  MobilityTechnology tech{EndowmentCoefficients(1.0, 0.0, 0.0),
                          OrganicParameters(0.35, 0.45, 1.0, 1.0)};
  const Preference pref(0.6);
  const PriceSystem prices(20.0, 2.0, 1.5);
  const Allocation small = maximize_utility(tech, pref, prices, 100.0);
  const Allocation large = maximize_utility(tech, pref, prices, 1e6);
  CHECK(small.split.mobility / small.split.total ==
        doctest::Approx(large.split.mobility / large.split.total)
            .epsilon(1e-7));
  CHECK(small.bundle.joint_labor * prices.wage / small.split.total ==
        doctest::Approx(large.bundle.joint_labor * prices.wage /
                        large.split.total)
            .epsilon(1e-7));
}

TEST_CASE("fixed inputs shift purchases away from the covered slot") {
  MobilityTechnology tech{EndowmentCoefficients(1.0, 0.0, 0.0),
                          OrganicParameters(0.5, 0.5, 1.0, 1.0)};
  const Preference pref(0.5);
  FixedInputs fixed;
  fixed.joint_capital = 25.0;
  const Allocation with_fixed =
      maximize_utility(tech, pref, kUnitPrices, 100.0, {}, fixed);
  const Allocation without =
      maximize_utility(tech, pref, kUnitPrices, 100.0);
  // The endowment-funded capital substitutes for purchased capital.
  CHECK(with_fixed.bundle.joint_capital < without.bundle.joint_capital);
  CHECK(with_fixed.utility_value > without.utility_value);
  // Fixed services carry no expenditure.
  CHECK(with_fixed.split.total == doctest::Approx(100.0));
}

TEST_CASE("oracle rejects bad arguments") {
  MobilityTechnology tech{EndowmentCoefficients(1.0, 0.0, 0.0),
                          OrganicParameters(0.5, 0.5, 1.0, 1.0)};
  CHECK_THROWS_AS(
      brute_force_oracle(tech, Preference(0.5), kUnitPrices, 10.0, 0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      brute_force_oracle(tech, Preference(0.5), kUnitPrices, -10.0, 10),
      std::invalid_argument);
}

TEST_CASE("two-sector symmetric economy equalizes the product-mix ratios") {
  MobilityTechnology m_tech{EndowmentCoefficients(1.0, 0.0, 0.0),
                            OrganicParameters(0.5, 0.5, 1.0, 1.0)};
  const AProduction a_prod(1.0, 0.5, 0.5);
  const Preference pref(0.5);
  const TwoSectorAllocation two =
      solve_two_sector(m_tech, a_prod, pref, 100.0, 100.0);
  CHECK(two.labor_to_mobility == doctest::Approx(50.0).epsilon(1e-4));
  CHECK(two.capital_to_mobility == doctest::Approx(50.0).epsilon(1e-4));

  const auto residual = product_mix_residual(
      m_tech, a_prod, pref,
      InputBundle(two.labor_to_mobility, two.capital_to_mobility, 0, 0),
      two.labor_to_other, two.capital_to_other);
  for (double r : residual) CHECK(std::abs(r) < 1e-6);
}

TEST_CASE("product-mix residual rejects boundary allocations") {
  MobilityTechnology m_tech{EndowmentCoefficients(1.0, 0.0, 0.0),
                            OrganicParameters(0.5, 0.5, 1.0, 1.0)};
  const AProduction a_prod(1.0, 0.5, 0.5);
  CHECK_THROWS_AS(product_mix_residual(m_tech, a_prod, Preference(0.5),
                                       InputBundle(0, 0, 0, 0), 1.0, 1.0),
                  std::domain_error);
}
