#include "mobility/policy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mobility {

namespace {

constexpr int kMaxCatalog = 20;  // subset enumeration is exact below this

bool name_excluded(const DeviceCatalogItem& item,
                   const std::vector<std::string>& excluded) {
  return std::find(excluded.begin(), excluded.end(), item.name) !=
         excluded.end();
}

bool category_excluded(const std::vector<std::string>& excluded,
                       const char* token) {
  return std::find(excluded.begin(), excluded.end(), token) != excluded.end();
}

MobilityTechnology apply_category_exclusions(
    const MobilityTechnology& tech, const std::vector<std::string>& excluded) {
  double a = tech.coefficients.a;
  double b = tech.coefficients.b;
  double c = tech.coefficients.c;
  if (category_excluded(excluded, "joint")) a = 0.0;
  if (category_excluded(excluded, "labor_only")) b = 0.0;
  if (category_excluded(excluded, "capital_only")) c = 0.0;
  if (a + b + c <= 0.0)
    throw InfeasibleScenario(
        "TypeExclusion: every mobility input category is excluded");
  return MobilityTechnology{EndowmentCoefficients(a, b, c), tech.organic};
}

// Maximize M over the within-silo splits (joint vs solo labor, joint vs
// solo capital) by alternating golden-section ascent. The composite
// quantity is pinned by the third silo.
Allocation solve_siloed(const MobilityTechnology& tech, const Preference& pref,
                        const PriceSystem& prices, const SiloedRegime& regime,
                        const SolverConfig& config) {
  const auto& cf = tech.coefficients;
  const double labor_total = regime.labor_budget / prices.wage;
  const double capital_total = regime.capital_budget / prices.capital_rate;

  const bool joint_active = cf.a > 0.0;
  const bool solo_labor_active = cf.b > 0.0;
  const bool solo_capital_active = cf.c > 0.0;

  auto bundle_at = [&](double labor_to_joint, double capital_to_joint) {
    double jl = 0.0, sl = 0.0, jk = 0.0, sk = 0.0;
    if (joint_active) {
      jl = labor_to_joint * labor_total;
      jk = capital_to_joint * capital_total;
    }
    if (solo_labor_active)
      sl = (joint_active ? 1.0 - labor_to_joint : 1.0) * labor_total;
    if (solo_capital_active)
      sk = (joint_active ? 1.0 - capital_to_joint : 1.0) * capital_total;
    return InputBundle(jl, jk, sl, sk);
  };

  double s_labor = joint_active ? (solo_labor_active ? 0.5 : 1.0) : 0.0;
  double s_capital = joint_active ? (solo_capital_active ? 0.5 : 1.0) : 0.0;

  auto mobility_at = [&](double sl, double sk) {
    return evaluate_mobility(tech, bundle_at(sl, sk));
  };

  auto golden = [&](const std::function<double(double)>& f) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = 0.0, b = 1.0;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-13) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = f(d);
      }
    }
    return 0.5 * (a + b);
  };

  if (joint_active) {
    for (int round = 0; round < 200; ++round) {
      double new_labor = s_labor;
      double new_capital = s_capital;
      if (solo_labor_active)
        new_labor = golden([&](double x) { return mobility_at(x, s_capital); });
      if (solo_capital_active)
        new_capital =
            golden([&](double x) { return mobility_at(new_labor, x); });
      const double change = std::max(std::abs(new_labor - s_labor),
                                     std::abs(new_capital - s_capital));
      s_labor = new_labor;
      s_capital = new_capital;
      if (change < config.tolerance) break;
      if (!solo_labor_active && !solo_capital_active) break;
    }
  }

  Allocation alloc;
  alloc.bundle = bundle_at(s_labor, s_capital);
  alloc.other_goods = regime.other_budget / prices.composite_price;
  alloc.utility_value =
      utility(evaluate_mobility(tech, alloc.bundle), alloc.other_goods,
              pref.phi);
  alloc.split = endowment_split(alloc.bundle, alloc.other_goods, prices);
  alloc.status = SolveStatus::Converged;
  alloc.foc_residual_norm =
      foc_residual(tech, pref, prices, alloc).norm;
  return alloc;
}

PolicyOutcome solve_approved_list(const MobilityTechnology& tech,
                                  const Preference& pref,
                                  const PriceSystem& prices,
                                  const ApprovedListRegime& regime,
                                  const SolverConfig& config) {
  if (regime.catalog.size() > kMaxCatalog)
    throw std::invalid_argument(
        "ApprovedList: catalog too large for exact subset enumeration");

  // Sorted copy so subset enumeration order (and tie-breaking) follows
  // lexicographic device names.
  std::vector<DeviceCatalogItem> catalog = regime.catalog;
  std::sort(catalog.begin(), catalog.end(),
            [](const DeviceCatalogItem& x, const DeviceCatalogItem& y) {
              return x.name < y.name;
            });

  const bool requirement = std::any_of(
      catalog.begin(), catalog.end(),
      [](const DeviceCatalogItem& d) { return d.required; });

  const size_t n = catalog.size();
  bool found = false;
  PolicyOutcome best;
  double best_utility = -1.0;

  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    double cost = 0.0;
    bool satisfies_requirement = !requirement;
    FixedInputs fixed;
    std::vector<DeviceCatalogItem> chosen;
    for (size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      const auto& item = catalog[i];
      cost += item.price;
      satisfies_requirement = satisfies_requirement || item.required;
      if (item.target == CapitalTarget::Joint)
        fixed.joint_capital += item.capital_services;
      else
        fixed.solo_capital += item.capital_services;
      chosen.push_back(item);
    }
    if (!satisfies_requirement) continue;

    // Device spending beyond the agency budget drains the rest budget.
    const double overflow = std::max(0.0, cost - regime.capital_budget);
    if (overflow > regime.rest_budget + 1e-12) continue;
    const double continuous_budget =
        std::max(0.0, regime.rest_budget - overflow);

    Allocation alloc = maximize_utility(tech, pref, prices, continuous_budget,
                                        config, fixed);
    const double tie = config.tolerance * (1.0 + std::abs(best_utility));
    if (!found || alloc.utility_value > best_utility + tie) {
      found = true;
      best_utility = alloc.utility_value;
      best.allocation = std::move(alloc);
      best.devices_chosen = std::move(chosen);
    }
  }

  if (!found)
    throw EmptyFeasibleSet(
        "ApprovedList: no affordable device subset satisfies the "
        "fixed requirement");
  best.regime = regime;
  return best;
}

// Continuous money available to the creator under a regime; the component
// deadweight_loss bisects over.
double continuous_budget_of(const PolicyRegime& regime) {
  if (const auto* f = std::get_if<FungibleRegime>(&regime))
    return f->total_budget;
  if (const auto* s = std::get_if<SiloedRegime>(&regime))
    return s->other_budget;
  if (const auto* a = std::get_if<ApprovedListRegime>(&regime))
    return a->rest_budget;
  return std::visit(
      [](const auto& base) {
        return continuous_budget_of(PolicyRegime(base));
      },
      std::get<TypeExclusionRegime>(regime).base);
}

PolicyRegime reduce_budget(const PolicyRegime& regime, double reduction) {
  if (const auto* f = std::get_if<FungibleRegime>(&regime))
    return FungibleRegime{std::max(0.0, f->total_budget - reduction)};
  if (const auto* s = std::get_if<SiloedRegime>(&regime)) {
    SiloedRegime out = *s;
    out.other_budget = std::max(0.0, out.other_budget - reduction);
    return out;
  }
  if (const auto* a = std::get_if<ApprovedListRegime>(&regime)) {
    ApprovedListRegime out = *a;
    out.rest_budget = std::max(0.0, out.rest_budget - reduction);
    return out;
  }
  const auto& ex = std::get<TypeExclusionRegime>(regime);
  TypeExclusionRegime out = ex;
  std::visit(
      [&](const auto& base) {
        PolicyRegime reduced = reduce_budget(PolicyRegime(base), reduction);
        std::visit(
            [&out](auto&& inner) {
              using T = std::decay_t<decltype(inner)>;
              if constexpr (!std::is_same_v<T, TypeExclusionRegime>)
                out.base = inner;
            },
            reduced);
      },
      ex.base);
  return out;
}

Allocation with_device(const MobilityTechnology& tech, const Preference& pref,
                       const PriceSystem& prices,
                       const DeviceCatalogItem& device, double total_budget,
                       const SolverConfig& config) {
  if (device.price > total_budget)
    throw InfeasibleScenario("crowding_out_comparison: device price " +
                             device.name + " exceeds the budget");
  FixedInputs fixed;
  if (device.target == CapitalTarget::Joint)
    fixed.joint_capital = device.capital_services;
  else
    fixed.solo_capital = device.capital_services;
  return maximize_utility(tech, pref, prices, total_budget - device.price,
                          config, fixed);
}

}  // namespace

PolicyOutcome solve_under_regime(const MobilityTechnology& tech,
                                 const Preference& pref,
                                 const PriceSystem& prices,
                                 const PolicyRegime& regime,
                                 const SolverConfig& config) {
  PolicyOutcome outcome;
  outcome.regime = regime;

  if (const auto* fungible = std::get_if<FungibleRegime>(&regime)) {
    if (fungible->total_budget < 0.0)
      throw std::invalid_argument("FungibleRegime: budget must be >= 0");
    outcome.allocation =
        maximize_utility(tech, pref, prices, fungible->total_budget, config);
    return outcome;
  }
  if (const auto* siloed = std::get_if<SiloedRegime>(&regime)) {
    if (siloed->labor_budget < 0.0 || siloed->capital_budget < 0.0 ||
        siloed->other_budget < 0.0)
      throw std::invalid_argument("SiloedRegime: budgets must be >= 0");
    outcome.allocation = solve_siloed(tech, pref, prices, *siloed, config);
    return outcome;
  }
  if (const auto* approved = std::get_if<ApprovedListRegime>(&regime)) {
    if (approved->capital_budget < 0.0 || approved->rest_budget < 0.0)
      throw std::invalid_argument("ApprovedListRegime: budgets must be >= 0");
    PolicyOutcome out =
        solve_approved_list(tech, pref, prices, *approved, config);
    out.regime = regime;
    return out;
  }

  const auto& exclusion = std::get<TypeExclusionRegime>(regime);
  const MobilityTechnology filtered_tech =
      apply_category_exclusions(tech, exclusion.excluded);
  BaseRegime base = exclusion.base;
  if (auto* approved = std::get_if<ApprovedListRegime>(&base)) {
    const bool had_requirement = std::any_of(
        approved->catalog.begin(), approved->catalog.end(),
        [](const DeviceCatalogItem& d) { return d.required; });
    std::vector<DeviceCatalogItem> kept;
    for (const auto& item : approved->catalog)
      if (!name_excluded(item, exclusion.excluded)) kept.push_back(item);
    approved->catalog = std::move(kept);
    const bool still_satisfiable = std::any_of(
        approved->catalog.begin(), approved->catalog.end(),
        [](const DeviceCatalogItem& d) { return d.required; });
    if (had_requirement && !still_satisfiable)
      throw EmptyFeasibleSet(
          "TypeExclusion: every device satisfying the fixed requirement "
          "is excluded");
  }
  PolicyOutcome out = std::visit(
      [&](const auto& b) {
        return solve_under_regime(filtered_tech, pref, prices, PolicyRegime(b),
                                  config);
      },
      base);
  out.regime = regime;
  return out;
}

double deadweight_loss(const PolicyOutcome& outcome,
                       const PolicyOutcome& benchmark,
                       const MobilityTechnology& tech, const Preference& pref,
                       const PriceSystem& prices, const SolverConfig& config) {
  const double target = outcome.allocation.utility_value;
  const double bench_utility = benchmark.allocation.utility_value;
  const double tol = config.tolerance * (1.0 + std::abs(bench_utility));
  if (target >= bench_utility - tol) return 0.0;

  auto utility_at_reduction = [&](double reduction) {
    const PolicyRegime reduced = reduce_budget(benchmark.regime, reduction);
    try {
      return solve_under_regime(tech, pref, prices, reduced, config)
          .allocation.utility_value;
    } catch (const EmptyFeasibleSet&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  double lo = 0.0;
  double hi = continuous_budget_of(benchmark.regime);
  if (utility_at_reduction(hi) > target) return hi;  // target below reach
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * (1.0 + hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (utility_at_reduction(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

CrowdingOutResult crowding_out_comparison(
    const MobilityTechnology& tech_base, const MobilityTechnology& tech_upgrade,
    const Preference& pref, const PriceSystem& prices,
    const DeviceCatalogItem& device_base, const DeviceCatalogItem& device_upgrade,
    double total_budget, const SolverConfig& config) {
  CrowdingOutResult result;
  result.base_allocation = with_device(tech_base, pref, prices, device_base,
                                       total_budget, config);
  result.upgrade_allocation = with_device(
      tech_upgrade, pref, prices, device_upgrade, total_budget, config);
  result.utility_delta = result.upgrade_allocation.utility_value -
                         result.base_allocation.utility_value;
  const double tol =
      config.tolerance *
      (1.0 + std::abs(result.base_allocation.utility_value));
  if (result.utility_delta > tol)
    result.verdict = CrowdingOutVerdict::Upgrade;
  else if (result.utility_delta < -tol)
    result.verdict = CrowdingOutVerdict::KeepBase;
  else
    result.verdict = CrowdingOutVerdict::Indifferent;
  return result;
}

}  // namespace mobility
