#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mobility/solver.hpp"

namespace mobility {

// Raised when a regime cannot fund any device satisfying a fixed
// requirement.
struct EmptyFeasibleSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CapitalTarget { Joint, Solo };

// A discrete make-and-model purchase. Its capital services enter the
// bundle as a fixed addition to joint or solo capital. Required items
// model inelastic needs: some required device must be funded.
struct DeviceCatalogItem {
  std::string name;
  double price = 0.0;
  double capital_services = 0.0;
  CapitalTarget target = CapitalTarget::Joint;
  bool required = false;
};

struct FungibleRegime {
  double total_budget = 0.0;
};

// Three separately binding budgets: labor buys joint and solo hours,
// capital buys joint and solo services, other buys the composite good.
struct SiloedRegime {
  double labor_budget = 0.0;
  double capital_budget = 0.0;
  double other_budget = 0.0;
};

// Device purchases are restricted to the catalog. The agency covers
// device spending up to capital_budget; any overflow comes out of the
// creator's fungible rest_budget. Unspent agency budget is forfeited.
struct ApprovedListRegime {
  std::vector<DeviceCatalogItem> catalog;
  double capital_budget = 0.0;
  double rest_budget = 0.0;
};

// A TypeExclusion wraps exactly one non-TypeExclusion base.
using BaseRegime =
    std::variant<FungibleRegime, SiloedRegime, ApprovedListRegime>;

// Filters devices by name, or whole input categories ("joint",
// "labor_only", "capital_only"), then solves the wrapped base regime.
struct TypeExclusionRegime {
  std::vector<std::string> excluded;
  BaseRegime base;
};

using PolicyRegime = std::variant<FungibleRegime, SiloedRegime,
                                  ApprovedListRegime, TypeExclusionRegime>;

struct PolicyOutcome {
  Allocation allocation;
  std::vector<DeviceCatalogItem> devices_chosen;
  double money_metric_loss = 0.0;
  PolicyRegime regime;
};

PolicyOutcome solve_under_regime(const MobilityTechnology& tech,
                                 const Preference& pref,
                                 const PriceSystem& prices,
                                 const PolicyRegime& regime,
                                 const SolverConfig& config = {});

// Equivalent variation vs the benchmark outcome: the budget reduction to
// the benchmark regime that replicates the restricted regime's utility.
// Monotone bisection; clamped at zero when the outcome is no worse.
double deadweight_loss(const PolicyOutcome& outcome,
                       const PolicyOutcome& benchmark,
                       const MobilityTechnology& tech, const Preference& pref,
                       const PriceSystem& prices,
                       const SolverConfig& config = {});

enum class CrowdingOutVerdict { KeepBase, Upgrade, Indifferent };

struct CrowdingOutResult {
  CrowdingOutVerdict verdict = CrowdingOutVerdict::Indifferent;
  double utility_delta = 0.0;  // upgrade utility minus base utility
  Allocation base_allocation;
  Allocation upgrade_allocation;
};

// Solves the creator's problem under each device purchase (price deducted
// from the budget, services added as fixed capital, technology possibly
// differing) and compares.
CrowdingOutResult crowding_out_comparison(
    const MobilityTechnology& tech_base, const MobilityTechnology& tech_upgrade,
    const Preference& pref, const PriceSystem& prices,
    const DeviceCatalogItem& device_base, const DeviceCatalogItem& device_upgrade,
    double total_budget, const SolverConfig& config = {});

}  // namespace mobility
