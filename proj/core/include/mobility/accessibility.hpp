#pragma once

#include <string>
#include <vector>

#include "mobility/solver.hpp"

namespace mobility {

struct AccessProject {
  std::string name;
  double cost = 0.0;
  double delta_rho = 0.0;  // > 0
  int duration = 1;        // periods over which the benefit accrues

  void validate() const;
};

struct CBAConfig {
  double discount_rate = 0.0;
  int horizon = 1;
  double residual_inefficiency = 0.0;  // R, money
  double fragmentation_kappa = 0.0;    // utility units

  void validate() const;
};

// One creator's full problem, used to price accessibility changes.
struct CreatorProblem {
  MobilityTechnology tech;
  Preference pref;
  PriceSystem prices;
  double budget = 0.0;
};

struct AccessPopulation {
  std::vector<CreatorProblem> creators;
  double baseline_rho = 1.0;  // in (0, 1]
};

// (rho_b - rho_a) * sum of base utilities. Linear and interval-additive.
double social_benefit(const std::vector<double>& base_utilities, double rho_a,
                      double rho_b);

// Per creator, the equivalent variation at the baseline rho: the budget
// increase producing the same utility gain as moving rho from the
// population baseline to rho_b. Summed over the population; per-period
// flow in money units.
double monetized_benefit(const AccessPopulation& population, double rho_b,
                         const SolverConfig& config = {});

struct KaldorHicksResult {
  bool pass = false;
  double margin = 0.0;  // pv_benefit - total_cost (- R when fragmented)
  double pv_benefit = 0.0;
  double total_cost = 0.0;
};

// Present value of the monetized benefit over the horizon against the sum
// of project costs, plus R under fragmentation.
KaldorHicksResult kaldor_hicks_test(const std::vector<AccessProject>& projects,
                                    const AccessPopulation& population,
                                    const CBAConfig& config, bool fragmented,
                                    const SolverConfig& solver_config = {});

// Greedy acceptance in descending benefit-cost ratio while the PV of the
// marginal monetized benefit covers the marginal cost.
std::vector<AccessProject> marginal_project_rule(
    const std::vector<AccessProject>& projects,
    const AccessPopulation& population, const CBAConfig& config,
    const SolverConfig& solver_config = {});

// Status quo bias under information costs: the candidate is adopted only
// when its utility gain strictly exceeds kappa.
const Allocation& status_quo_filter(const Allocation& old_allocation,
                                    const Allocation& candidate,
                                    double kappa);

// Total utility forgone across a population when each creator applies
// status_quo_filter at the given kappa instead of kappa = 0.
double measured_residual_inefficiency(
    const std::vector<std::pair<Allocation, Allocation>>& old_and_candidate,
    double kappa);

}  // namespace mobility
