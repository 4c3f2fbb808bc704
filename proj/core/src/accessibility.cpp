#include "mobility/accessibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace mobility {

namespace {

void check_rho_interval(double rho_a, double rho_b) {
  if (rho_a <= 0.0 || rho_a > 1.0 || rho_b <= 0.0 || rho_b > 1.0)
    throw std::invalid_argument("rho values must lie in (0, 1]");
  if (rho_b < rho_a)
    throw std::invalid_argument("rho_b must be >= rho_a");
}

// Present value of a unit per-period flow over t = 1..periods.
double annuity_factor(double discount_rate, int periods) {
  double pv = 0.0;
  for (int t = 1; t <= periods; ++t)
    pv += std::pow(1.0 + discount_rate, -t);
  return pv;
}

// EV at rho_a for one creator: the budget increase matching the utility
// gain from rho_a -> rho_b. rho scales utility multiplicatively and never
// moves the argmax, so only the indirect utility level matters.
double creator_equivalent_variation(const CreatorProblem& creator,
                                    double rho_a, double rho_b,
                                    const SolverConfig& config) {
  if (rho_b == rho_a) return 0.0;
  auto base_utility = [&](double budget) {
    return maximize_utility(creator.tech, creator.pref, creator.prices, budget,
                            config)
        .utility_value;
  };
  const double u0 = base_utility(creator.budget);
  const double target = (rho_b / rho_a) * u0;

  double lo = creator.budget;
  double hi = std::max(creator.budget, 1.0) * 2.0;
  while (base_utility(hi) < target) hi *= 2.0;
  for (int iter = 0;
       iter < 200 && hi - lo > 1e-12 * (1.0 + std::abs(hi)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (base_utility(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi) - creator.budget;
}

double population_ev(const AccessPopulation& population, double rho_b,
                     const SolverConfig& config) {
  check_rho_interval(population.baseline_rho, rho_b);
  double total = 0.0;
  for (const auto& creator : population.creators)
    total += creator_equivalent_variation(creator, population.baseline_rho,
                                          rho_b, config);
  return total;
}

}  // namespace

void AccessProject::validate() const {
  if (cost < 0.0)
    throw std::invalid_argument("AccessProject: cost must be >= 0");
  if (delta_rho <= 0.0)
    throw std::invalid_argument("AccessProject: delta_rho must be > 0");
  if (duration < 1)
    throw std::invalid_argument("AccessProject: duration must be >= 1");
}

void CBAConfig::validate() const {
  if (discount_rate < 0.0 || horizon < 1 || residual_inefficiency < 0.0 ||
      fragmentation_kappa < 0.0)
    throw std::invalid_argument("CBAConfig: fields must be nonnegative");
}

double social_benefit(const std::vector<double>& base_utilities, double rho_a,
                      double rho_b) {
  check_rho_interval(rho_a, rho_b);
  const double total =
      std::accumulate(base_utilities.begin(), base_utilities.end(), 0.0);
  return (rho_b - rho_a) * total;
}

double monetized_benefit(const AccessPopulation& population, double rho_b,
                         const SolverConfig& config) {
  return population_ev(population, rho_b, config);
}

KaldorHicksResult kaldor_hicks_test(const std::vector<AccessProject>& projects,
                                    const AccessPopulation& population,
                                    const CBAConfig& config, bool fragmented,
                                    const SolverConfig& solver_config) {
  config.validate();
  double total_delta = 0.0;
  double total_cost = 0.0;
  for (const auto& project : projects) {
    project.validate();
    total_delta += project.delta_rho;
    total_cost += project.cost;
  }
  const double rho_b = population.baseline_rho + total_delta;
  if (!projects.empty() && rho_b > 1.0 + 1e-12)
    throw std::invalid_argument(
        "kaldor_hicks_test: projects push rho past 1");

  KaldorHicksResult result;
  result.total_cost =
      total_cost + (fragmented ? config.residual_inefficiency : 0.0);
  if (!projects.empty()) {
    const double per_period = monetized_benefit(
        population, std::min(rho_b, 1.0), solver_config);
    result.pv_benefit =
        per_period * annuity_factor(config.discount_rate, config.horizon);
  }
  result.margin = result.pv_benefit - result.total_cost;
  result.pass = result.margin >= 0.0;
  return result;
}

std::vector<AccessProject> marginal_project_rule(
    const std::vector<AccessProject>& projects,
    const AccessPopulation& population, const CBAConfig& config,
    const SolverConfig& solver_config) {
  config.validate();
  for (const auto& project : projects) project.validate();

  auto pv_benefit_at = [&](const AccessProject& project, double rho_from) {
    const double rho_to = std::min(1.0, rho_from + project.delta_rho);
    if (rho_to <= rho_from) return 0.0;
    AccessPopulation shifted = population;
    shifted.baseline_rho = rho_from;
    const double per_period =
        monetized_benefit(shifted, rho_to, solver_config);
    return per_period * annuity_factor(config.discount_rate,
                                       std::min(project.duration,
                                                config.horizon));
  };

  // Descending benefit-cost ratio from the common baseline; free projects
  // first, ties broken by name.
  std::vector<AccessProject> ordered = projects;
  std::vector<double> ratios(ordered.size());
  for (size_t i = 0; i < ordered.size(); ++i) {
    const double benefit = pv_benefit_at(ordered[i], population.baseline_rho);
    ratios[i] = ordered[i].cost > 0.0
                    ? benefit / ordered[i].cost
                    : std::numeric_limits<double>::infinity();
  }
  std::vector<size_t> order(ordered.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    if (ratios[x] != ratios[y]) return ratios[x] > ratios[y];
    return ordered[x].name < ordered[y].name;
  });

  std::vector<AccessProject> accepted;
  double rho = population.baseline_rho;
  for (size_t idx : order) {
    const AccessProject& project = ordered[idx];
    if (rho + project.delta_rho > 1.0 + 1e-12) continue;
    const double benefit = pv_benefit_at(project, rho);
    if (benefit >= project.cost) {
      accepted.push_back(project);
      rho = std::min(1.0, rho + project.delta_rho);
    }
  }
  return accepted;
}

const Allocation& status_quo_filter(const Allocation& old_allocation,
                                    const Allocation& candidate,
                                    double kappa) {
  if (kappa < 0.0)
    throw std::invalid_argument("status_quo_filter: kappa must be >= 0");
  return candidate.utility_value - old_allocation.utility_value > kappa
             ? candidate
             : old_allocation;
}

double measured_residual_inefficiency(
    const std::vector<std::pair<Allocation, Allocation>>& old_and_candidate,
    double kappa) {
  double frictionless = 0.0;
  double with_friction = 0.0;
  for (const auto& [old_alloc, candidate] : old_and_candidate) {
    frictionless += status_quo_filter(old_alloc, candidate, 0.0).utility_value;
    with_friction +=
        status_quo_filter(old_alloc, candidate, kappa).utility_value;
  }
  return frictionless - with_friction;
}

}  // namespace mobility
