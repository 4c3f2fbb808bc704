#include "mobility/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace mobility {

namespace {

constexpr double kKinkEps = 1e-12;

}  // namespace

TimePath::TimePath(std::vector<std::pair<double, double>> breakpoints_)
    : breakpoints(std::move(breakpoints_)) {
  if (breakpoints.empty())
    throw std::invalid_argument("TimePath: at least one breakpoint required");
  for (size_t i = 1; i < breakpoints.size(); ++i)
    if (breakpoints[i].first <= breakpoints[i - 1].first)
      throw std::invalid_argument(
          "TimePath: breakpoints must be strictly increasing in t");
}

double TimePath::value_at(double t) const {
  if (t <= breakpoints.front().first) return breakpoints.front().second;
  if (t >= breakpoints.back().first) return breakpoints.back().second;
  for (size_t i = 1; i < breakpoints.size(); ++i) {
    if (t <= breakpoints[i].first) {
      const auto& [t0, v0] = breakpoints[i - 1];
      const auto& [t1, v1] = breakpoints[i];
      const double w = (t - t0) / (t1 - t0);
      return v0 + w * (v1 - v0);
    }
  }
  return breakpoints.back().second;
}

double TimePath::local_spacing(double t) const {
  if (breakpoints.size() < 2) return 1.0;
  double spacing = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < breakpoints.size(); ++i) {
    const double lo = breakpoints[i - 1].first;
    const double hi = breakpoints[i].first;
    if (t >= lo - kKinkEps && t <= hi + kKinkEps)
      spacing = std::min(spacing, hi - lo);
  }
  if (!std::isfinite(spacing))
    spacing = breakpoints.back().first - breakpoints.front().first;
  return spacing;
}

bool TimePath::is_breakpoint(double t) const {
  for (const auto& [bt, value] : breakpoints)
    if (std::abs(bt - t) <= kKinkEps * (1.0 + std::abs(bt))) return true;
  return false;
}

TemporalTechnology TemporalTechnology::constant(
    const MobilityTechnology& tech) {
  return TemporalTechnology{TimePath::constant(tech.coefficients.a),
                            TimePath::constant(tech.coefficients.b),
                            TimePath::constant(tech.coefficients.c),
                            TimePath::constant(tech.organic.alpha),
                            TimePath::constant(tech.organic.beta),
                            TimePath::constant(tech.organic.gamma),
                            TimePath::constant(tech.organic.delta)};
}

MobilityTechnology tech_at(const TemporalTechnology& temporal, double t) {
  // The type constructors re-check the invariants; violations surface as
  // std::invalid_argument naming the failing parameter.
  return MobilityTechnology{
      EndowmentCoefficients(temporal.a.value_at(t), temporal.b.value_at(t),
                            temporal.c.value_at(t)),
      OrganicParameters(temporal.alpha.value_at(t), temporal.beta.value_at(t),
                        temporal.gamma.value_at(t),
                        temporal.delta.value_at(t))};
}

double r_rate(const TemporalTechnology& temporal, const InputBundle& bundle,
              double t) {
  double spacing = std::numeric_limits<double>::infinity();
  bool kink = false;
  double last_break = -std::numeric_limits<double>::infinity();
  for (const TimePath* path : {&temporal.a, &temporal.b, &temporal.c,
                               &temporal.alpha, &temporal.beta,
                               &temporal.gamma, &temporal.delta}) {
    spacing = std::min(spacing, path->local_spacing(t));
    kink = kink || path->is_breakpoint(t);
    if (path->breakpoints.size() > 1)
      last_break = std::max(last_break, path->breakpoints.back().first);
  }
  if (!std::isfinite(spacing) || spacing <= 0.0) spacing = 1.0;
  const double h = 0.1 * spacing;

  auto mobility = [&](double at) {
    return evaluate_mobility(tech_at(temporal, at), bundle);
  };
  if (kink) {
    // One-sided difference, exact on the linear piece. Past the last
    // varying breakpoint every path is flat, so look backward there.
    if (t >= last_break - kKinkEps * (1.0 + std::abs(last_break)))
      return (mobility(t) - mobility(t - h)) / h;
    return (mobility(t + h) - mobility(t)) / h;
  }
  return (mobility(t + h) - mobility(t - h)) / (2.0 * h);
}

MobilityFunctionType classify(const TemporalTechnology& temporal,
                              const InputBundle& bundle,
                              const std::vector<double>& grid,
                              double tolerance) {
  if (grid.empty())
    throw std::invalid_argument("classify: grid must be non-empty");
  bool all_nonneg = true;
  bool all_neg = true;
  for (double t : grid) {
    const double rate = r_rate(temporal, bundle, t);
    all_nonneg = all_nonneg && rate >= -tolerance;
    all_neg = all_neg && rate < -tolerance;
  }
  if (all_nonneg) return MobilityFunctionType::Type1;
  if (all_neg) return MobilityFunctionType::Type2;
  throw MixedSignError(
      "classify: r-rate changes sign across the grid; the model assumes a "
      "uniform sign");
}

void InvestmentScenario::validate() const {
  if (horizon < 1)
    throw std::invalid_argument("InvestmentScenario: horizon must be >= 1");
  if (discount_rate < 0.0)
    throw std::invalid_argument(
        "InvestmentScenario: discount_rate must be >= 0");
  for (const auto& [t, v] : upfront_costs)
    if (t < 0 || t > horizon || v < 0.0)
      throw std::invalid_argument("InvestmentScenario: invalid cost entry");
  for (const auto& [t, v] : recurring_savings)
    if (t < 0 || t > horizon || v < 0.0)
      throw std::invalid_argument("InvestmentScenario: invalid savings entry");
}

double npv(const InvestmentScenario& scenario) {
  scenario.validate();
  double total = 0.0;
  for (int t = 0; t <= scenario.horizon; ++t) {
    double net = 0.0;
    if (auto it = scenario.recurring_savings.find(t);
        it != scenario.recurring_savings.end())
      net += it->second;
    if (auto it = scenario.upfront_costs.find(t);
        it != scenario.upfront_costs.end())
      net -= it->second;
    total += net / std::pow(1.0 + scenario.discount_rate, t);
  }
  return total;
}

std::optional<int> payback_period(const InvestmentScenario& scenario) {
  scenario.validate();
  double cumulative = 0.0;
  for (int t = 0; t <= scenario.horizon; ++t) {
    if (auto it = scenario.recurring_savings.find(t);
        it != scenario.recurring_savings.end())
      cumulative += it->second;
    if (auto it = scenario.upfront_costs.find(t);
        it != scenario.upfront_costs.end())
      cumulative -= it->second;
    if (cumulative >= 0.0) return t;
  }
  return std::nullopt;
}

double independence_premium(const PolicyOutcome& old_outcome,
                            const PolicyOutcome& new_outcome,
                            const MobilityTechnology& tech_new,
                            const Preference& pref, const PriceSystem& prices,
                            const SolverConfig& config) {
  const double budget = old_outcome.allocation.split.total;
  const double target = old_outcome.allocation.utility_value;
  const double u_new = new_outcome.allocation.utility_value;
  const double tol = config.tolerance * (1.0 + std::abs(target));
  if (std::abs(u_new - target) <= tol) return 0.0;

  auto utility_at = [&](double premium) {
    const double reduced = budget - premium;
    if (reduced <= 0.0) return 0.0;
    return maximize_utility(tech_new, pref, prices, reduced, config)
        .utility_value;
  };

  // U_new(budget - pi) is decreasing in pi and zero at pi = budget; the
  // old utility is nonnegative, so a bracket always exists.
  double lo = -budget;  // subsidy side
  double hi = budget;
  while (utility_at(lo) < target) lo *= 2.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * (1.0 + std::abs(hi));
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (utility_at(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double intertemporal_foc_residual(const std::vector<TrajectoryPoint>& trajectory,
                                  const Preference& pref) {
  if (trajectory.size() < 2)
    throw std::invalid_argument(
        "intertemporal_foc_residual: need at least two periods");

  double pv_mobility = 0.0;
  double pv_other = 0.0;
  for (size_t i = 0; i + 1 < trajectory.size(); ++i) {
    const auto& cur = trajectory[i];
    const auto& next = trajectory[i + 1];
    const double dt = next.t - cur.t;
    if (dt <= 0.0)
      throw std::invalid_argument(
          "intertemporal_foc_residual: periods must be increasing");

    const double m_cur = evaluate_mobility(cur.tech, cur.allocation.bundle);
    const double m_next = evaluate_mobility(next.tech, next.allocation.bundle);
    const double a_cur = cur.allocation.other_goods;
    const double a_next = next.allocation.other_goods;
    const double u = utility(m_cur, a_cur, pref.phi);
    if (u <= 0.0) continue;

    const double du_dm = pref.phi * u / m_cur;
    const double du_da = (1.0 - pref.phi) * u / a_cur;
    const double dm_dt = (m_next - m_cur) / dt;
    const double da_dt = (a_next - a_cur) / dt;
    const double discount = std::pow(1.0 + pref.discount_rate, -cur.t);
    pv_mobility += discount * du_dm * dm_dt;
    pv_other += discount * du_da * da_dt;
  }
  return pv_mobility - pv_other;
}

ParetoReport comparative_statics(const std::vector<TemporalCreator>& population,
                                 double t0, double t1,
                                 const SolverConfig& config, int parallelism) {
  ParetoReport report;
  report.per_creator.resize(population.size());

  auto solve_one = [&](size_t i) {
    const auto& creator = population[i];
    ParetoReport::Entry entry;
    entry.creator_id = creator.id;
    try {
      const Allocation before =
          maximize_utility(tech_at(creator.technology, t0), creator.pref,
                           creator.prices, creator.budget, config);
      const Allocation after =
          maximize_utility(tech_at(creator.technology, t1), creator.pref,
                           creator.prices, creator.budget, config);
      entry.delta_utility = after.utility_value - before.utility_value;
    } catch (const std::exception&) {
      entry.failed = true;
    }
    report.per_creator[i] = entry;
  };

  if (parallelism <= 1 || population.size() < 2) {
    for (size_t i = 0; i < population.size(); ++i) solve_one(i);
  } else {
    const size_t workers =
        std::min<size_t>(parallelism, population.size());
    std::vector<std::future<void>> futures;
    for (size_t w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&, w] {
        for (size_t i = w; i < population.size(); i += workers) solve_one(i);
      }));
    }
    for (auto& f : futures) f.get();
  }

  bool any_failed = false;
  bool any_up = false;
  bool any_down = false;
  const double tol = 1e-9;
  for (const auto& entry : report.per_creator) {
    any_failed = any_failed || entry.failed;
    any_up = any_up || entry.delta_utility > tol;
    any_down = any_down || entry.delta_utility < -tol;
  }
  if (any_failed || (any_up && any_down))
    report.verdict = ParetoVerdict::Incomparable;
  else if (any_up)
    report.verdict = ParetoVerdict::SecondDominates;
  else if (any_down)
    report.verdict = ParetoVerdict::FirstDominates;
  else
    report.verdict = ParetoVerdict::Equivalent;
  return report;
}

void ReinvestmentRule::validate() const {
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument(
        "ReinvestmentRule: fraction must lie in [0, 1]");
  if (alpha_per_dollar < 0.0 || beta_per_dollar < 0.0 ||
      gamma_per_dollar < 0.0 || delta_per_dollar < 0.0)
    throw std::invalid_argument(
        "ReinvestmentRule: growth rates must be nonnegative");
}

std::vector<double> long_run_convergence(const MobilityTechnology& tech,
                                         const Preference& pref,
                                         const PriceSystem& prices,
                                         double budget,
                                         const ReinvestmentRule& rule,
                                         int horizon,
                                         const SolverConfig& config) {
  rule.validate();
  if (horizon < 1)
    throw std::invalid_argument("long_run_convergence: horizon must be >= 1");

  MobilityTechnology current = tech;
  std::vector<double> utilities;
  utilities.reserve(horizon + 1);

  const Allocation initial =
      maximize_utility(current, pref, prices, budget, config);
  utilities.push_back(initial.utility_value);
  const double baseline_mobility_spend = initial.split.mobility;

  for (int period = 1; period <= horizon; ++period) {
    const Allocation alloc =
        maximize_utility(current, pref, prices, budget, config);
    const double savings =
        std::max(0.0, baseline_mobility_spend - alloc.split.mobility);
    const double reinvested = rule.fraction * savings;

    // Growth clamps at the caps: the limit of a fully organic endowment.
    // Joint increments are scaled down together so alpha + beta <= 1 and
    // parameters never move backwards.
    double inc_alpha = rule.alpha_per_dollar * reinvested;
    double inc_beta = rule.beta_per_dollar * reinvested;
    const double joint_room =
        1.0 - current.organic.alpha - current.organic.beta;
    if (inc_alpha + inc_beta > joint_room) {
      const double scale =
          inc_alpha + inc_beta > 0.0
              ? std::max(0.0, joint_room) / (inc_alpha + inc_beta)
              : 0.0;
      inc_alpha *= scale;
      inc_beta *= scale;
    }
    const double alpha = std::min(1.0, current.organic.alpha + inc_alpha);
    const double beta = std::min(1.0, current.organic.beta + inc_beta);
    const double gamma = std::min(
        1.0, current.organic.gamma + rule.gamma_per_dollar * reinvested);
    const double delta = std::min(
        1.0, current.organic.delta + rule.delta_per_dollar * reinvested);
    current = MobilityTechnology{current.coefficients,
                                 OrganicParameters(alpha, beta, gamma, delta)};

    const Allocation next =
        maximize_utility(current, pref, prices, budget, config);
    utilities.push_back(next.utility_value);
  }
  return utilities;
}

}  // namespace mobility
