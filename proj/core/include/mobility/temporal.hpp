#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mobility/policy.hpp"
#include "mobility/solver.hpp"

namespace mobility {

struct MixedSignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Piecewise-linear parameter path over periods, flat beyond the endpoints.
struct TimePath {
  std::vector<std::pair<double, double>> breakpoints;  // (t, value), sorted

  explicit TimePath(std::vector<std::pair<double, double>> breakpoints_);
  static TimePath constant(double value) { return TimePath({{0.0, value}}); }

  double value_at(double t) const;
  // Spacing of the breakpoint interval containing t (1 for single-point
  // paths); sets the finite-difference step for the r-rate.
  double local_spacing(double t) const;
  bool is_breakpoint(double t) const;
};

// One path per technology parameter. tech_at must satisfy the
// MobilityTechnology invariants wherever it is evaluated.
struct TemporalTechnology {
  TimePath a, b, c;
  TimePath alpha, beta, gamma, delta;

  static TemporalTechnology constant(const MobilityTechnology& tech);
};

struct InvestmentScenario {
  std::map<int, double> upfront_costs;      // period -> money
  std::map<int, double> recurring_savings;  // period -> money
  std::map<int, double> utility_deltas;     // optional, period -> delta U
  int horizon = 1;
  double discount_rate = 0.0;

  void validate() const;
};

enum class MobilityFunctionType { Type1, Type2 };

enum class ParetoVerdict {
  FirstDominates,
  SecondDominates,
  Equivalent,
  Incomparable
};

struct ParetoReport {
  struct Entry {
    int creator_id = 0;
    double delta_utility = 0.0;
    bool failed = false;
  };
  std::vector<Entry> per_creator;
  ParetoVerdict verdict = ParetoVerdict::Equivalent;
};

// A creator for comparative-statics runs: temporal technology plus a
// fungible budget.
struct TemporalCreator {
  int id = 0;
  TemporalTechnology technology;
  Preference pref;
  PriceSystem prices;
  double budget = 0.0;
};

MobilityTechnology tech_at(const TemporalTechnology& temporal, double t);

// Rehabilitation rate dM/dt at a fixed bundle: central finite difference
// with step one tenth of the local breakpoint spacing; one-sided at kinks.
double r_rate(const TemporalTechnology& temporal, const InputBundle& bundle,
              double t);

// Type1 iff the r-rate is >= -tolerance on every grid point, Type2 iff
// < -tolerance everywhere. Throws MixedSignError otherwise.
MobilityFunctionType classify(const TemporalTechnology& temporal,
                              const InputBundle& bundle,
                              const std::vector<double>& grid,
                              double tolerance = 1e-9);

double npv(const InvestmentScenario& scenario);

// Smallest period with nonnegative cumulative undiscounted net flow.
std::optional<int> payback_period(const InvestmentScenario& scenario);

// Signed money amount pi solving U_new(budget - pi) = U_old(budget) by
// monotone bisection. Positive: the creator would pay for the new method;
// negative: the subsidy required.
double independence_premium(const PolicyOutcome& old_outcome,
                            const PolicyOutcome& new_outcome,
                            const MobilityTechnology& tech_new,
                            const Preference& pref, const PriceSystem& prices,
                            const SolverConfig& config = {});

struct TrajectoryPoint {
  MobilityTechnology tech;
  Allocation allocation;
  double t = 0.0;
};

// Difference of the discounted streams PV(dU/dM * dM/dt) and
// PV(dU/dA * dA/dt), with time derivatives by finite differences across
// consecutive periods. Diagnostic only.
double intertemporal_foc_residual(const std::vector<TrajectoryPoint>& trajectory,
                                  const Preference& pref);

// Solves every creator at tech_at(t0) and tech_at(t1) under fungible
// budgets and reports per-creator utility deltas with the dominance
// verdict. Solver failures mark the creator Failed and force Incomparable.
ParetoReport comparative_statics(const std::vector<TemporalCreator>& population,
                                 double t0, double t1,
                                 const SolverConfig& config = {},
                                 int parallelism = 1);

// Linear map from reinvested money to organic-parameter growth, clamped
// at the parameter caps.
struct ReinvestmentRule {
  double fraction = 0.0;  // share of realized savings reinvested, in [0, 1]
  double alpha_per_dollar = 0.0;
  double beta_per_dollar = 0.0;
  double gamma_per_dollar = 0.0;
  double delta_per_dollar = 0.0;

  void validate() const;
};

// Simulates `horizon` periods: each period solves the creator's fungible
// problem, banks mobility-expenditure savings relative to period 0, and
// reinvests per the rule. Returns the utility sequence.
std::vector<double> long_run_convergence(const MobilityTechnology& tech,
                                         const Preference& pref,
                                         const PriceSystem& prices,
                                         double budget,
                                         const ReinvestmentRule& rule,
                                         int horizon,
                                         const SolverConfig& config = {});

}  // namespace mobility
