#pragma once

#include <array>

#include "mobility/model.hpp"

namespace mobility {

struct SolverConfig {
  double tolerance = 1e-9;
  int max_iterations = 10000;
  int multistarts = 8;
  int oracle_grid = 60;

  void validate() const;
};

enum class SolveStatus { Converged, CornerSolution, MaxIterations };

// Device-contributed quantities that enter production but are not chosen
// by the solver and carry no expenditure in the allocation's split.
struct FixedInputs {
  double joint_labor = 0.0;
  double joint_capital = 0.0;
  double solo_labor = 0.0;
  double solo_capital = 0.0;

  bool any() const {
    return joint_labor > 0.0 || joint_capital > 0.0 || solo_labor > 0.0 ||
           solo_capital > 0.0;
  }
};

struct Allocation {
  InputBundle bundle;        // purchased quantities, fixed inputs excluded
  double other_goods = 0.0;  // composite quantity A
  double utility_value = 0.0;
  EndowmentSplit split{};
  double foc_residual_norm = 0.0;
  SolveStatus status = SolveStatus::Converged;
};

// Per-dollar marginal-utility deviations from their common value, in the
// order joint_labor, joint_capital, solo_labor, solo_capital, composite.
// Inputs with a zero coefficient or a zero quantity are excluded.
struct FocResidual {
  std::array<double, 5> deviation{};
  std::array<bool, 5> included{};
  double norm = 0.0;
};

// Budget-constrained utility maximization over expenditure shares on the
// simplex: log-utility ascent with projection, multistarted from the
// equal-share point plus deterministic random interior points.
// Throws std::invalid_argument for a negative budget.
Allocation maximize_utility(const MobilityTechnology& tech,
                            const Preference& pref, const PriceSystem& prices,
                            double total_budget,
                            const SolverConfig& config = {},
                            const FixedInputs& fixed = {});

FocResidual foc_residual(const MobilityTechnology& tech, const Preference& pref,
                         const PriceSystem& prices, const Allocation& alloc,
                         const FixedInputs& fixed = {});

// Exhaustive search over expenditure-share grid points on the budget
// simplex. Independent of the gradient path; used as a verification
// oracle. Dimensionality is bounded by the active inputs.
Allocation brute_force_oracle(const MobilityTechnology& tech,
                              const Preference& pref,
                              const PriceSystem& prices, double total_budget,
                              int grid_n, const FixedInputs& fixed = {});

// Non-mobility production A(L, K) = tfp * L^theta_labor * K^theta_capital.
struct AProduction {
  double tfp;
  double theta_labor;
  double theta_capital;

  AProduction(double tfp_, double theta_labor_, double theta_capital_);

  double evaluate(double labor, double capital) const;
  double d_labor(double labor, double capital) const;
  double d_capital(double labor, double capital) const;
};

// Pairwise deviations among (dU/dM)/(dU/dA), (dM/dL)/(dA/dL) and
// (dM/dK)/(dA/dK). The zero triple characterizes efficiency in mobility
// product mix. Throws std::domain_error on boundary allocations.
std::array<double, 3> product_mix_residual(const MobilityTechnology& m_tech,
                                           const AProduction& a_prod,
                                           const Preference& pref,
                                           const InputBundle& m_alloc,
                                           double a_labor, double a_capital);

// Fixed-total-factor two-sector economy: given totals of labor and capital
// split between mobility and composite production, maximize U(M, A).
struct TwoSectorAllocation {
  double labor_to_mobility = 0.0;
  double capital_to_mobility = 0.0;
  double labor_to_other = 0.0;
  double capital_to_other = 0.0;
  double mobility_qty = 0.0;
  double other_qty = 0.0;
  double utility_value = 0.0;
};

TwoSectorAllocation solve_two_sector(const MobilityTechnology& m_tech,
                                     const AProduction& a_prod,
                                     const Preference& pref,
                                     double total_labor, double total_capital,
                                     const SolverConfig& config = {});

}  // namespace mobility
