#include "mobility/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mobility {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Input slots: 0=joint_labor, 1=joint_capital, 2=solo_labor, 3=solo_capital,
// 4=composite. The composite slot is always active.
constexpr int kComposite = 4;

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_double(uint64_t& state) {
  return (splitmix64(state) >> 11) * 0x1.0p-53;
}

struct ShareProblem {
  const MobilityTechnology& tech;
  const Preference& pref;
  const PriceSystem& prices;
  double budget;
  FixedInputs fixed;
  std::vector<int> active;  // input slots with positive coefficient, then 4
  double ca, cb, cc;  // coefficients normalized to unit sum: the argmax is
                      // invariant to common scaling, and normalizing makes
                      // the solver exactly so (division rounds correctly)

  ShareProblem(const MobilityTechnology& t, const Preference& p,
               const PriceSystem& pr, double budget_, const FixedInputs& f)
      : tech(t), pref(p), prices(pr), budget(budget_), fixed(f) {
    const double norm =
        t.coefficients.a + t.coefficients.b + t.coefficients.c;
    ca = t.coefficients.a / norm;
    cb = t.coefficients.b / norm;
    cc = t.coefficients.c / norm;
    if (t.coefficients.a > 0.0) {
      active.push_back(0);
      active.push_back(1);
    }
    if (t.coefficients.b > 0.0) active.push_back(2);
    if (t.coefficients.c > 0.0) active.push_back(3);
    active.push_back(kComposite);
  }

  double price(int slot) const {
    switch (slot) {
      case 0:
      case 2: return prices.wage;
      case 1:
      case 3: return prices.capital_rate;
      default: return prices.composite_price;
    }
  }

  double fixed_qty(int slot) const {
    switch (slot) {
      case 0: return fixed.joint_labor;
      case 1: return fixed.joint_capital;
      case 2: return fixed.solo_labor;
      case 3: return fixed.solo_capital;
      default: return 0.0;
    }
  }

  // Purchased + fixed quantity for active index i given its share.
  double quantity(int i, double share) const {
    const int slot = active[i];
    return fixed_qty(slot) + share * budget / price(slot);
  }

  InputBundle total_bundle(const std::vector<double>& shares) const {
    double q[4] = {fixed.joint_labor, fixed.joint_capital, fixed.solo_labor,
                   fixed.solo_capital};
    for (size_t i = 0; i + 1 < active.size(); ++i)
      q[active[i]] = quantity(static_cast<int>(i), shares[i]);
    return InputBundle(q[0], q[1], q[2], q[3]);
  }

  InputBundle purchased_bundle(const std::vector<double>& shares) const {
    double q[4] = {0, 0, 0, 0};
    for (size_t i = 0; i + 1 < active.size(); ++i)
      q[active[i]] = shares[i] * budget / price(active[i]);
    return InputBundle(q[0], q[1], q[2], q[3]);
  }

  double composite_qty(const std::vector<double>& shares) const {
    return shares.back() * budget / prices.composite_price;
  }

  double normalized_mobility(const InputBundle& bundle) const {
    const auto& org = tech.organic;
    double m = 0.0;
    if (ca > 0.0 && bundle.joint_labor > 0.0 && bundle.joint_capital > 0.0)
      m += ca * std::pow(bundle.joint_labor, org.alpha) *
           std::pow(bundle.joint_capital, org.beta);
    if (cb > 0.0 && bundle.solo_labor > 0.0)
      m += cb * std::pow(bundle.solo_labor, org.gamma);
    if (cc > 0.0 && bundle.solo_capital > 0.0)
      m += cc * std::pow(bundle.solo_capital, org.delta);
    return m;
  }

  // Log utility; -inf when M or A is zero.
  double objective(const std::vector<double>& shares) const {
    const double m = normalized_mobility(total_bundle(shares));
    const double a = composite_qty(shares);
    if (m <= 0.0 || a <= 0.0) return kNegInf;
    return pref.phi * std::log(m) + (1.0 - pref.phi) * std::log(a);
  }

  // Gradient of the log utility in shares. Quantities are clamped away
  // from zero so boundary iterates get a large finite push inward.
  std::vector<double> gradient(const std::vector<double>& shares) const {
    const size_t d = active.size();
    std::vector<double> grad(d, 0.0);
    const auto& org = tech.organic;

    double q[4];
    for (int slot = 0; slot < 4; ++slot) q[slot] = fixed_qty(slot);
    for (size_t i = 0; i + 1 < d; ++i)
      q[active[i]] = quantity(static_cast<int>(i), shares[i]);
    for (int slot = 0; slot < 4; ++slot) {
      const double eps = 1e-12 * (1.0 + budget / price(slot));
      q[slot] = std::max(q[slot], eps);
    }

    const double m = ca * std::pow(q[0], org.alpha) * std::pow(q[1], org.beta) +
                     cb * std::pow(q[2], org.gamma) +
                     cc * std::pow(q[3], org.delta);
    double dm[4] = {0, 0, 0, 0};
    if (ca > 0.0) {
      dm[0] = ca * org.alpha * std::pow(q[0], org.alpha - 1.0) *
              std::pow(q[1], org.beta);
      dm[1] = ca * org.beta * std::pow(q[0], org.alpha) *
              std::pow(q[1], org.beta - 1.0);
    }
    if (cb > 0.0) dm[2] = cb * org.gamma * std::pow(q[2], org.gamma - 1.0);
    if (cc > 0.0) dm[3] = cc * org.delta * std::pow(q[3], org.delta - 1.0);

    for (size_t i = 0; i + 1 < d; ++i) {
      const int slot = active[i];
      grad[i] = pref.phi * dm[slot] / m * (budget / price(slot));
    }
    const double a_eps = 1e-12 * (1.0 + budget / prices.composite_price);
    const double a = std::max(composite_qty(shares), a_eps);
    grad[d - 1] = (1.0 - pref.phi) * (budget / prices.composite_price) / a;
    return grad;
  }
};

// Euclidean projection onto the probability simplex.
void project_simplex(std::vector<double>& v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  int rho = 0;
  for (size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) {
      rho = static_cast<int>(j + 1);
      theta = t;
    }
  }
  if (rho == 0) theta = (cumsum - 1.0) / static_cast<double>(u.size());
  for (auto& x : v) x = std::max(x - theta, 0.0);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double linf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

struct StartResult {
  std::vector<double> shares;
  double objective = kNegInf;
  bool converged = false;
};

// Exponentiated-gradient (entropic mirror) ascent: s_i <- s_i * exp(t * g_i),
// renormalized. Iterates stay interior, so the log objective never sees a
// boundary, and tiny optimal shares are resolved multiplicatively.
StartResult ascend(const ShareProblem& prob, std::vector<double> s,
                   const SolverConfig& cfg) {
  StartResult res;
  for (auto& x : s) x = std::max(x, 1e-12);
  double total = 0.0;
  for (double x : s) total += x;
  for (auto& x : s) x /= total;

  double f = prob.objective(s);
  std::vector<double> g = prob.gradient(s);
  bool converged = false;

  // KKT stationarity on the simplex: at an optimum the per-share
  // gradients equal their shared multiplier wherever the share is
  // positive, so max_i s_i |g_i - lambda| vanishes. Scaled by lambda so
  // the test is invariant to budget units.
  auto stationarity = [](const std::vector<double>& point,
                         const std::vector<double>& grad) {
    const double lambda = dot(point, grad);
    double worst = 0.0;
    for (size_t i = 0; i < point.size(); ++i)
      worst = std::max(worst, point[i] * std::abs(grad[i] - lambda));
    return worst / (1.0 + std::abs(lambda));
  };

  double eta = 1.0;
  double plateau_f = f;
  int plateau_iter = 0;

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    const double lambda = dot(s, g);
    const double pg = stationarity(s, g);
    if (pg <= cfg.tolerance) {
      converged = true;
      break;
    }
    if (f > plateau_f + 1e-14 * (1.0 + std::abs(plateau_f))) {
      plateau_f = f;
      plateau_iter = iter;
    } else if (iter - plateau_iter >= 50) {
      // Fifty iterations without measurable ascent: iterates are inside
      // the floating-point plateau around the optimum.
      converged = pg <= 1e-5;
      break;
    }

    // Directional derivative of the mirror step at t -> 0.
    double slope = 0.0;
    for (size_t i = 0; i < s.size(); ++i)
      slope += s[i] * (g[i] - lambda) * (g[i] - lambda);

    double t = eta;
    bool stepped = false;
    for (int bt = 0; bt < 80; ++bt) {
      std::vector<double> trial(s.size());
      double norm = 0.0;
      for (size_t i = 0; i < s.size(); ++i) {
        const double ex = std::clamp(t * (g[i] - lambda), -60.0, 60.0);
        trial[i] = s[i] * std::exp(ex);
        norm += trial[i];
      }
      for (auto& x : trial) x /= norm;
      const double f_trial = prob.objective(trial);
      if (f_trial > kNegInf && f_trial >= f + 1e-4 * t * slope &&
          f_trial > f) {
        s = std::move(trial);
        f = f_trial;
        eta = t * 2.0;
        stepped = true;
        break;
      }
      t *= 0.5;
    }
    if (!stepped) {
      // No improving step at any scale: a machine-precision stall.
      // Accept if the point is stationary up to pow() noise.
      converged = pg <= 1e-5;
      break;
    }
    g = prob.gradient(s);
  }

  // Re-check stationarity for runs that used up all iterations.
  if (!converged) converged = stationarity(s, g) <= cfg.tolerance;

  res.shares = std::move(s);
  res.objective = f;
  res.converged = converged;
  return res;
}

Allocation finalize(const ShareProblem& prob, const std::vector<double>& shares,
                    const MobilityTechnology& tech, const Preference& pref,
                    const PriceSystem& prices, SolveStatus status,
                    const FixedInputs& fixed) {
  Allocation alloc;
  alloc.bundle = prob.purchased_bundle(shares);
  alloc.other_goods = prob.composite_qty(shares);
  const double m = evaluate_mobility(tech, prob.total_bundle(shares));
  alloc.utility_value = utility(m, alloc.other_goods, pref.phi);
  alloc.split = endowment_split(alloc.bundle, alloc.other_goods, prices);
  alloc.status = status;
  alloc.foc_residual_norm =
      foc_residual(tech, pref, prices, alloc, fixed).norm;
  return alloc;
}

Allocation zero_allocation(const MobilityTechnology& tech,
                           const Preference& pref, const PriceSystem& prices,
                           const FixedInputs& fixed) {
  Allocation alloc;
  alloc.bundle = InputBundle();
  alloc.other_goods = 0.0;
  const InputBundle total(fixed.joint_labor, fixed.joint_capital,
                          fixed.solo_labor, fixed.solo_capital);
  alloc.utility_value =
      utility(evaluate_mobility(tech, total), 0.0, pref.phi);
  alloc.split = endowment_split(alloc.bundle, 0.0, prices);
  alloc.status = SolveStatus::Converged;
  return alloc;
}

double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
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
  const double mid = 0.5 * (a + b);
  return mid;
}

}  // namespace

void SolverConfig::validate() const {
  if (tolerance <= 0.0)
    throw std::invalid_argument("SolverConfig: tolerance must be > 0");
  if (max_iterations < 1 || multistarts < 1 || oracle_grid < 1)
    throw std::invalid_argument("SolverConfig: counts must be >= 1");
}

Allocation maximize_utility(const MobilityTechnology& tech,
                            const Preference& pref, const PriceSystem& prices,
                            double total_budget, const SolverConfig& config,
                            const FixedInputs& fixed) {
  config.validate();
  if (total_budget < 0.0)
    throw std::invalid_argument("maximize_utility: budget must be >= 0");
  if (total_budget == 0.0) return zero_allocation(tech, pref, prices, fixed);

  ShareProblem prob(tech, pref, prices, total_budget, fixed);
  const size_t d = prob.active.size();

  std::vector<std::vector<double>> starts;
  starts.emplace_back(d, 1.0 / static_cast<double>(d));
  uint64_t rng = 0x6d6f62696c697479ULL;  // fixed stream: deterministic runs
  for (int s = 1; s < config.multistarts; ++s) {
    std::vector<double> pt(d);
    double sum = 0.0;
    for (auto& x : pt) {
      x = -std::log(std::max(unit_double(rng), 1e-300));
      sum += x;
    }
    for (auto& x : pt) x /= sum;
    starts.push_back(std::move(pt));
  }

  StartResult best;
  bool have_best = false;
  for (const auto& start : starts) {
    StartResult run = ascend(prob, start, config);
    const double tie =
        config.tolerance * (1.0 + std::abs(have_best ? best.objective : 0.0));
    const bool better = run.objective > best.objective + tie;
    const bool tied_but_converged = run.converged && !best.converged &&
                                    run.objective > best.objective - tie;
    if (!have_best || better || tied_but_converged) {
      best = std::move(run);
      have_best = true;
    }
  }

  SolveStatus status = SolveStatus::MaxIterations;
  if (best.converged) {
    bool corner = false;
    for (double s : best.shares) corner = corner || s <= 1e-12;
    status = corner ? SolveStatus::CornerSolution : SolveStatus::Converged;
  }
  return finalize(prob, best.shares, tech, pref, prices, status, fixed);
}

FocResidual foc_residual(const MobilityTechnology& tech, const Preference& pref,
                         const PriceSystem& prices, const Allocation& alloc,
                         const FixedInputs& fixed) {
  FocResidual res;
  const InputBundle total(alloc.bundle.joint_labor + fixed.joint_labor,
                          alloc.bundle.joint_capital + fixed.joint_capital,
                          alloc.bundle.solo_labor + fixed.solo_labor,
                          alloc.bundle.solo_capital + fixed.solo_capital);
  const double m = evaluate_mobility(tech, total);
  const double a = alloc.other_goods;
  const double u = utility(m, a, pref.phi);
  if (u <= 0.0) return res;

  const double du_dm = pref.phi * u / m;
  const double du_da = (1.0 - pref.phi) * u / a;
  const auto& cf = tech.coefficients;
  const auto& org = tech.organic;

  const double q[4] = {total.joint_labor, total.joint_capital,
                       total.solo_labor, total.solo_capital};
  const double coef[4] = {cf.a, cf.a, cf.b, cf.c};
  double dm[4] = {0, 0, 0, 0};
  if (cf.a > 0.0 && q[0] > 0.0 && q[1] > 0.0) {
    dm[0] = cf.a * org.alpha * std::pow(q[0], org.alpha - 1.0) *
            std::pow(q[1], org.beta);
    dm[1] = cf.a * org.beta * std::pow(q[0], org.alpha) *
            std::pow(q[1], org.beta - 1.0);
  }
  if (cf.b > 0.0 && q[2] > 0.0)
    dm[2] = cf.b * org.gamma * std::pow(q[2], org.gamma - 1.0);
  if (cf.c > 0.0 && q[3] > 0.0)
    dm[3] = cf.c * org.delta * std::pow(q[3], org.delta - 1.0);

  const double input_price[4] = {prices.wage, prices.capital_rate,
                                 prices.wage, prices.capital_rate};

  double per_dollar[5] = {0, 0, 0, 0, 0};
  for (int slot = 0; slot < 4; ++slot) {
    if (coef[slot] > 0.0 && q[slot] > 0.0) {
      res.included[slot] = true;
      per_dollar[slot] = du_dm * dm[slot] / input_price[slot];
    }
  }
  res.included[4] = a > 0.0;
  if (res.included[4]) per_dollar[4] = du_da / prices.composite_price;

  double mean = 0.0;
  int n = 0;
  for (int i = 0; i < 5; ++i)
    if (res.included[i]) {
      mean += per_dollar[i];
      ++n;
    }
  if (n == 0) return res;
  mean /= n;
  double norm_sq = 0.0;
  for (int i = 0; i < 5; ++i) {
    if (!res.included[i]) continue;
    res.deviation[i] = per_dollar[i] - mean;
    // Relative to the common value so the norm is scale-free.
    const double rel = mean != 0.0 ? res.deviation[i] / mean : res.deviation[i];
    norm_sq += rel * rel;
  }
  res.norm = std::sqrt(norm_sq);
  return res;
}

Allocation brute_force_oracle(const MobilityTechnology& tech,
                              const Preference& pref,
                              const PriceSystem& prices, double total_budget,
                              int grid_n, const FixedInputs& fixed) {
  if (total_budget < 0.0)
    throw std::invalid_argument("brute_force_oracle: budget must be >= 0");
  if (total_budget == 0.0) return zero_allocation(tech, pref, prices, fixed);
  if (grid_n < 1)
    throw std::invalid_argument("brute_force_oracle: grid_n must be >= 1");

  ShareProblem prob(tech, pref, prices, total_budget, fixed);
  const size_t d = prob.active.size();

  std::vector<int> counts(d, 0);
  std::vector<double> best_shares(d, 0.0);
  double best_u = -1.0;

  // Depth-first enumeration of all compositions of grid_n into d parts.
  std::function<void(size_t, int)> visit = [&](size_t dim, int remaining) {
    if (dim + 1 == d) {
      counts[dim] = remaining;
      std::vector<double> shares(d);
      for (size_t i = 0; i < d; ++i)
        shares[i] = static_cast<double>(counts[i]) / grid_n;
      const double m = evaluate_mobility(tech, prob.total_bundle(shares));
      const double u = utility(m, prob.composite_qty(shares), pref.phi);
      if (u > best_u) {
        best_u = u;
        best_shares = shares;
      }
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[dim] = c;
      visit(dim + 1, remaining - c);
    }
  };
  visit(0, grid_n);

  // Zoom refinement: re-search a shrinking box around the incumbent so the
  // lattice resolution, not the coarse spacing, bounds the answer. Still a
  // pure enumeration, independent of the gradient path.
  if (d >= 2) {
    double step = 1.0 / grid_n;
    std::vector<double> shares(d, 0.0);
    for (int level = 0; level < 3; ++level) {
      const double fine = step / 10.0;
      const std::vector<double> center = best_shares;
      std::function<void(size_t, double)> scan = [&](size_t dim,
                                                     double used) {
        if (dim + 1 == d) {
          const double rest = 1.0 - used;
          if (rest < -1e-12) return;
          shares[dim] = std::max(0.0, rest);
          const double m = evaluate_mobility(tech, prob.total_bundle(shares));
          const double u = utility(m, prob.composite_qty(shares), pref.phi);
          if (u > best_u) {
            best_u = u;
            best_shares = shares;
          }
          return;
        }
        const double lo = std::max(0.0, center[dim] - 2.0 * step);
        for (int j = 0; j <= 40; ++j) {
          const double s = lo + fine * j;
          if (used + s > 1.0 + 1e-12) break;
          shares[dim] = std::min(s, 1.0 - used);
          scan(dim + 1, used + shares[dim]);
        }
      };
      scan(0, 0.0);
      step = fine;
    }
  }

  return finalize(prob, best_shares, tech, pref, prices,
                  SolveStatus::Converged, fixed);
}

AProduction::AProduction(double tfp_, double theta_labor_,
                         double theta_capital_)
    : tfp(tfp_), theta_labor(theta_labor_), theta_capital(theta_capital_) {
  if (tfp < 0.0) throw std::invalid_argument("AProduction: tfp must be >= 0");
  if (theta_labor <= 0.0 || theta_labor > 1.0 || theta_capital <= 0.0 ||
      theta_capital > 1.0 || theta_labor + theta_capital > 1.0 + 1e-15)
    throw std::invalid_argument(
        "AProduction: exponents must lie in (0,1] with sum <= 1");
}

double AProduction::evaluate(double labor, double capital) const {
  if (labor == 0.0 || capital == 0.0) return 0.0;
  return tfp * std::pow(labor, theta_labor) * std::pow(capital, theta_capital);
}

double AProduction::d_labor(double labor, double capital) const {
  if (capital == 0.0) return 0.0;
  if (labor == 0.0 && theta_labor < 1.0)
    throw std::domain_error("AProduction: unbounded marginal product");
  return tfp * theta_labor * std::pow(labor, theta_labor - 1.0) *
         std::pow(capital, theta_capital);
}

double AProduction::d_capital(double labor, double capital) const {
  if (labor == 0.0) return 0.0;
  if (capital == 0.0 && theta_capital < 1.0)
    throw std::domain_error("AProduction: unbounded marginal product");
  return tfp * theta_capital * std::pow(labor, theta_labor) *
         std::pow(capital, theta_capital - 1.0);
}

std::array<double, 3> product_mix_residual(const MobilityTechnology& m_tech,
                                           const AProduction& a_prod,
                                           const Preference& pref,
                                           const InputBundle& m_alloc,
                                           double a_labor, double a_capital) {
  const double m = evaluate_mobility(m_tech, m_alloc);
  const double a = a_prod.evaluate(a_labor, a_capital);
  if (m <= 0.0 || a <= 0.0)
    throw std::domain_error("product_mix_residual: boundary allocation");

  const MarginalProducts mp = marginal_products(m_tech, m_alloc);
  const double a_l = a_prod.d_labor(a_labor, a_capital);
  const double a_k = a_prod.d_capital(a_labor, a_capital);
  if (mp.joint_labor <= 0.0 || mp.joint_capital <= 0.0 || a_l <= 0.0 ||
      a_k <= 0.0)
    throw std::domain_error("product_mix_residual: boundary allocation");

  const double mrs = (pref.phi / (1.0 - pref.phi)) * (a / m);
  const double labor_ratio = mp.joint_labor / a_l;
  const double capital_ratio = mp.joint_capital / a_k;
  return {mrs - labor_ratio, labor_ratio - capital_ratio,
          capital_ratio - mrs};
}

TwoSectorAllocation solve_two_sector(const MobilityTechnology& m_tech,
                                     const AProduction& a_prod,
                                     const Preference& pref,
                                     double total_labor, double total_capital,
                                     const SolverConfig& config) {
  if (total_labor <= 0.0 || total_capital <= 0.0)
    throw std::invalid_argument("solve_two_sector: totals must be > 0");

  auto value = [&](double s_l, double s_k) {
    const InputBundle m_in(s_l * total_labor, s_k * total_capital, 0.0, 0.0);
    const double m = evaluate_mobility(m_tech, m_in);
    const double a = a_prod.evaluate((1.0 - s_l) * total_labor,
                                     (1.0 - s_k) * total_capital);
    if (m <= 0.0 || a <= 0.0) return kNegInf;
    return pref.phi * std::log(m) + (1.0 - pref.phi) * std::log(a);
  };

  double s_l = 0.5, s_k = 0.5;
  for (int round = 0; round < 500; ++round) {
    const double new_l = golden_section_max(
        [&](double x) { return value(x, s_k); }, 0.0, 1.0, 1e-13);
    const double new_k = golden_section_max(
        [&](double x) { return value(new_l, x); }, 0.0, 1.0, 1e-13);
    const double change =
        std::max(std::abs(new_l - s_l), std::abs(new_k - s_k));
    s_l = new_l;
    s_k = new_k;
    if (change < config.tolerance) break;
  }

  TwoSectorAllocation out;
  out.labor_to_mobility = s_l * total_labor;
  out.capital_to_mobility = s_k * total_capital;
  out.labor_to_other = (1.0 - s_l) * total_labor;
  out.capital_to_other = (1.0 - s_k) * total_capital;
  out.mobility_qty = evaluate_mobility(
      m_tech,
      InputBundle(out.labor_to_mobility, out.capital_to_mobility, 0.0, 0.0));
  out.other_qty = a_prod.evaluate(out.labor_to_other, out.capital_to_other);
  out.utility_value = utility(out.mobility_qty, out.other_qty, pref.phi);
  return out;
}

}  // namespace mobility
