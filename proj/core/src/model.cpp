#include "mobility/model.hpp"

#include <cmath>
#include <stdexcept>

namespace mobility {

namespace {

// 0^x := 0 for x > 0. Exponents here are validated > 0, so the base is
// the only special case.
double pow_or_zero(double base, double exponent) {
  if (base == 0.0) return 0.0;
  return std::pow(base, exponent);
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

MobilityGood::MobilityGood(std::string label_, GoodCategory category_)
    : label(std::move(label_)), category(category_) {
  require(!label.empty(), "MobilityGood: label must be non-empty");
}

OrganicParameters::OrganicParameters(double alpha_, double beta_,
                                     double gamma_, double delta_)
    : alpha(alpha_), beta(beta_), gamma(gamma_), delta(delta_) {
  require(alpha > 0.0 && alpha <= 1.0,
          "OrganicParameters: alpha must lie in (0, 1]");
  require(beta > 0.0 && beta <= 1.0,
          "OrganicParameters: beta must lie in (0, 1]");
  require(gamma > 0.0 && gamma <= 1.0,
          "OrganicParameters: gamma must lie in (0, 1]");
  require(delta > 0.0 && delta <= 1.0,
          "OrganicParameters: delta must lie in (0, 1]");
  require(alpha + beta <= 1.0 + 1e-15,
          "OrganicParameters: alpha + beta must not exceed 1");
}

EndowmentCoefficients::EndowmentCoefficients(double a_, double b_, double c_)
    : a(a_), b(b_), c(c_) {
  require(a >= 0.0 && b >= 0.0 && c >= 0.0,
          "EndowmentCoefficients: weights must be nonnegative");
  require(a + b + c > 0.0,
          "EndowmentCoefficients: at least one weight must be positive");
}

InputBundle::InputBundle(double joint_labor_, double joint_capital_,
                         double solo_labor_, double solo_capital_)
    : joint_labor(joint_labor_),
      joint_capital(joint_capital_),
      solo_labor(solo_labor_),
      solo_capital(solo_capital_) {
  require(joint_labor >= 0.0 && joint_capital >= 0.0 && solo_labor >= 0.0 &&
              solo_capital >= 0.0,
          "InputBundle: quantities must be nonnegative");
}

PriceSystem::PriceSystem(double wage_, double capital_rate_,
                         double composite_price_)
    : wage(wage_),
      capital_rate(capital_rate_),
      composite_price(composite_price_) {
  require(wage > 0.0 && capital_rate > 0.0 && composite_price > 0.0,
          "PriceSystem: prices must be strictly positive");
}

Preference::Preference(double phi_, double discount_rate_)
    : phi(phi_), discount_rate(discount_rate_) {
  require(phi > 0.0 && phi < 1.0, "Preference: phi must lie in (0, 1)");
  require(discount_rate >= 0.0,
          "Preference: discount_rate must be nonnegative");
}

GoodCounts aggregate_bundle(const std::vector<MobilityGood>& goods) {
  GoodCounts counts;
  for (const auto& good : goods) {
    switch (good.category) {
      case GoodCategory::Joint: ++counts.joint; break;
      case GoodCategory::LaborOnly: ++counts.labor_only; break;
      case GoodCategory::CapitalOnly: ++counts.capital_only; break;
    }
  }
  return counts;
}

EndowmentCoefficients to_coefficients(const GoodCounts& counts) {
  return EndowmentCoefficients(static_cast<double>(counts.joint),
                               static_cast<double>(counts.labor_only),
                               static_cast<double>(counts.capital_only));
}

double evaluate_mobility(const MobilityTechnology& tech,
                         const InputBundle& bundle) {
  const auto& cf = tech.coefficients;
  const auto& org = tech.organic;
  double joint = 0.0;
  if (cf.a > 0.0) {
    joint = cf.a * pow_or_zero(bundle.joint_labor, org.alpha) *
            pow_or_zero(bundle.joint_capital, org.beta);
  }
  double solo_l =
      cf.b > 0.0 ? cf.b * pow_or_zero(bundle.solo_labor, org.gamma) : 0.0;
  double solo_k =
      cf.c > 0.0 ? cf.c * pow_or_zero(bundle.solo_capital, org.delta) : 0.0;
  return joint + solo_l + solo_k;
}

MarginalProducts marginal_products(const MobilityTechnology& tech,
                                   const InputBundle& bundle) {
  const auto& cf = tech.coefficients;
  const auto& org = tech.organic;
  MarginalProducts mp;

  if (cf.a > 0.0) {
    const double kpow = pow_or_zero(bundle.joint_capital, org.beta);
    const double lpow = pow_or_zero(bundle.joint_labor, org.alpha);
    // If the co-factor is zero the whole term vanishes identically, so the
    // partial is zero regardless of this input's level.
    if (kpow > 0.0) {
      if (bundle.joint_labor == 0.0 && org.alpha < 1.0)
        throw std::domain_error(
            "marginal_products: unbounded at joint_labor = 0");
      mp.joint_labor = cf.a * org.alpha *
                       pow_or_zero(bundle.joint_labor, org.alpha - 1.0) * kpow;
      if (org.alpha == 1.0 && bundle.joint_labor == 0.0)
        mp.joint_labor = cf.a * kpow;
    }
    if (lpow > 0.0) {
      if (bundle.joint_capital == 0.0 && org.beta < 1.0)
        throw std::domain_error(
            "marginal_products: unbounded at joint_capital = 0");
      mp.joint_capital =
          cf.a * org.beta * lpow *
          pow_or_zero(bundle.joint_capital, org.beta - 1.0);
      if (org.beta == 1.0 && bundle.joint_capital == 0.0)
        mp.joint_capital = cf.a * lpow;
    }
  }
  if (cf.b > 0.0) {
    if (bundle.solo_labor == 0.0 && org.gamma < 1.0)
      throw std::domain_error("marginal_products: unbounded at solo_labor = 0");
    mp.solo_labor =
        org.gamma == 1.0
            ? cf.b
            : cf.b * org.gamma * std::pow(bundle.solo_labor, org.gamma - 1.0);
  }
  if (cf.c > 0.0) {
    if (bundle.solo_capital == 0.0 && org.delta < 1.0)
      throw std::domain_error(
          "marginal_products: unbounded at solo_capital = 0");
    mp.solo_capital =
        org.delta == 1.0
            ? cf.c
            : cf.c * org.delta * std::pow(bundle.solo_capital, org.delta - 1.0);
  }
  return mp;
}

double utility(double mobility_qty, double other_qty, double phi) {
  if (mobility_qty < 0.0 || other_qty < 0.0)
    throw std::invalid_argument("utility: quantities must be nonnegative");
  if (mobility_qty == 0.0 || other_qty == 0.0) return 0.0;
  return std::pow(mobility_qty, phi) * std::pow(other_qty, 1.0 - phi);
}

double utility_accessible(double mobility_qty, double other_qty, double phi,
                          double rho) {
  if (rho <= 0.0 || rho > 1.0)
    throw std::invalid_argument("utility_accessible: rho must lie in (0, 1]");
  return rho * utility(mobility_qty, other_qty, phi);
}

EndowmentSplit endowment_split(const InputBundle& bundle, double other_qty,
                               const PriceSystem& prices) {
  if (other_qty < 0.0)
    throw std::invalid_argument("endowment_split: other_qty must be >= 0");
  EndowmentSplit split;
  split.mobility = prices.wage * (bundle.joint_labor + bundle.solo_labor) +
                   prices.capital_rate *
                       (bundle.joint_capital + bundle.solo_capital);
  split.other = prices.composite_price * other_qty;
  split.total = split.mobility + split.other;
  return split;
}

}  // namespace mobility
