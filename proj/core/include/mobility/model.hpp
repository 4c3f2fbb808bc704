#pragma once

#include <string>
#include <vector>

namespace mobility {

// Category of a single mobility good: produced jointly by caregiver labor
// and capital, by labor alone, or by capital alone.
enum class GoodCategory { Joint, LaborOnly, CapitalOnly };

struct MobilityGood {
  std::string label;
  GoodCategory category;

  MobilityGood(std::string label_, GoodCategory category_);
};

// Production exponents; smaller values mean a more severe impairment.
// Each lies in (0, 1]; alpha + beta <= 1 so the joint term is concave.
struct OrganicParameters {
  double alpha;
  double beta;
  double gamma;
  double delta;

  OrganicParameters(double alpha_ = 0.5, double beta_ = 0.5,
                    double gamma_ = 1.0, double delta_ = 1.0);
};

// Per-category weights. Integer counts of mobility goods in the simplest
// reading, but any nonnegative reals with a positive sum are accepted.
struct EndowmentCoefficients {
  double a;  // joint labor-capital goods
  double b;  // labor-only goods
  double c;  // capital-only goods

  EndowmentCoefficients(double a_ = 1.0, double b_ = 0.0, double c_ = 0.0);
};

struct MobilityTechnology {
  EndowmentCoefficients coefficients;
  OrganicParameters organic;
};

// Input quantities: joint caregiver hours / capital services feed the
// a-term, solo hours / services the b- and c-terms. All nonnegative.
struct InputBundle {
  double joint_labor;
  double joint_capital;
  double solo_labor;
  double solo_capital;

  InputBundle(double joint_labor_ = 0.0, double joint_capital_ = 0.0,
              double solo_labor_ = 0.0, double solo_capital_ = 0.0);
};

// One wage for both labor inputs, one rental rate for both capital inputs,
// and the price of the composite good. All strictly positive.
struct PriceSystem {
  double wage;
  double capital_rate;
  double composite_price;

  PriceSystem(double wage_ = 1.0, double capital_rate_ = 1.0,
              double composite_price_ = 1.0);
};

struct Preference {
  double phi;            // Cobb-Douglas weight on mobility, in (0, 1)
  double discount_rate;  // per-period fraction, >= 0

  Preference(double phi_ = 0.5, double discount_rate_ = 0.0);
};

// Expenditure identity: total = mobility + other, all nonnegative.
struct EndowmentSplit {
  double total = 0.0;
  double mobility = 0.0;
  double other = 0.0;
};

// Counts of goods per category before conversion into coefficients. An
// empty bundle yields all-zero counts, which EndowmentCoefficients rejects.
struct GoodCounts {
  int joint = 0;
  int labor_only = 0;
  int capital_only = 0;
};

struct MarginalProducts {
  double joint_labor = 0.0;
  double joint_capital = 0.0;
  double solo_labor = 0.0;
  double solo_capital = 0.0;
};

GoodCounts aggregate_bundle(const std::vector<MobilityGood>& goods);

EndowmentCoefficients to_coefficients(const GoodCounts& counts);

// a*L^alpha*K^beta + b*l^gamma + c*k^delta, with 0^x := 0 for x > 0.
double evaluate_mobility(const MobilityTechnology& tech,
                         const InputBundle& bundle);

// Analytic partials of evaluate_mobility. Throws std::domain_error at a
// zero input whose exponent is < 1 and whose term is otherwise active
// (the marginal product is unbounded there).
MarginalProducts marginal_products(const MobilityTechnology& tech,
                                   const InputBundle& bundle);

// M^phi * A^(1-phi); zero if either argument is zero.
double utility(double mobility_qty, double other_qty, double phi);

// rho * M^phi * A^(1-phi) with rho in (0, 1].
double utility_accessible(double mobility_qty, double other_qty, double phi,
                          double rho);

EndowmentSplit endowment_split(const InputBundle& bundle, double other_qty,
                               const PriceSystem& prices);

}  // namespace mobility
