#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mobility/policy.hpp"
#include "mobility/temporal.hpp"

namespace mobility {

// Deterministic per-creator random substream: a splitmix64 sequence keyed
// by (seed, index), so draws are independent of evaluation order and
// parallelism.
class Substream {
 public:
  Substream(uint64_t seed, uint64_t index);

  uint64_t next_u64();
  double next_unit();    // uniform in [0, 1)
  double next_normal();  // standard normal (Box-Muller)
  double next_gamma(double shape);
  double next_beta(double shape1, double shape2);

 private:
  uint64_t state_;
};

struct Distribution {
  enum class Kind { Point, Uniform, Beta, LogNormal };

  Kind kind = Kind::Point;
  double value = 0.0;   // Point
  double low = 0.0;     // Uniform / Beta support
  double high = 0.0;
  double shape1 = 1.0;  // Beta
  double shape2 = 1.0;
  double log_mean = 0.0;  // LogNormal
  double log_sigma = 0.0;

  static Distribution point(double v);
  static Distribution uniform(double lo, double hi);
  static Distribution beta(double s1, double s2, double lo, double hi);
  static Distribution log_normal(double mu, double sigma);

  double sample(Substream& stream) const;
  double mean() const;
  // Smallest/largest attainable value; LogNormal is unbounded above.
  double support_low() const;
  double support_high() const;
};

struct PopulationSpec {
  int count = 1;
  uint64_t seed = 0;
  Distribution a = Distribution::point(1.0);
  Distribution b = Distribution::point(0.0);
  Distribution c = Distribution::point(0.0);
  Distribution alpha = Distribution::point(0.5);
  Distribution beta = Distribution::point(0.5);
  Distribution gamma = Distribution::point(1.0);
  Distribution delta = Distribution::point(1.0);
  Distribution phi = Distribution::point(0.5);
  Distribution budget = Distribution::point(100.0);

  // Rejects distributions whose support can violate the type invariants.
  void validate() const;
};

struct CreatorSpec {
  int id = 0;
  MobilityTechnology tech;
  Preference pref;
  double budget = 0.0;
  PolicyRegime regime;
  std::optional<TemporalTechnology> temporal;
};

std::vector<CreatorSpec> generate_population(const PopulationSpec& spec);

ParetoVerdict pareto_compare(const std::vector<double>& outcomes_a,
                             const std::vector<double>& outcomes_b,
                             double relative_tolerance = 1e-9);

struct AggregateReport {
  size_t count = 0;
  double mean_utility = 0.0;
  double median_utility = 0.0;
  double total_mobility_expenditure = 0.0;
  double total_other_expenditure = 0.0;
  double total_device_expenditure = 0.0;
  double total_deadweight_loss = 0.0;
  size_t converged = 0;
  size_t corner = 0;
  size_t max_iterations = 0;
};

AggregateReport aggregate_report(const std::vector<PolicyOutcome>& outcomes);

}  // namespace mobility
