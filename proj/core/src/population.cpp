#include "mobility/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mobility {

namespace {

uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Substream::Substream(uint64_t seed, uint64_t index)
    : state_(mix64(seed ^ mix64(index * 0x9E3779B97F4A7C15ULL + 1))) {}

uint64_t Substream::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double Substream::next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

double Substream::next_normal() {
  // Box-Muller; u1 bounded away from zero.
  const double u1 = std::max(next_unit(), 0x1.0p-53);
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Substream::next_gamma(double shape) {
  // Marsaglia-Tsang; boosts shape < 1 via the power transform.
  if (shape < 1.0) {
    const double u = std::max(next_unit(), 0x1.0p-53);
    return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_unit();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 &&
        std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v;
  }
}

double Substream::next_beta(double shape1, double shape2) {
  const double x = next_gamma(shape1);
  const double y = next_gamma(shape2);
  return x / (x + y);
}

Distribution Distribution::point(double v) {
  Distribution d;
  d.kind = Kind::Point;
  d.value = v;
  return d;
}

Distribution Distribution::uniform(double lo, double hi) {
  if (hi < lo) throw std::invalid_argument("Distribution: high < low");
  Distribution d;
  d.kind = Kind::Uniform;
  d.low = lo;
  d.high = hi;
  return d;
}

Distribution Distribution::beta(double s1, double s2, double lo, double hi) {
  if (s1 <= 0.0 || s2 <= 0.0)
    throw std::invalid_argument("Distribution: beta shapes must be > 0");
  if (hi < lo) throw std::invalid_argument("Distribution: high < low");
  Distribution d;
  d.kind = Kind::Beta;
  d.shape1 = s1;
  d.shape2 = s2;
  d.low = lo;
  d.high = hi;
  return d;
}

Distribution Distribution::log_normal(double mu, double sigma) {
  if (sigma < 0.0)
    throw std::invalid_argument("Distribution: log_sigma must be >= 0");
  Distribution d;
  d.kind = Kind::LogNormal;
  d.log_mean = mu;
  d.log_sigma = sigma;
  return d;
}

double Distribution::sample(Substream& stream) const {
  switch (kind) {
    case Kind::Point: return value;
    case Kind::Uniform: return low + (high - low) * stream.next_unit();
    case Kind::Beta:
      return low + (high - low) * stream.next_beta(shape1, shape2);
    case Kind::LogNormal:
      return std::exp(log_mean + log_sigma * stream.next_normal());
  }
  return value;
}

double Distribution::mean() const {
  switch (kind) {
    case Kind::Point: return value;
    case Kind::Uniform: return 0.5 * (low + high);
    case Kind::Beta: return low + (high - low) * shape1 / (shape1 + shape2);
    case Kind::LogNormal:
      return std::exp(log_mean + 0.5 * log_sigma * log_sigma);
  }
  return value;
}

double Distribution::support_low() const {
  switch (kind) {
    case Kind::Point: return value;
    case Kind::Uniform:
    case Kind::Beta: return low;
    case Kind::LogNormal: return 0.0;
  }
  return value;
}

double Distribution::support_high() const {
  switch (kind) {
    case Kind::Point: return value;
    case Kind::Uniform:
    case Kind::Beta: return high;
    case Kind::LogNormal: return std::numeric_limits<double>::infinity();
  }
  return value;
}

void PopulationSpec::validate() const {
  if (count < 1)
    throw std::invalid_argument("PopulationSpec: count must be >= 1");

  auto require = [](bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
  };
  require(a.support_low() >= 0.0 && b.support_low() >= 0.0 &&
              c.support_low() >= 0.0,
          "PopulationSpec: coefficient supports must be nonnegative");
  require(a.support_low() + b.support_low() + c.support_low() > 0.0,
          "PopulationSpec: coefficient supports allow an all-zero draw");
  for (const Distribution* exp : {&alpha, &beta, &gamma, &delta})
    require(exp->support_low() > 0.0 && exp->support_high() <= 1.0,
            "PopulationSpec: exponent supports must lie in (0, 1]");
  require(alpha.support_high() + beta.support_high() <= 1.0 + 1e-15,
          "PopulationSpec: alpha + beta supports may exceed 1");
  require(phi.support_low() > 0.0 && phi.support_high() < 1.0,
          "PopulationSpec: phi support must lie in (0, 1)");
  require(budget.support_low() >= 0.0,
          "PopulationSpec: budget support must be nonnegative");
  for (const Distribution* money : {&a, &b, &c, &alpha, &beta, &gamma, &delta,
                                    &phi}) {
    require(money->kind != Distribution::Kind::LogNormal,
            "PopulationSpec: log-normal is reserved for budgets");
  }
}

std::vector<CreatorSpec> generate_population(const PopulationSpec& spec) {
  spec.validate();
  std::vector<CreatorSpec> creators;
  creators.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    Substream stream(spec.seed, static_cast<uint64_t>(i));
    const double a = spec.a.sample(stream);
    const double b = spec.b.sample(stream);
    const double c = spec.c.sample(stream);
    MobilityTechnology tech{
        EndowmentCoefficients(a, b, c),
        OrganicParameters(spec.alpha.sample(stream), spec.beta.sample(stream),
                          spec.gamma.sample(stream),
                          spec.delta.sample(stream))};
    Preference pref(spec.phi.sample(stream));
    const double budget = spec.budget.sample(stream);
    creators.push_back(CreatorSpec{i, tech, pref, budget,
                                   FungibleRegime{budget}, std::nullopt});
  }
  return creators;
}

ParetoVerdict pareto_compare(const std::vector<double>& outcomes_a,
                             const std::vector<double>& outcomes_b,
                             double relative_tolerance) {
  if (outcomes_a.size() != outcomes_b.size())
    throw std::invalid_argument("pareto_compare: length mismatch");

  bool any_a_higher = false;
  bool any_b_higher = false;
  for (size_t i = 0; i < outcomes_a.size(); ++i) {
    const double scale =
        1.0 + std::max(std::abs(outcomes_a[i]), std::abs(outcomes_b[i]));
    const double tol = relative_tolerance * scale;
    if (outcomes_a[i] > outcomes_b[i] + tol) any_a_higher = true;
    if (outcomes_b[i] > outcomes_a[i] + tol) any_b_higher = true;
  }
  if (any_a_higher && any_b_higher) return ParetoVerdict::Incomparable;
  if (any_a_higher) return ParetoVerdict::FirstDominates;
  if (any_b_higher) return ParetoVerdict::SecondDominates;
  return ParetoVerdict::Equivalent;
}

AggregateReport aggregate_report(const std::vector<PolicyOutcome>& outcomes) {
  if (outcomes.empty())
    throw std::invalid_argument("aggregate_report: empty input");

  AggregateReport report;
  report.count = outcomes.size();
  std::vector<double> utilities;
  utilities.reserve(outcomes.size());
  for (const auto& outcome : outcomes) {
    const auto& alloc = outcome.allocation;
    utilities.push_back(alloc.utility_value);
    report.mean_utility += alloc.utility_value;
    report.total_mobility_expenditure += alloc.split.mobility;
    report.total_other_expenditure += alloc.split.other;
    for (const auto& device : outcome.devices_chosen)
      report.total_device_expenditure += device.price;
    report.total_deadweight_loss += outcome.money_metric_loss;
    switch (alloc.status) {
      case SolveStatus::Converged: ++report.converged; break;
      case SolveStatus::CornerSolution: ++report.corner; break;
      case SolveStatus::MaxIterations: ++report.max_iterations; break;
    }
  }
  report.mean_utility /= static_cast<double>(report.count);

  std::sort(utilities.begin(), utilities.end());
  const size_t mid = utilities.size() / 2;
  report.median_utility = utilities.size() % 2 == 1
                              ? utilities[mid]
                              : 0.5 * (utilities[mid - 1] + utilities[mid]);
  return report;
}

}  // namespace mobility
