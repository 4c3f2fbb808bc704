#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mobility/accessibility.hpp"
#include "mobility/policy.hpp"
#include "mobility/population.hpp"
#include "mobility/temporal.hpp"

namespace mobility {

inline constexpr int kSchemaVersion = 1;

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioDiagnostic {
  std::string path;  // JSON pointer-style location, e.g. /creators/0/pref/phi
  std::string message;
};

struct NamedRegime {
  std::string name;
  PolicyRegime regime;
  bool benchmark = false;
};

struct CreatorEntry {
  int id = 0;
  MobilityTechnology tech;
  Preference pref;
  double budget = 0.0;
  std::optional<TemporalTechnology> temporal;
};

// Per-period additive drift applied to the generated population's
// parameters to build temporal paths for comparative statics.
struct ParameterTrend {
  double a = 0.0, b = 0.0, c = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;
};

struct PopulationSection {
  PopulationSpec spec;
  std::optional<ParameterTrend> trend;
};

struct ComparativeWindow {
  double t0 = 0.0;
  double t1 = 1.0;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  uint64_t seed = 0;
  std::string period_unit = "period";
  PriceSystem prices{1.0, 1.0, 1.0};
  SolverConfig solver;
  std::vector<CreatorEntry> creators;
  std::optional<PopulationSection> population;
  std::vector<NamedRegime> regimes;
  std::optional<InvestmentScenario> investment;
  std::optional<MobilityTechnology> new_tech;  // independence-premium side
  std::vector<AccessProject> projects;
  CBAConfig cba;
  double baseline_rho = 1.0;
  bool fragmented = false;
  std::vector<double> kappa_sweep;
  ComparativeWindow comparative;
};

// Parses and fully validates; throws ScenarioError naming the failing
// path on the first hard error.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

// Full invariant check with a list of violations and their paths. Does
// not throw on invariant violations, only on unreadable/unparseable
// input.
std::vector<ScenarioDiagnostic> validate_scenario_text(
    const std::string& text);
std::vector<ScenarioDiagnostic> validate_scenario_file(
    const std::string& path);

// Canonical serialization: fixed key order, money as integer cents.
// parse(serialize(s)) == s field-for-field.
std::string serialize_scenario(const Scenario& scenario);

// FNV-1a over the canonical serialization, mixed with the seed; embedded
// in every report for reproducibility.
uint64_t scenario_hash(const Scenario& scenario);

int64_t to_cents(double dollars);
double from_cents(int64_t cents);
std::string format_money(double dollars);  // "$1,234.56"

}  // namespace mobility
