#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>

#include "mobility/scenario.hpp"

using namespace mobility;

namespace {

const char* kMinimalScenario = R"json({
  "schema_version": 1,
  "seed": 7,
  "prices": {"wage": 25.0, "capital_rate": 1.0, "composite_price": 1.0},
  "creators": [
    {
      "id": 0,
      "tech": {
        "a": 1.0, "b": 0.5, "c": 0.0,
        "alpha": 0.4, "beta": 0.4, "gamma": 0.6, "delta": 1.0
      },
      "pref": {"phi": 0.5},
      "budget_cents": 1000000
    }
  ]
})json";

std::string with_replacement(const std::string& needle,
                             const std::string& replacement) {
  std::string text = kMinimalScenario;
  const size_t at = text.find(needle);
  REQUIRE(at != std::string::npos);
  text.replace(at, needle.size(), replacement);
  return text;
}

bool has_diagnostic(const std::vector<ScenarioDiagnostic>& diagnostics,
                    const std::string& path) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [&](const ScenarioDiagnostic& d) { return d.path == path; });
}

}  // namespace

TEST_CASE("a minimal scenario parses with the declared values") {
  const Scenario scenario = parse_scenario_text(kMinimalScenario);
  CHECK(scenario.schema_version == 1);
  CHECK(scenario.seed == 7);
  CHECK(scenario.prices.wage == 25.0);
  REQUIRE(scenario.creators.size() == 1);
  CHECK(scenario.creators[0].budget == doctest::Approx(10000.0));
  CHECK(scenario.creators[0].tech.organic.gamma == 0.6);
  CHECK(scenario.creators[0].pref.phi == 0.5);
}

TEST_CASE("serialization round-trips field for field") {
  const Scenario first = parse_scenario_text(kMinimalScenario);
  const std::string canonical = serialize_scenario(first);
  const Scenario second = parse_scenario_text(canonical);
  CHECK(serialize_scenario(second) == canonical);
  CHECK(scenario_hash(first) == scenario_hash(second));
  CHECK(second.seed == first.seed);
  CHECK(second.creators[0].budget == first.creators[0].budget);
  CHECK(second.creators[0].tech.coefficients.b ==
        first.creators[0].tech.coefficients.b);
}

TEST_CASE("the hash reacts to seeds and to content") {
  const Scenario base = parse_scenario_text(kMinimalScenario);
  Scenario reseeded = base;
  reseeded.seed = 8;
  CHECK(scenario_hash(base) != scenario_hash(reseeded));

  Scenario richer = base;
  richer.creators[0].budget += 0.01;
  CHECK(scenario_hash(base) != scenario_hash(richer));
}

TEST_CASE("parse errors name the first failing path") {
  const std::string bad_phi = with_replacement("\"phi\": 0.5", "\"phi\": 1.5");
  CHECK_THROWS_WITH_AS(parse_scenario_text(bad_phi),
                       doctest::Contains("/creators/0/pref/phi"),
                       ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("{ not json"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("[1,2,3]"), ScenarioError);
}

TEST_CASE("validation collects diagnostics instead of throwing") {
  const std::string bad = with_replacement(
      "\"alpha\": 0.4, \"beta\": 0.4", "\"alpha\": 0.7, \"beta\": 0.5");
  const std::vector<ScenarioDiagnostic> diagnostics =
      validate_scenario_text(bad);
  CHECK_FALSE(diagnostics.empty());
  CHECK(has_diagnostic(diagnostics, "/creators/0/tech"));

  CHECK(validate_scenario_text(kMinimalScenario).empty());
}

TEST_CASE("unknown schema versions are rejected") {
  const std::string future =
      with_replacement("\"schema_version\": 1", "\"schema_version\": 99");
  CHECK_THROWS_WITH_AS(parse_scenario_text(future),
                       doctest::Contains("/schema_version"), ScenarioError);
}

TEST_CASE("type-exclusion regimes must reference an earlier base by name") {
  std::string text = R"json({
  "schema_version": 1,
  "seed": 7,
  "prices": {"wage": 25.0, "capital_rate": 1.0, "composite_price": 1.0},
  "creators": [
    {
      "id": 0,
      "tech": {
        "a": 1.0, "b": 0.5, "c": 0.0,
        "alpha": 0.4, "beta": 0.4, "gamma": 0.6, "delta": 1.0
      },
      "pref": {"phi": 0.5},
      "budget_cents": 1000000
    }
  ],
  "regimes": [
    {"name": "open", "kind": "fungible", "benchmark": true,
     "budget_cents": 1000000},
    {"name": "no-turner", "kind": "type_exclusion",
     "excluded": ["turner"], "base": "open"}
  ]
})json";
  const Scenario scenario = parse_scenario_text(text);
  REQUIRE(scenario.regimes.size() == 2);
  CHECK(scenario.regimes[0].benchmark);
  const auto* exclusion =
      std::get_if<TypeExclusionRegime>(&scenario.regimes[1].regime);
  REQUIRE(exclusion != nullptr);
  CHECK(exclusion->excluded == std::vector<std::string>{"turner"});
  CHECK(std::holds_alternative<FungibleRegime>(exclusion->base));

  // A dangling reference is an error at the regime's path.
  std::string dangling = text;
  const size_t at = dangling.find("\"base\": \"open\"");
  REQUIRE(at != std::string::npos);
  dangling.replace(at, 14, "\"base\": \"missing\"");
  CHECK_THROWS_WITH_AS(parse_scenario_text(dangling),
                       doctest::Contains("/regimes/1"), ScenarioError);
}

TEST_CASE("money conversions are exact at cent resolution") {
  CHECK(to_cents(1234.56) == 123456);
  CHECK(to_cents(-0.01) == -1);
  CHECK(to_cents(0.005) == 1);  // round half away from zero
  CHECK(from_cents(123456) == doctest::Approx(1234.56));
  for (int64_t cents : {int64_t{0}, int64_t{1}, int64_t{99}, int64_t{100000001}})
    CHECK(to_cents(from_cents(cents)) == cents);
}

TEST_CASE("money formatting groups thousands") {
  CHECK(format_money(0.0) == "$0.00");
  CHECK(format_money(1234.56) == "$1,234.56");
  CHECK(format_money(1000000.0) == "$1,000,000.00");
  CHECK(format_money(-9876.5) == "-$9,876.50");
  CHECK(format_money(0.005) == "$0.01");
}
