#include "mobility/scenario.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mobility {

using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------
// Diagnostics-collecting accessors

struct Checker {
  std::vector<ScenarioDiagnostic> diags;

  void fail(const std::string& path, const std::string& message) {
    diags.push_back({path, message});
  }

  bool has(const json& node, const char* key) const {
    return node.is_object() && node.contains(key);
  }

  const json* object(const json& node, const std::string& path) {
    if (!node.is_object()) {
      fail(path, "expected an object");
      return nullptr;
    }
    return &node;
  }

  std::optional<double> number(const json& node, const char* key,
                               const std::string& path,
                               std::optional<double> fallback = {}) {
    if (!node.is_object() || !node.contains(key)) {
      if (fallback) return fallback;
      fail(path + "/" + key, "missing required number");
      return {};
    }
    const json& v = node.at(key);
    if (!v.is_number()) {
      fail(path + "/" + key, "expected a number");
      return {};
    }
    return v.get<double>();
  }

  std::optional<int64_t> integer(const json& node, const char* key,
                                 const std::string& path,
                                 std::optional<int64_t> fallback = {}) {
    if (!node.is_object() || !node.contains(key)) {
      if (fallback) return fallback;
      fail(path + "/" + key, "missing required integer");
      return {};
    }
    const json& v = node.at(key);
    if (!v.is_number_integer()) {
      fail(path + "/" + key, "expected an integer");
      return {};
    }
    return v.get<int64_t>();
  }

  std::optional<std::string> text(const json& node, const char* key,
                                  const std::string& path,
                                  std::optional<std::string> fallback = {}) {
    if (!node.is_object() || !node.contains(key)) {
      if (fallback) return fallback;
      fail(path + "/" + key, "missing required string");
      return {};
    }
    const json& v = node.at(key);
    if (!v.is_string()) {
      fail(path + "/" + key, "expected a string");
      return {};
    }
    return v.get<std::string>();
  }

  bool boolean(const json& node, const char* key, const std::string& path,
               bool fallback) {
    if (!node.is_object() || !node.contains(key)) return fallback;
    const json& v = node.at(key);
    if (!v.is_boolean()) {
      fail(path + "/" + key, "expected a boolean");
      return fallback;
    }
    return v.get<bool>();
  }
};

// ---------------------------------------------------------------------
// Section checks + builds. Check functions only record diagnostics;
// build functions assume a clean check.

void check_tech(Checker& ck, const json& node, const std::string& path) {
  const double a = ck.number(node, "a", path).value_or(0.0);
  const double b = ck.number(node, "b", path).value_or(0.0);
  const double c = ck.number(node, "c", path).value_or(0.0);
  if (a < 0.0 || b < 0.0 || c < 0.0)
    ck.fail(path, "coefficients a, b, c must be nonnegative");
  if (a + b + c <= 0.0)
    ck.fail(path, "at least one of a, b, c must be positive");
  const double alpha = ck.number(node, "alpha", path).value_or(0.5);
  const double beta = ck.number(node, "beta", path).value_or(0.5);
  for (const char* key : {"alpha", "beta", "gamma", "delta"}) {
    const double v = ck.number(node, key, path).value_or(0.5);
    if (v <= 0.0 || v > 1.0)
      ck.fail(path + "/" + key, "organic parameter must lie in (0, 1]");
  }
  if (alpha + beta > 1.0 + 1e-15)
    ck.fail(path, "alpha + beta must not exceed 1 (concavity restriction)");
}

MobilityTechnology build_tech(const json& node) {
  return MobilityTechnology{
      EndowmentCoefficients(node.at("a").get<double>(),
                            node.at("b").get<double>(),
                            node.at("c").get<double>()),
      OrganicParameters(
          node.at("alpha").get<double>(), node.at("beta").get<double>(),
          node.at("gamma").get<double>(), node.at("delta").get<double>())};
}

json tech_to_json(const MobilityTechnology& tech) {
  json out;
  out["a"] = tech.coefficients.a;
  out["b"] = tech.coefficients.b;
  out["c"] = tech.coefficients.c;
  out["alpha"] = tech.organic.alpha;
  out["beta"] = tech.organic.beta;
  out["gamma"] = tech.organic.gamma;
  out["delta"] = tech.organic.delta;
  return out;
}

void check_path(Checker& ck, const json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) {
    ck.fail(path, "expected a non-empty array of [t, value] pairs");
    return;
  }
  double prev_t = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < node.size(); ++i) {
    const json& bp = node[i];
    const std::string bp_path = path + "/" + std::to_string(i);
    if (!bp.is_array() || bp.size() != 2 || !bp[0].is_number() ||
        !bp[1].is_number()) {
      ck.fail(bp_path, "expected a [t, value] number pair");
      continue;
    }
    const double t = bp[0].get<double>();
    if (t <= prev_t) ck.fail(bp_path, "breakpoints must be increasing in t");
    prev_t = t;
  }
}

TimePath build_path(const json& node) {
  std::vector<std::pair<double, double>> breakpoints;
  for (const json& bp : node)
    breakpoints.emplace_back(bp[0].get<double>(), bp[1].get<double>());
  return TimePath(std::move(breakpoints));
}

json path_to_json(const TimePath& path) {
  json out = json::array();
  for (const auto& [t, v] : path.breakpoints) out.push_back(json::array({t, v}));
  return out;
}

void check_temporal(Checker& ck, const json& node, const std::string& path) {
  for (const char* key : {"a", "b", "c", "alpha", "beta", "gamma", "delta"}) {
    if (!ck.has(node, key)) {
      ck.fail(path + "/" + key, "missing parameter path");
      continue;
    }
    check_path(ck, node.at(key), path + "/" + key);
  }
}

TemporalTechnology build_temporal(const json& node) {
  return TemporalTechnology{
      build_path(node.at("a")),     build_path(node.at("b")),
      build_path(node.at("c")),     build_path(node.at("alpha")),
      build_path(node.at("beta")),  build_path(node.at("gamma")),
      build_path(node.at("delta"))};
}

json temporal_to_json(const TemporalTechnology& temporal) {
  json out;
  out["a"] = path_to_json(temporal.a);
  out["b"] = path_to_json(temporal.b);
  out["c"] = path_to_json(temporal.c);
  out["alpha"] = path_to_json(temporal.alpha);
  out["beta"] = path_to_json(temporal.beta);
  out["gamma"] = path_to_json(temporal.gamma);
  out["delta"] = path_to_json(temporal.delta);
  return out;
}

void check_distribution(Checker& ck, const json& node, const std::string& path,
                        bool is_budget) {
  const auto kind = ck.text(node, "kind", path);
  if (!kind) return;
  if (*kind == "point") {
    ck.number(node, "value", path);
  } else if (*kind == "uniform" || *kind == "beta") {
    const double lo = ck.number(node, "low", path).value_or(0.0);
    const double hi = ck.number(node, "high", path).value_or(0.0);
    if (hi < lo) ck.fail(path, "high must be >= low");
    if (*kind == "beta") {
      if (ck.number(node, "shape1", path).value_or(1.0) <= 0.0 ||
          ck.number(node, "shape2", path).value_or(1.0) <= 0.0)
        ck.fail(path, "beta shapes must be positive");
    }
  } else if (*kind == "lognormal") {
    if (!is_budget)
      ck.fail(path, "lognormal is only valid for the budget distribution");
    ck.number(node, "log_mean", path);
    if (ck.number(node, "log_sigma", path).value_or(0.0) < 0.0)
      ck.fail(path + "/log_sigma", "must be >= 0");
  } else {
    ck.fail(path + "/kind",
            "unknown kind (expected point, uniform, beta or lognormal)");
  }
}

Distribution build_distribution(const json& node) {
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "point") return Distribution::point(node.at("value"));
  if (kind == "uniform")
    return Distribution::uniform(node.at("low"), node.at("high"));
  if (kind == "beta")
    return Distribution::beta(node.at("shape1"), node.at("shape2"),
                              node.at("low"), node.at("high"));
  return Distribution::log_normal(node.at("log_mean"), node.at("log_sigma"));
}

json distribution_to_json(const Distribution& dist) {
  json out;
  switch (dist.kind) {
    case Distribution::Kind::Point:
      out["kind"] = "point";
      out["value"] = dist.value;
      break;
    case Distribution::Kind::Uniform:
      out["kind"] = "uniform";
      out["low"] = dist.low;
      out["high"] = dist.high;
      break;
    case Distribution::Kind::Beta:
      out["kind"] = "beta";
      out["shape1"] = dist.shape1;
      out["shape2"] = dist.shape2;
      out["low"] = dist.low;
      out["high"] = dist.high;
      break;
    case Distribution::Kind::LogNormal:
      out["kind"] = "lognormal";
      out["log_mean"] = dist.log_mean;
      out["log_sigma"] = dist.log_sigma;
      break;
  }
  return out;
}

void check_device(Checker& ck, const json& node, const std::string& path) {
  ck.text(node, "name", path);
  if (ck.integer(node, "price_cents", path).value_or(0) < 0)
    ck.fail(path + "/price_cents", "must be >= 0");
  if (ck.number(node, "capital_services", path).value_or(0.0) < 0.0)
    ck.fail(path + "/capital_services", "must be >= 0");
  const auto target = ck.text(node, "target", path, std::string("joint"));
  if (target && *target != "joint" && *target != "solo")
    ck.fail(path + "/target", "expected \"joint\" or \"solo\"");
}

DeviceCatalogItem build_device(const json& node) {
  DeviceCatalogItem item;
  item.name = node.at("name").get<std::string>();
  item.price = from_cents(node.at("price_cents").get<int64_t>());
  item.capital_services = node.at("capital_services").get<double>();
  item.target = node.value("target", "joint") == std::string("solo")
                    ? CapitalTarget::Solo
                    : CapitalTarget::Joint;
  item.required = node.value("required", false);
  return item;
}

json device_to_json(const DeviceCatalogItem& item) {
  json out;
  out["name"] = item.name;
  out["price_cents"] = to_cents(item.price);
  out["capital_services"] = item.capital_services;
  out["target"] = item.target == CapitalTarget::Solo ? "solo" : "joint";
  out["required"] = item.required;
  return out;
}

void check_regime(Checker& ck, const json& node, const std::string& path,
                  const std::vector<std::string>& earlier_names,
                  bool allow_exclusion) {
  const auto kind = ck.text(node, "kind", path);
  if (!kind) return;
  if (*kind == "fungible") {
    if (ck.integer(node, "budget_cents", path).value_or(0) < 0)
      ck.fail(path + "/budget_cents", "must be >= 0");
  } else if (*kind == "siloed") {
    for (const char* key :
         {"labor_budget_cents", "capital_budget_cents", "other_budget_cents"})
      if (ck.integer(node, key, path).value_or(0) < 0)
        ck.fail(path + "/" + key, "must be >= 0");
  } else if (*kind == "approved_list") {
    for (const char* key : {"capital_budget_cents", "rest_budget_cents"})
      if (ck.integer(node, key, path).value_or(0) < 0)
        ck.fail(path + "/" + key, "must be >= 0");
    if (!ck.has(node, "catalog") || !node.at("catalog").is_array()) {
      ck.fail(path + "/catalog", "expected an array of devices");
    } else {
      const json& catalog = node.at("catalog");
      if (catalog.size() > 20)
        ck.fail(path + "/catalog", "at most 20 devices supported");
      for (size_t i = 0; i < catalog.size(); ++i)
        check_device(ck, catalog[i],
                     path + "/catalog/" + std::to_string(i));
    }
  } else if (*kind == "type_exclusion") {
    if (!allow_exclusion) {
      ck.fail(path, "type_exclusion cannot wrap another type_exclusion");
      return;
    }
    if (!ck.has(node, "excluded") || !node.at("excluded").is_array())
      ck.fail(path + "/excluded", "expected an array of names or categories");
    if (!ck.has(node, "base")) {
      ck.fail(path + "/base", "missing base regime");
    } else if (node.at("base").is_string()) {
      const std::string ref = node.at("base").get<std::string>();
      if (std::find(earlier_names.begin(), earlier_names.end(), ref) ==
          earlier_names.end())
        ck.fail(path + "/base",
                "reference \"" + ref + "\" does not name an earlier regime");
    } else {
      check_regime(ck, node.at("base"), path + "/base", earlier_names, false);
    }
  } else {
    ck.fail(path + "/kind", "unknown regime kind");
  }
}

BaseRegime build_base_regime(const json& node) {
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "fungible")
    return FungibleRegime{
        from_cents(node.at("budget_cents").get<int64_t>())};
  if (kind == "siloed")
    return SiloedRegime{
        from_cents(node.at("labor_budget_cents").get<int64_t>()),
        from_cents(node.at("capital_budget_cents").get<int64_t>()),
        from_cents(node.at("other_budget_cents").get<int64_t>())};
  ApprovedListRegime regime;
  regime.capital_budget =
      from_cents(node.at("capital_budget_cents").get<int64_t>());
  regime.rest_budget = from_cents(node.at("rest_budget_cents").get<int64_t>());
  for (const json& device : node.at("catalog"))
    regime.catalog.push_back(build_device(device));
  return regime;
}

PolicyRegime build_regime(const json& node,
                          const std::vector<NamedRegime>& earlier) {
  const std::string kind = node.at("kind").get<std::string>();
  if (kind != "type_exclusion") {
    return std::visit([](auto&& base) { return PolicyRegime(base); },
                      build_base_regime(node));
  }
  TypeExclusionRegime regime;
  for (const json& name : node.at("excluded"))
    regime.excluded.push_back(name.get<std::string>());
  const json& base = node.at("base");
  if (base.is_string()) {
    const std::string ref = base.get<std::string>();
    for (const auto& named : earlier) {
      if (named.name != ref) continue;
      std::visit(
          [&regime](auto&& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (!std::is_same_v<T, TypeExclusionRegime>)
              regime.base = b;
          },
          named.regime);
      return regime;
    }
    throw ScenarioError("unresolved regime reference: " + ref);
  }
  regime.base = build_base_regime(base);
  return regime;
}

json base_regime_to_json(const BaseRegime& base) {
  json out;
  if (const auto* f = std::get_if<FungibleRegime>(&base)) {
    out["kind"] = "fungible";
    out["budget_cents"] = to_cents(f->total_budget);
  } else if (const auto* s = std::get_if<SiloedRegime>(&base)) {
    out["kind"] = "siloed";
    out["labor_budget_cents"] = to_cents(s->labor_budget);
    out["capital_budget_cents"] = to_cents(s->capital_budget);
    out["other_budget_cents"] = to_cents(s->other_budget);
  } else {
    const auto& a = std::get<ApprovedListRegime>(base);
    out["kind"] = "approved_list";
    out["capital_budget_cents"] = to_cents(a.capital_budget);
    out["rest_budget_cents"] = to_cents(a.rest_budget);
    json catalog = json::array();
    for (const auto& item : a.catalog) catalog.push_back(device_to_json(item));
    out["catalog"] = catalog;
  }
  return out;
}

json regime_to_json(const PolicyRegime& regime) {
  if (const auto* ex = std::get_if<TypeExclusionRegime>(&regime)) {
    json out;
    out["kind"] = "type_exclusion";
    out["excluded"] = ex->excluded;
    out["base"] = base_regime_to_json(ex->base);
    return out;
  }
  return std::visit(
      [](auto&& base) -> json {
        using T = std::decay_t<decltype(base)>;
        if constexpr (std::is_same_v<T, TypeExclusionRegime>)
          return json();  // unreachable
        else
          return base_regime_to_json(BaseRegime(base));
      },
      regime);
}

std::map<int, double> build_cents_map(const json& node) {
  std::map<int, double> out;
  for (const auto& [key, value] : node.items())
    out[std::stoi(key)] = from_cents(value.get<int64_t>());
  return out;
}

void check_cents_map(Checker& ck, const json& node, const std::string& path) {
  if (!node.is_object()) {
    ck.fail(path, "expected an object mapping period -> cents");
    return;
  }
  for (const auto& [key, value] : node.items()) {
    bool numeric_key = !key.empty() && key.find_first_not_of("0123456789") ==
                                            std::string::npos;
    if (!numeric_key)
      ck.fail(path + "/" + key, "period keys must be nonnegative integers");
    if (!value.is_number_integer() || value.get<int64_t>() < 0)
      ck.fail(path + "/" + key, "expected nonnegative integer cents");
  }
}

json cents_map_to_json(const std::map<int, double>& flows) {
  json out = json::object();
  for (const auto& [t, v] : flows) out[std::to_string(t)] = to_cents(v);
  return out;
}

// ---------------------------------------------------------------------
// Whole-document check

std::vector<ScenarioDiagnostic> check_document(const json& root) {
  Checker ck;
  if (!root.is_object()) {
    ck.fail("/", "scenario must be a JSON object");
    return ck.diags;
  }

  if (ck.has(root, "schema_version")) {
    const auto version = ck.integer(root, "schema_version", "");
    if (version && *version != kSchemaVersion)
      ck.fail("/schema_version", "unsupported schema version");
  }
  if (ck.has(root, "seed")) ck.integer(root, "seed", "");

  if (ck.has(root, "prices")) {
    const json& prices = root.at("prices");
    for (const char* key : {"wage", "capital_rate", "composite_price"})
      if (ck.number(prices, key, "/prices").value_or(1.0) <= 0.0)
        ck.fail(std::string("/prices/") + key, "must be strictly positive");
  }

  if (ck.has(root, "solver")) {
    const json& solver = root.at("solver");
    if (ck.number(solver, "tolerance", "/solver", 1e-9).value_or(1e-9) <= 0.0)
      ck.fail("/solver/tolerance", "must be > 0");
    for (const char* key : {"max_iterations", "multistarts", "oracle_grid"})
      if (ck.integer(solver, key, "/solver", 1).value_or(1) < 1)
        ck.fail(std::string("/solver/") + key, "must be >= 1");
  }

  if (ck.has(root, "creators")) {
    const json& creators = root.at("creators");
    if (!creators.is_array()) {
      ck.fail("/creators", "expected an array");
    } else {
      for (size_t i = 0; i < creators.size(); ++i) {
        const std::string path = "/creators/" + std::to_string(i);
        const json& creator = creators[i];
        if (!creator.is_object()) {
          ck.fail(path, "expected an object");
          continue;
        }
        if (ck.has(creator, "tech"))
          check_tech(ck, creator.at("tech"), path + "/tech");
        else
          ck.fail(path + "/tech", "missing technology");
        if (ck.has(creator, "pref")) {
          const json& pref = creator.at("pref");
          const double phi =
              ck.number(pref, "phi", path + "/pref").value_or(0.5);
          if (phi <= 0.0 || phi >= 1.0)
            ck.fail(path + "/pref/phi", "phi must lie in (0, 1)");
          if (ck.number(pref, "discount_rate", path + "/pref", 0.0)
                  .value_or(0.0) < 0.0)
            ck.fail(path + "/pref/discount_rate", "must be >= 0");
        } else {
          ck.fail(path + "/pref", "missing preference");
        }
        if (ck.integer(creator, "budget_cents", path).value_or(0) < 0)
          ck.fail(path + "/budget_cents", "must be >= 0");
        if (ck.has(creator, "temporal"))
          check_temporal(ck, creator.at("temporal"), path + "/temporal");
      }
    }
  }

  if (ck.has(root, "population")) {
    const json& pop = root.at("population");
    const std::string path = "/population";
    if (ck.integer(pop, "count", path).value_or(1) < 1)
      ck.fail(path + "/count", "must be >= 1");
    ck.integer(pop, "seed", path, int64_t{0});
    if (ck.has(pop, "distributions")) {
      const json& dists = pop.at("distributions");
      for (const char* key :
           {"a", "b", "c", "alpha", "beta", "gamma", "delta", "phi",
            "budget"})
        if (ck.has(dists, key))
          check_distribution(ck, dists.at(key),
                             path + "/distributions/" + key,
                             std::string(key) == "budget");
    }
    if (ck.has(pop, "trend")) {
      for (const char* key :
           {"a", "b", "c", "alpha", "beta", "gamma", "delta"})
        ck.number(pop.at("trend"), key, path + "/trend", 0.0);
    }
  }

  if (ck.has(root, "regimes")) {
    const json& regimes = root.at("regimes");
    if (!regimes.is_array()) {
      ck.fail("/regimes", "expected an array");
    } else {
      std::vector<std::string> names;
      for (size_t i = 0; i < regimes.size(); ++i) {
        const std::string path = "/regimes/" + std::to_string(i);
        const auto name = ck.text(regimes[i], "name", path);
        check_regime(ck, regimes[i], path, names, true);
        if (name) names.push_back(*name);
      }
    }
  }

  if (ck.has(root, "investment")) {
    const json& invest = root.at("investment");
    const std::string path = "/investment";
    if (ck.has(invest, "upfront_costs_cents"))
      check_cents_map(ck, invest.at("upfront_costs_cents"),
                      path + "/upfront_costs_cents");
    if (ck.has(invest, "recurring_savings_cents"))
      check_cents_map(ck, invest.at("recurring_savings_cents"),
                      path + "/recurring_savings_cents");
    if (ck.integer(invest, "horizon", path, int64_t{1}).value_or(1) < 1)
      ck.fail(path + "/horizon", "must be >= 1");
    if (ck.number(invest, "discount_rate", path, 0.0).value_or(0.0) < 0.0)
      ck.fail(path + "/discount_rate", "must be >= 0");
  }

  if (ck.has(root, "new_tech")) check_tech(ck, root.at("new_tech"), "/new_tech");

  if (ck.has(root, "projects")) {
    const json& projects = root.at("projects");
    if (!projects.is_array()) {
      ck.fail("/projects", "expected an array");
    } else {
      for (size_t i = 0; i < projects.size(); ++i) {
        const std::string path = "/projects/" + std::to_string(i);
        const json& project = projects[i];
        ck.text(project, "name", path);
        if (ck.integer(project, "cost_cents", path).value_or(0) < 0)
          ck.fail(path + "/cost_cents", "must be >= 0");
        if (ck.number(project, "delta_rho", path).value_or(1.0) <= 0.0)
          ck.fail(path + "/delta_rho", "must be > 0");
        if (ck.integer(project, "duration", path, int64_t{1}).value_or(1) < 1)
          ck.fail(path + "/duration", "must be >= 1");
      }
    }
  }

  if (ck.has(root, "cba")) {
    const json& cba = root.at("cba");
    if (ck.number(cba, "discount_rate", "/cba", 0.0).value_or(0.0) < 0.0)
      ck.fail("/cba/discount_rate", "must be >= 0");
    if (ck.integer(cba, "horizon", "/cba", int64_t{1}).value_or(1) < 1)
      ck.fail("/cba/horizon", "must be >= 1");
    if (ck.integer(cba, "residual_inefficiency_cents", "/cba", int64_t{0})
            .value_or(0) < 0)
      ck.fail("/cba/residual_inefficiency_cents", "must be >= 0");
    if (ck.number(cba, "fragmentation_kappa", "/cba", 0.0).value_or(0.0) <
        0.0)
      ck.fail("/cba/fragmentation_kappa", "must be >= 0");
  }

  if (ck.has(root, "baseline_rho")) {
    const double rho = ck.number(root, "baseline_rho", "").value_or(1.0);
    if (rho <= 0.0 || rho > 1.0)
      ck.fail("/baseline_rho", "rho must lie in (0, 1]");
  }

  if (ck.has(root, "kappa_sweep")) {
    const json& sweep = root.at("kappa_sweep");
    if (!sweep.is_array())
      ck.fail("/kappa_sweep", "expected an array of numbers");
    else
      for (size_t i = 0; i < sweep.size(); ++i)
        if (!sweep[i].is_number() || sweep[i].get<double>() < 0.0)
          ck.fail("/kappa_sweep/" + std::to_string(i),
                  "kappa must be a nonnegative number");
  }

  if (ck.has(root, "comparative")) {
    ck.number(root.at("comparative"), "t0", "/comparative", 0.0);
    ck.number(root.at("comparative"), "t1", "/comparative", 1.0);
  }

  return ck.diags;
}

Scenario build_document(const json& root) {
  Scenario scenario;
  scenario.schema_version = root.value("schema_version", kSchemaVersion);
  scenario.seed = root.value("seed", uint64_t{0});
  scenario.period_unit = root.value("period_unit", "period");

  if (root.contains("prices")) {
    const json& prices = root.at("prices");
    scenario.prices = PriceSystem(prices.at("wage"), prices.at("capital_rate"),
                                  prices.at("composite_price"));
  }
  if (root.contains("solver")) {
    const json& solver = root.at("solver");
    scenario.solver.tolerance = solver.value("tolerance", 1e-9);
    scenario.solver.max_iterations = solver.value("max_iterations", 10000);
    scenario.solver.multistarts = solver.value("multistarts", 8);
    scenario.solver.oracle_grid = solver.value("oracle_grid", 60);
  }
  if (root.contains("creators")) {
    for (const json& node : root.at("creators")) {
      CreatorEntry creator;
      creator.id = node.value("id", static_cast<int>(scenario.creators.size()));
      creator.tech = build_tech(node.at("tech"));
      const json& pref = node.at("pref");
      creator.pref =
          Preference(pref.at("phi"), pref.value("discount_rate", 0.0));
      creator.budget = from_cents(node.at("budget_cents").get<int64_t>());
      if (node.contains("temporal"))
        creator.temporal = build_temporal(node.at("temporal"));
      scenario.creators.push_back(std::move(creator));
    }
  }
  if (root.contains("population")) {
    const json& pop = root.at("population");
    PopulationSection section;
    section.spec.count = static_cast<int>(pop.at("count").get<int64_t>());
    section.spec.seed = pop.value("seed", uint64_t{0});
    if (pop.contains("distributions")) {
      const json& dists = pop.at("distributions");
      auto maybe = [&](const char* key, Distribution& target) {
        if (dists.contains(key)) target = build_distribution(dists.at(key));
      };
      maybe("a", section.spec.a);
      maybe("b", section.spec.b);
      maybe("c", section.spec.c);
      maybe("alpha", section.spec.alpha);
      maybe("beta", section.spec.beta);
      maybe("gamma", section.spec.gamma);
      maybe("delta", section.spec.delta);
      maybe("phi", section.spec.phi);
      maybe("budget", section.spec.budget);
    }
    if (pop.contains("trend")) {
      const json& trend = pop.at("trend");
      ParameterTrend t;
      t.a = trend.value("a", 0.0);
      t.b = trend.value("b", 0.0);
      t.c = trend.value("c", 0.0);
      t.alpha = trend.value("alpha", 0.0);
      t.beta = trend.value("beta", 0.0);
      t.gamma = trend.value("gamma", 0.0);
      t.delta = trend.value("delta", 0.0);
      section.trend = t;
    }
    scenario.population = std::move(section);
  }
  if (root.contains("regimes")) {
    for (const json& node : root.at("regimes")) {
      NamedRegime named;
      named.name = node.at("name").get<std::string>();
      named.benchmark = node.value("benchmark", false);
      named.regime = build_regime(node, scenario.regimes);
      scenario.regimes.push_back(std::move(named));
    }
  }
  if (root.contains("investment")) {
    const json& node = root.at("investment");
    InvestmentScenario invest;
    if (node.contains("upfront_costs_cents"))
      invest.upfront_costs = build_cents_map(node.at("upfront_costs_cents"));
    if (node.contains("recurring_savings_cents"))
      invest.recurring_savings =
          build_cents_map(node.at("recurring_savings_cents"));
    invest.horizon = node.value("horizon", 1);
    invest.discount_rate = node.value("discount_rate", 0.0);
    scenario.investment = std::move(invest);
  }
  if (root.contains("new_tech"))
    scenario.new_tech = build_tech(root.at("new_tech"));
  if (root.contains("projects")) {
    for (const json& node : root.at("projects")) {
      AccessProject project;
      project.name = node.at("name").get<std::string>();
      project.cost = from_cents(node.at("cost_cents").get<int64_t>());
      project.delta_rho = node.at("delta_rho").get<double>();
      project.duration = node.value("duration", 1);
      scenario.projects.push_back(std::move(project));
    }
  }
  if (root.contains("cba")) {
    const json& node = root.at("cba");
    scenario.cba.discount_rate = node.value("discount_rate", 0.0);
    scenario.cba.horizon = node.value("horizon", 1);
    scenario.cba.residual_inefficiency =
        from_cents(node.value("residual_inefficiency_cents", int64_t{0}));
    scenario.cba.fragmentation_kappa = node.value("fragmentation_kappa", 0.0);
  }
  scenario.baseline_rho = root.value("baseline_rho", 1.0);
  scenario.fragmented = root.value("fragmented", false);
  if (root.contains("kappa_sweep"))
    for (const json& v : root.at("kappa_sweep"))
      scenario.kappa_sweep.push_back(v.get<double>());
  if (root.contains("comparative")) {
    scenario.comparative.t0 = root.at("comparative").value("t0", 0.0);
    scenario.comparative.t1 = root.at("comparative").value("t1", 1.0);
  }
  return scenario;
}

json read_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw ScenarioError(std::string("scenario parse error: ") + err.what());
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot read scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int64_t to_cents(double dollars) {
  return static_cast<int64_t>(std::llround(dollars * 100.0));
}

double from_cents(int64_t cents) { return static_cast<double>(cents) / 100.0; }

std::string format_money(double dollars) {
  int64_t cents = to_cents(std::abs(dollars));
  const int64_t whole = cents / 100;
  const int64_t frac = cents % 100;
  std::string digits = std::to_string(whole);
  std::string grouped;
  int count = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (count > 0 && count % 3 == 0) grouped.push_back(',');
    grouped.push_back(*it);
    ++count;
  }
  std::reverse(grouped.begin(), grouped.end());
  char frac_buf[8];
  std::snprintf(frac_buf, sizeof frac_buf, ".%02" PRId64, frac);
  return (dollars < 0 && cents > 0 ? "-$" : "$") + grouped + frac_buf;
}

Scenario parse_scenario_text(const std::string& text) {
  const json root = read_document(text);
  const auto diags = check_document(root);
  if (!diags.empty())
    throw ScenarioError("invalid scenario at " + diags.front().path + ": " +
                        diags.front().message);
  return build_document(root);
}

Scenario load_scenario(const std::string& path) {
  return parse_scenario_text(slurp(path));
}

std::vector<ScenarioDiagnostic> validate_scenario_text(
    const std::string& text) {
  return check_document(read_document(text));
}

std::vector<ScenarioDiagnostic> validate_scenario_file(
    const std::string& path) {
  return validate_scenario_text(slurp(path));
}

std::string serialize_scenario(const Scenario& scenario) {
  json root;
  root["schema_version"] = scenario.schema_version;
  root["seed"] = scenario.seed;
  root["period_unit"] = scenario.period_unit;
  root["prices"] = {{"wage", scenario.prices.wage},
                    {"capital_rate", scenario.prices.capital_rate},
                    {"composite_price", scenario.prices.composite_price}};
  root["solver"] = {{"tolerance", scenario.solver.tolerance},
                    {"max_iterations", scenario.solver.max_iterations},
                    {"multistarts", scenario.solver.multistarts},
                    {"oracle_grid", scenario.solver.oracle_grid}};

  json creators = json::array();
  for (const auto& creator : scenario.creators) {
    json node;
    node["id"] = creator.id;
    node["tech"] = tech_to_json(creator.tech);
    node["pref"] = {{"phi", creator.pref.phi},
                    {"discount_rate", creator.pref.discount_rate}};
    node["budget_cents"] = to_cents(creator.budget);
    if (creator.temporal) node["temporal"] = temporal_to_json(*creator.temporal);
    creators.push_back(node);
  }
  root["creators"] = creators;

  if (scenario.population) {
    const auto& section = *scenario.population;
    json pop;
    pop["count"] = section.spec.count;
    pop["seed"] = section.spec.seed;
    json dists;
    dists["a"] = distribution_to_json(section.spec.a);
    dists["b"] = distribution_to_json(section.spec.b);
    dists["c"] = distribution_to_json(section.spec.c);
    dists["alpha"] = distribution_to_json(section.spec.alpha);
    dists["beta"] = distribution_to_json(section.spec.beta);
    dists["gamma"] = distribution_to_json(section.spec.gamma);
    dists["delta"] = distribution_to_json(section.spec.delta);
    dists["phi"] = distribution_to_json(section.spec.phi);
    dists["budget"] = distribution_to_json(section.spec.budget);
    pop["distributions"] = dists;
    if (section.trend) {
      pop["trend"] = {{"a", section.trend->a},        {"b", section.trend->b},
                      {"c", section.trend->c},        {"alpha", section.trend->alpha},
                      {"beta", section.trend->beta},  {"gamma", section.trend->gamma},
                      {"delta", section.trend->delta}};
    }
    root["population"] = pop;
  }

  json regimes = json::array();
  for (const auto& named : scenario.regimes) {
    json node = regime_to_json(named.regime);
    json ordered;
    ordered["name"] = named.name;
    ordered["benchmark"] = named.benchmark;
    for (const auto& [key, value] : node.items()) ordered[key] = value;
    regimes.push_back(ordered);
  }
  root["regimes"] = regimes;

  if (scenario.investment) {
    json node;
    node["upfront_costs_cents"] =
        cents_map_to_json(scenario.investment->upfront_costs);
    node["recurring_savings_cents"] =
        cents_map_to_json(scenario.investment->recurring_savings);
    node["horizon"] = scenario.investment->horizon;
    node["discount_rate"] = scenario.investment->discount_rate;
    root["investment"] = node;
  }
  if (scenario.new_tech) root["new_tech"] = tech_to_json(*scenario.new_tech);

  if (!scenario.projects.empty()) {
    json projects = json::array();
    for (const auto& project : scenario.projects) {
      json node;
      node["name"] = project.name;
      node["cost_cents"] = to_cents(project.cost);
      node["delta_rho"] = project.delta_rho;
      node["duration"] = project.duration;
      projects.push_back(node);
    }
    root["projects"] = projects;
  }

  root["cba"] = {
      {"discount_rate", scenario.cba.discount_rate},
      {"horizon", scenario.cba.horizon},
      {"residual_inefficiency_cents",
       to_cents(scenario.cba.residual_inefficiency)},
      {"fragmentation_kappa", scenario.cba.fragmentation_kappa}};
  root["baseline_rho"] = scenario.baseline_rho;
  root["fragmented"] = scenario.fragmented;
  root["kappa_sweep"] = scenario.kappa_sweep;
  root["comparative"] = {{"t0", scenario.comparative.t0},
                         {"t1", scenario.comparative.t1}};
  return root.dump(2);
}

uint64_t scenario_hash(const Scenario& scenario) {
  const std::string canonical = serialize_scenario(scenario);
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char byte : canonical) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  hash ^= scenario.seed + 0x9E3779B97F4A7C15ULL;
  return hash;
}

}  // namespace mobility
