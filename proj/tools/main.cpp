// Command-line front end: scenario ingestion, command dispatch, and
// report emission (JSON / CSV machine output, aligned text for humans).

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mobility/accessibility.hpp"
#include "mobility/model.hpp"
#include "mobility/policy.hpp"
#include "mobility/population.hpp"
#include "mobility/scenario.hpp"
#include "mobility/solver.hpp"
#include "mobility/temporal.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace mobility;

constexpr const char* kToolVersion = "1.0.0";

// Exit codes fixed by the external contract.
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitInfeasible = 3;

struct Flags {
  std::string scenario_path;
  std::string out_path;
  std::string format = "text";
  std::optional<uint64_t> seed;
  std::optional<double> tolerance;
  int parallel = 1;
};

// Round to 9 significant digits so machine output has one fixed numeric
// formatting regardless of how a value was computed.
double sig9(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return std::strtod(buf, nullptr);
}

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::CornerSolution: return "corner";
    case SolveStatus::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

const char* verdict_name(ParetoVerdict verdict) {
  switch (verdict) {
    case ParetoVerdict::FirstDominates: return "t0_dominates";
    case ParetoVerdict::SecondDominates: return "t1_dominates";
    case ParetoVerdict::Equivalent: return "equivalent";
    case ParetoVerdict::Incomparable: return "incomparable";
  }
  return "unknown";
}

std::string hash_hex(uint64_t hash) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

json report_meta(const std::string& command, const Scenario& scenario) {
  json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["tool_version"] = kToolVersion;
  meta["command"] = command;
  meta["seed"] = scenario.seed;
  meta["config_hash"] = hash_hex(scenario_hash(scenario));
  return meta;
}

json allocation_to_json(const Allocation& alloc) {
  json out;
  out["joint_labor"] = sig9(alloc.bundle.joint_labor);
  out["joint_capital"] = sig9(alloc.bundle.joint_capital);
  out["solo_labor"] = sig9(alloc.bundle.solo_labor);
  out["solo_capital"] = sig9(alloc.bundle.solo_capital);
  out["other_goods"] = sig9(alloc.other_goods);
  out["utility"] = sig9(alloc.utility_value);
  out["mobility_spend_cents"] = to_cents(alloc.split.mobility);
  out["other_spend_cents"] = to_cents(alloc.split.other);
  out["foc_residual"] = sig9(alloc.foc_residual_norm);
  out["status"] = status_name(alloc.status);
  return out;
}

// ---------------------------------------------------------------------
// Aligned-column text tables

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void print(std::ostream& out) const {
    std::vector<size_t> width(header.size());
    for (size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
      for (size_t c = 0; c < row.size(); ++c)
        width[c] = std::max(width[c], row[c].size());
    auto emit = [&](const std::vector<std::string>& row) {
      for (size_t c = 0; c < row.size(); ++c) {
        out << row[c] << std::string(width[c] - row[c].size(), ' ');
        if (c + 1 < row.size()) out << "  ";
      }
      out << "\n";
    };
    emit(header);
    std::vector<std::string> rule;
    for (size_t c = 0; c < header.size(); ++c)
      rule.push_back(std::string(width[c], '-'));
    emit(rule);
    for (const auto& row : rows) emit(row);
  }
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  return out + "\"";
}

std::string table_to_csv(const Table& table) {
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      out << csv_escape(row[c]);
    }
    out << "\n";
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return out.str();
}

// Machine output goes to --out when given, else stdout; the human table
// always prints to stdout unless it *is* the requested output.
void emit_report(const Flags& flags, const json& report, const Table& table,
                 const std::string& csv) {
  std::string machine;
  if (flags.format == "json")
    machine = report.dump(2) + "\n";
  else if (flags.format == "csv")
    machine = csv;

  if (flags.format == "text") {
    if (!flags.out_path.empty()) {
      std::ofstream out(flags.out_path, std::ios::binary);
      table.print(out);
    } else {
      table.print(std::cout);
    }
    return;
  }
  if (!flags.out_path.empty()) {
    std::ofstream out(flags.out_path, std::ios::binary);
    out << machine;
    table.print(std::cout);
  } else {
    std::cout << machine;
  }
}

// Deterministic strided parallel loop: worker w handles indices w, w+P,
// w+2P, ... and writes into preallocated slots, so results are
// independent of the worker count.
template <typename Fn>
void parallel_for(int n, int parallelism, Fn fn) {
  if (parallelism <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(parallelism, n);
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [=]() {
      for (int i = w; i < n; i += workers) fn(i);
    }));
  }
  for (auto& f : futures) f.get();
}

Scenario load_with_overrides(const Flags& flags) {
  Scenario scenario = load_scenario(flags.scenario_path);
  if (flags.seed) {
    scenario.seed = *flags.seed;
    if (scenario.population) scenario.population->spec.seed = *flags.seed;
  }
  if (flags.tolerance) scenario.solver.tolerance = *flags.tolerance;
  return scenario;
}

int worst_status_exit(const std::vector<SolveStatus>& statuses) {
  for (SolveStatus status : statuses)
    if (status == SolveStatus::MaxIterations) return kExitNoConvergence;
  return kExitOk;
}

// ---------------------------------------------------------------------
// solve

int run_solve(const Flags& flags) {
  Scenario scenario = load_with_overrides(flags);
  if (scenario.creators.empty())
    throw ScenarioError("invalid scenario at /creators: command `solve` needs at least one creator");

  json report;
  report["meta"] = report_meta("solve", scenario);
  json rows = json::array();
  Table table;
  table.header = {"creator", "L",       "K",      "l",      "k",
                  "A",       "utility", "m_spend", "status"};
  std::vector<SolveStatus> statuses;

  for (const auto& creator : scenario.creators) {
    Allocation alloc = maximize_utility(creator.tech, creator.pref,
                                        scenario.prices, creator.budget,
                                        scenario.solver);
    statuses.push_back(alloc.status);
    json row;
    row["id"] = creator.id;
    row["budget_cents"] = to_cents(creator.budget);
    row["allocation"] = allocation_to_json(alloc);
    rows.push_back(row);
    table.rows.push_back({std::to_string(creator.id),
                          fmt(alloc.bundle.joint_labor),
                          fmt(alloc.bundle.joint_capital),
                          fmt(alloc.bundle.solo_labor),
                          fmt(alloc.bundle.solo_capital),
                          fmt(alloc.other_goods), fmt(alloc.utility_value),
                          format_money(alloc.split.mobility),
                          status_name(alloc.status)});
  }
  report["creators"] = rows;

  Table csv_table;
  csv_table.header = {"id",           "joint_labor", "joint_capital",
                      "solo_labor",   "solo_capital", "other_goods",
                      "utility",      "mobility_spend_cents",
                      "other_spend_cents", "status"};
  for (size_t i = 0; i < scenario.creators.size(); ++i) {
    const json& alloc = rows[i]["allocation"];
    csv_table.rows.push_back(
        {std::to_string(scenario.creators[i].id),
         fmt(alloc["joint_labor"].get<double>()),
         fmt(alloc["joint_capital"].get<double>()),
         fmt(alloc["solo_labor"].get<double>()),
         fmt(alloc["solo_capital"].get<double>()),
         fmt(alloc["other_goods"].get<double>()),
         fmt(alloc["utility"].get<double>()),
         std::to_string(alloc["mobility_spend_cents"].get<int64_t>()),
         std::to_string(alloc["other_spend_cents"].get<int64_t>()),
         alloc["status"].get<std::string>()});
  }

  emit_report(flags, report, table, table_to_csv(csv_table));
  return worst_status_exit(statuses);
}

// ---------------------------------------------------------------------
// policy-compare

int run_policy_compare(const Flags& flags) {
  Scenario scenario = load_with_overrides(flags);
  if (scenario.creators.empty())
    throw ScenarioError("invalid scenario at /creators: command `policy-compare` needs at least one creator");
  if (scenario.regimes.empty())
    throw ScenarioError("invalid scenario at /regimes: command `policy-compare` needs at least one regime");

  size_t benchmark_index = 0;
  for (size_t i = 0; i < scenario.regimes.size(); ++i)
    if (scenario.regimes[i].benchmark) {
      benchmark_index = i;
      break;
    }

  json report;
  report["meta"] = report_meta("policy-compare", scenario);
  report["benchmark"] = scenario.regimes[benchmark_index].name;
  json rows = json::array();
  Table table;
  table.header = {"creator", "regime", "utility", "devices", "deadweight"};
  std::vector<SolveStatus> statuses;

  for (const auto& creator : scenario.creators) {
    PolicyOutcome benchmark = solve_under_regime(
        creator.tech, creator.pref, scenario.prices,
        scenario.regimes[benchmark_index].regime, scenario.solver);
    for (size_t i = 0; i < scenario.regimes.size(); ++i) {
      const NamedRegime& named = scenario.regimes[i];
      PolicyOutcome outcome =
          i == benchmark_index
              ? benchmark
              : solve_under_regime(creator.tech, creator.pref, scenario.prices,
                                   named.regime, scenario.solver);
      statuses.push_back(outcome.allocation.status);
      double loss = 0.0;
      if (i != benchmark_index)
        loss = deadweight_loss(outcome, benchmark, creator.tech, creator.pref,
                               scenario.prices, scenario.solver);
      std::string devices;
      for (const auto& device : outcome.devices_chosen) {
        if (!devices.empty()) devices += "+";
        devices += device.name;
      }
      json row;
      row["creator"] = creator.id;
      row["regime"] = named.name;
      row["benchmark"] = i == benchmark_index;
      row["allocation"] = allocation_to_json(outcome.allocation);
      json chosen = json::array();
      for (const auto& device : outcome.devices_chosen)
        chosen.push_back(device.name);
      row["devices_chosen"] = chosen;
      row["deadweight_loss_cents"] = to_cents(loss);
      rows.push_back(row);
      table.rows.push_back({std::to_string(creator.id), named.name,
                            fmt(outcome.allocation.utility_value),
                            devices.empty() ? "-" : devices,
                            format_money(loss)});
    }
  }
  report["outcomes"] = rows;

  Table csv_table;
  csv_table.header = {"creator", "regime", "utility", "devices",
                      "deadweight_loss_cents"};
  for (const json& row : rows) {
    std::string devices;
    for (const json& name : row["devices_chosen"]) {
      if (!devices.empty()) devices += "+";
      devices += name.get<std::string>();
    }
    csv_table.rows.push_back(
        {std::to_string(row["creator"].get<int>()),
         row["regime"].get<std::string>(),
         fmt(row["allocation"]["utility"].get<double>()), devices,
         std::to_string(row["deadweight_loss_cents"].get<int64_t>())});
  }

  emit_report(flags, report, table, table_to_csv(csv_table));
  return worst_status_exit(statuses);
}

// ---------------------------------------------------------------------
// invest

int run_invest(const Flags& flags) {
  Scenario scenario = load_with_overrides(flags);
  if (!scenario.investment)
    throw ScenarioError("invalid scenario at /investment: command `invest` needs an investment section");

  const InvestmentScenario& invest = *scenario.investment;
  json report;
  report["meta"] = report_meta("invest", scenario);
  report["npv_cents"] = to_cents(npv(invest));
  const auto payback = payback_period(invest);
  report["payback_period"] = payback ? json(*payback) : json(nullptr);

  Table table;
  table.header = {"metric", "value"};
  table.rows.push_back({"npv", format_money(npv(invest))});
  table.rows.push_back(
      {"payback", payback ? std::to_string(*payback) + " " +
                                scenario.period_unit + "(s)"
                          : "never"});
  std::vector<SolveStatus> statuses;

  // Function-type classification when a temporal technology is present.
  if (!scenario.creators.empty() && scenario.creators.front().temporal) {
    const auto& creator = scenario.creators.front();
    Allocation base = maximize_utility(creator.tech, creator.pref,
                                       scenario.prices, creator.budget,
                                       scenario.solver);
    statuses.push_back(base.status);
    std::vector<double> grid;
    for (int t = 0; t <= invest.horizon; ++t) grid.push_back(t);
    std::string label;
    try {
      label = classify(*creator.temporal, base.bundle, grid) ==
                      MobilityFunctionType::Type1
                  ? "type1"
                  : "type2";
    } catch (const MixedSignError&) {
      label = "mixed";
    }
    report["function_type"] = label;
    table.rows.push_back({"function_type", label});
  }

  // Independence premium against the alternative technology.
  if (scenario.new_tech && !scenario.creators.empty()) {
    const auto& creator = scenario.creators.front();
    PolicyRegime fungible = FungibleRegime{creator.budget};
    PolicyOutcome old_outcome = solve_under_regime(
        creator.tech, creator.pref, scenario.prices, fungible,
        scenario.solver);
    PolicyOutcome new_outcome = solve_under_regime(
        *scenario.new_tech, creator.pref, scenario.prices, fungible,
        scenario.solver);
    statuses.push_back(old_outcome.allocation.status);
    statuses.push_back(new_outcome.allocation.status);
    const double premium = independence_premium(
        old_outcome, new_outcome, *scenario.new_tech, creator.pref,
        scenario.prices, scenario.solver);
    report["independence_premium_cents"] = to_cents(premium);
    table.rows.push_back({"independence_premium", format_money(premium)});
  }

  emit_report(flags, report, table, table_to_csv(table));
  return worst_status_exit(statuses);
}

// ---------------------------------------------------------------------
// access-cba

// A deliberately naive status-quo allocation: the budget is spread evenly
// over the active inputs plus the composite good. Utility-dominated by
// the optimum, which is what the information-cost filter needs.
Allocation naive_allocation(const MobilityTechnology& tech,
                            const Preference& pref, const PriceSystem& prices,
                            double budget) {
  int slots = 1;  // composite
  if (tech.coefficients.a > 0.0) slots += 2;
  if (tech.coefficients.b > 0.0) slots += 1;
  if (tech.coefficients.c > 0.0) slots += 1;
  const double spend = budget / slots;
  Allocation alloc;
  alloc.bundle = InputBundle(
      tech.coefficients.a > 0.0 ? spend / prices.wage : 0.0,
      tech.coefficients.a > 0.0 ? spend / prices.capital_rate : 0.0,
      tech.coefficients.b > 0.0 ? spend / prices.wage : 0.0,
      tech.coefficients.c > 0.0 ? spend / prices.capital_rate : 0.0);
  alloc.other_goods = spend / prices.composite_price;
  alloc.utility_value = utility(evaluate_mobility(tech, alloc.bundle),
                                alloc.other_goods, pref.phi);
  alloc.split = endowment_split(alloc.bundle, alloc.other_goods, prices);
  alloc.status = SolveStatus::Converged;
  return alloc;
}

int run_access_cba(const Flags& flags) {
  Scenario scenario = load_with_overrides(flags);
  if (scenario.creators.empty())
    throw ScenarioError("invalid scenario at /creators: command `access-cba` needs at least one creator");
  if (scenario.projects.empty())
    throw ScenarioError("invalid scenario at /projects: command `access-cba` needs at least one project");

  AccessPopulation population;
  population.baseline_rho = scenario.baseline_rho;
  for (const auto& creator : scenario.creators)
    population.creators.push_back(
        {creator.tech, creator.pref, scenario.prices, creator.budget});

  json report;
  report["meta"] = report_meta("access-cba", scenario);
  Table table;
  table.header = {"item", "value"};

  const KaldorHicksResult kh =
      kaldor_hicks_test(scenario.projects, population, scenario.cba,
                        scenario.fragmented, scenario.solver);
  report["kaldor_hicks"] = {{"pass", kh.pass},
                            {"margin_cents", to_cents(kh.margin)},
                            {"pv_benefit_cents", to_cents(kh.pv_benefit)},
                            {"total_cost_cents", to_cents(kh.total_cost)}};
  table.rows.push_back({"kaldor_hicks", kh.pass ? "pass" : "fail"});
  table.rows.push_back({"pv_benefit", format_money(kh.pv_benefit)});
  table.rows.push_back({"total_cost", format_money(kh.total_cost)});
  table.rows.push_back({"margin", format_money(kh.margin)});

  const auto accepted = marginal_project_rule(scenario.projects, population,
                                              scenario.cba, scenario.solver);
  json accepted_names = json::array();
  std::string accepted_list;
  for (const auto& project : accepted) {
    accepted_names.push_back(project.name);
    if (!accepted_list.empty()) accepted_list += ", ";
    accepted_list += project.name;
  }
  report["accepted_projects"] = accepted_names;
  table.rows.push_back(
      {"accepted_projects", accepted_list.empty() ? "-" : accepted_list});

  double rho_b = scenario.baseline_rho;
  for (const auto& project : scenario.projects) rho_b += project.delta_rho;
  rho_b = std::min(rho_b, 1.0);
  std::vector<double> base_utilities;
  for (const auto& creator : population.creators) {
    Allocation alloc =
        maximize_utility(creator.tech, creator.pref, creator.prices,
                         creator.budget, scenario.solver);
    base_utilities.push_back(alloc.utility_value);
  }
  const double benefit =
      social_benefit(base_utilities, scenario.baseline_rho, rho_b);
  report["social_benefit"] = sig9(benefit);
  report["rho_after_all_projects"] = sig9(rho_b);
  table.rows.push_back({"social_benefit", fmt(benefit)});
  table.rows.push_back({"rho_after_all_projects", fmt(rho_b)});

  if (!scenario.kappa_sweep.empty()) {
    std::vector<std::pair<Allocation, Allocation>> pairs;
    for (const auto& creator : population.creators) {
      Allocation candidate =
          maximize_utility(creator.tech, creator.pref, creator.prices,
                           creator.budget, scenario.solver);
      pairs.emplace_back(naive_allocation(creator.tech, creator.pref,
                                          creator.prices, creator.budget),
                         candidate);
    }
    json sweep = json::array();
    for (double kappa : scenario.kappa_sweep) {
      const double r = measured_residual_inefficiency(pairs, kappa);
      sweep.push_back({{"kappa", sig9(kappa)}, {"residual", sig9(r)}});
      table.rows.push_back(
          {"residual@kappa=" + fmt(kappa), fmt(r)});
    }
    report["kappa_sweep"] = sweep;
  }

  emit_report(flags, report, table, table_to_csv(table));
  return kExitOk;
}

// ---------------------------------------------------------------------
// population-run

int run_population(const Flags& flags) {
  Scenario scenario = load_with_overrides(flags);
  if (!scenario.population)
    throw ScenarioError("invalid scenario at /population: command `population-run` needs a population section");

  const auto specs = generate_population(scenario.population->spec);
  const int n = static_cast<int>(specs.size());
  std::vector<PolicyOutcome> outcomes(n);
  parallel_for(n, flags.parallel, [&](int i) {
    const CreatorSpec& spec = specs[i];
    outcomes[i] = solve_under_regime(spec.tech, spec.pref, scenario.prices,
                                     spec.regime, scenario.solver);
  });

  json report;
  report["meta"] = report_meta("population-run", scenario);
  const AggregateReport agg = aggregate_report(outcomes);
  report["aggregate"] = {
      {"count", agg.count},
      {"mean_utility", sig9(agg.mean_utility)},
      {"median_utility", sig9(agg.median_utility)},
      {"total_mobility_expenditure_cents",
       to_cents(agg.total_mobility_expenditure)},
      {"total_other_expenditure_cents", to_cents(agg.total_other_expenditure)},
      {"converged", agg.converged},
      {"corner", agg.corner},
      {"max_iterations", agg.max_iterations}};

  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    json row;
    row["id"] = specs[i].id;
    row["budget_cents"] = to_cents(specs[i].budget);
    row["phi"] = sig9(specs[i].pref.phi);
    row["allocation"] = allocation_to_json(outcomes[i].allocation);
    rows.push_back(row);
  }
  report["creators"] = rows;

  std::vector<SolveStatus> statuses;
  for (const auto& outcome : outcomes)
    statuses.push_back(outcome.allocation.status);

  // Comparative statics across the scenario window when a parameter
  // trend is declared.
  if (scenario.population->trend) {
    const ParameterTrend& trend = *scenario.population->trend;
    const double t1 = std::max(scenario.comparative.t1, 1.0);
    auto drift = [&](double base, double slope) {
      return TimePath({{0.0, base}, {t1, base + slope * t1}});
    };
    std::vector<TemporalCreator> temporal;
    temporal.reserve(specs.size());
    for (const auto& spec : specs) {
      TemporalCreator creator{
          spec.id,
          TemporalTechnology{drift(spec.tech.coefficients.a, trend.a),
                             drift(spec.tech.coefficients.b, trend.b),
                             drift(spec.tech.coefficients.c, trend.c),
                             drift(spec.tech.organic.alpha, trend.alpha),
                             drift(spec.tech.organic.beta, trend.beta),
                             drift(spec.tech.organic.gamma, trend.gamma),
                             drift(spec.tech.organic.delta, trend.delta)},
          spec.pref, scenario.prices, spec.budget};
      temporal.push_back(std::move(creator));
    }
    const ParetoReport pareto =
        comparative_statics(temporal, scenario.comparative.t0,
                            scenario.comparative.t1, scenario.solver,
                            flags.parallel);
    json deltas = json::array();
    for (const auto& entry : pareto.per_creator)
      deltas.push_back({{"id", entry.creator_id},
                        {"delta_utility", sig9(entry.delta_utility)},
                        {"failed", entry.failed}});
    report["comparative"] = {{"t0", sig9(scenario.comparative.t0)},
                             {"t1", sig9(scenario.comparative.t1)},
                             {"verdict", verdict_name(pareto.verdict)},
                             {"per_creator", deltas}};
  }

  Table table;
  table.header = {"metric", "value"};
  table.rows.push_back({"creators", std::to_string(agg.count)});
  table.rows.push_back({"mean_utility", fmt(agg.mean_utility)});
  table.rows.push_back({"median_utility", fmt(agg.median_utility)});
  table.rows.push_back(
      {"mobility_spend", format_money(agg.total_mobility_expenditure)});
  table.rows.push_back(
      {"other_spend", format_money(agg.total_other_expenditure)});
  table.rows.push_back({"converged", std::to_string(agg.converged)});
  if (report.contains("comparative"))
    table.rows.push_back(
        {"comparative_verdict",
         report["comparative"]["verdict"].get<std::string>()});

  Table csv_table;
  csv_table.header = {"id", "budget_cents", "phi", "utility",
                      "mobility_spend_cents", "other_spend_cents", "status"};
  for (int i = 0; i < n; ++i) {
    const json& alloc = rows[i]["allocation"];
    csv_table.rows.push_back(
        {std::to_string(specs[i].id),
         std::to_string(rows[i]["budget_cents"].get<int64_t>()),
         fmt(rows[i]["phi"].get<double>()),
         fmt(alloc["utility"].get<double>()),
         std::to_string(alloc["mobility_spend_cents"].get<int64_t>()),
         std::to_string(alloc["other_spend_cents"].get<int64_t>()),
         alloc["status"].get<std::string>()});
  }

  emit_report(flags, report, table, table_to_csv(csv_table));
  return worst_status_exit(statuses);
}

// ---------------------------------------------------------------------
// validate

int run_validate(const Flags& flags) {
  const auto diagnostics = validate_scenario_file(flags.scenario_path);
  if (diagnostics.empty()) {
    std::cout << "scenario is valid\n";
    return kExitOk;
  }
  for (const auto& diag : diagnostics)
    std::cout << diag.path << ": " << diag.message << "\n";
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mobility creation model: scenario solver and report generator"};
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--scenario", flags.scenario_path, "scenario JSON path")
      ->required();
  app.add_option("--out", flags.out_path, "write machine output to this file");
  app.add_option("--format", flags.format, "json|csv|text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  uint64_t seed_value = 0;
  auto* seed_opt =
      app.add_option("--seed", seed_value, "override the scenario seed");
  double tolerance_value = 0.0;
  auto* tol_opt = app.add_option("--tolerance", tolerance_value,
                                 "override the solver tolerance");
  app.add_option("--parallel", flags.parallel,
                 "worker threads (results are independent of this)")
      ->check(CLI::PositiveNumber);
  app.fallthrough();

  auto* cmd_solve = app.add_subcommand("solve", "single-creator optimum");
  auto* cmd_policy =
      app.add_subcommand("policy-compare", "regimes with deadweight losses");
  auto* cmd_invest =
      app.add_subcommand("invest", "npv, payback, independence premium");
  auto* cmd_access = app.add_subcommand(
      "access-cba", "Kaldor-Hicks verdicts and the marginal project rule");
  auto* cmd_population = app.add_subcommand(
      "population-run", "synthetic population with comparative statics");
  auto* cmd_validate =
      app.add_subcommand("validate", "check a scenario file, print diagnostics");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count()) flags.seed = seed_value;
  if (tol_opt->count()) flags.tolerance = tolerance_value;

  try {
    if (cmd_validate->parsed()) return run_validate(flags);
    if (cmd_solve->parsed()) return run_solve(flags);
    if (cmd_policy->parsed()) return run_policy_compare(flags);
    if (cmd_invest->parsed()) return run_invest(flags);
    if (cmd_access->parsed()) return run_access_cba(flags);
    if (cmd_population->parsed()) return run_population(flags);
  } catch (const EmptyFeasibleSet& err) {
    std::cerr << "infeasible: " << err.what() << "\n";
    return kExitInfeasible;
  } catch (const InfeasibleScenario& err) {
    std::cerr << "infeasible: " << err.what() << "\n";
    return kExitInfeasible;
  } catch (const ScenarioError& err) {
    std::cerr << err.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
