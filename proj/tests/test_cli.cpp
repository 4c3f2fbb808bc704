#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string command =
      std::string(CLI_BINARY_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  std::array<char, 4096> buffer;
  size_t got;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.output.append(buffer.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string scenario(const std::string& name) {
  return std::string(SCENARIO_DIR) + "/" + name;
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/mobility_cli_test_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("solve prints the closed-form optimum and exits cleanly") {
  const RunResult result =
      run("solve --scenario " + scenario("closed_form.json"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("25") != std::string::npos);
  CHECK(result.output.find("50") != std::string::npos);
  CHECK(result.output.find("converged") != std::string::npos);
}

TEST_CASE("json output carries provenance metadata") {
  const std::string out = temp_path("solve.json");
  const RunResult result =
      run("solve --scenario " + scenario("closed_form.json") +
          " --format json --out " + out);
  CHECK(result.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.at("meta").at("schema_version").get<int>() == 1);
  CHECK(doc.at("meta").contains("tool_version"));
  CHECK(doc.at("meta").contains("config_hash"));
  CHECK(doc.at("meta").at("seed").is_number());
  REQUIRE(doc.at("creators").is_array());
  const auto& creator = doc.at("creators").at(0);
  CHECK(creator.at("allocation").at("joint_labor").get<double>() ==
        doctest::Approx(25.0).epsilon(1e-6));
  CHECK(creator.at("allocation").at("other_goods").get<double>() ==
        doctest::Approx(50.0).epsilon(1e-6));
  std::remove(out.c_str());
}

TEST_CASE("csv output is a parseable table") {
  const std::string out = temp_path("solve.csv");
  const RunResult result =
      run("solve --scenario " + scenario("closed_form.json") +
          " --format csv --out " + out);
  CHECK(result.exit_code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.find("id,joint_labor") != std::string::npos);
  CHECK(csv.find('\n') != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("policy comparison reports the forced-device loss") {
  const RunResult result =
      run("policy-compare --scenario " + scenario("turner_lift.json"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("turner-allowed") != std::string::npos);
  CHECK(result.output.find("turner-excluded") != std::string::npos);
  CHECK(result.output.find("$1,000.00") != std::string::npos);
}

TEST_CASE("seed override changes the population draw but not validity") {
  const std::string out_a = temp_path("pop_a.json");
  const std::string out_b = temp_path("pop_b.json");
  const RunResult first =
      run("population-run --scenario " + scenario("population_run.json") +
          " --format json --out " + out_a);
  const RunResult second =
      run("population-run --scenario " + scenario("population_run.json") +
          " --seed 4242 --format json --out " + out_b);
  CHECK(first.exit_code == 0);
  CHECK(second.exit_code == 0);
  const nlohmann::json a = nlohmann::json::parse(slurp(out_a));
  const nlohmann::json b = nlohmann::json::parse(slurp(out_b));
  CHECK(a.at("meta").at("seed") != b.at("meta").at("seed"));
  CHECK(a.at("aggregate").at("mean_utility") !=
        b.at("aggregate").at("mean_utility"));
  std::remove(out_a.c_str());
  std::remove(out_b.c_str());
}

TEST_CASE("validate reports diagnostics and exits 1 on a bad scenario") {
  const std::string good =
      run("validate --scenario " + scenario("access_cba.json")).output;
  CHECK(run("validate --scenario " + scenario("access_cba.json")).exit_code ==
        0);

  const std::string bad = temp_path("bad.json");
  {
    std::ofstream out(bad);
    out << R"({"schema_version": 1, "seed": 1, "creators": [
      {"id": 0,
       "tech": {"a": 1.0, "b": 0.0, "c": 0.0,
                 "alpha": 0.7, "beta": 0.6, "gamma": 1.0, "delta": 1.0},
       "pref": {"phi": 0.5}, "budget_cents": 100}]})";
  }
  const RunResult result = run("validate --scenario " + bad);
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("/creators/0/tech") != std::string::npos);
  std::remove(bad.c_str());
}

TEST_CASE("a malformed scenario file exits 1 from any subcommand") {
  const std::string bad = temp_path("garbage.json");
  {
    std::ofstream out(bad);
    out << "{ this is not json";
  }
  CHECK(run("solve --scenario " + bad).exit_code == 1);
  std::remove(bad.c_str());
  CHECK(run("solve --scenario /nonexistent/file.json").exit_code == 1);
}

TEST_CASE("an unsatisfiable device requirement exits 3") {
  const std::string infeasible = temp_path("infeasible.json");
  {
    std::ofstream out(infeasible);
    out << R"({
      "schema_version": 1,
      "seed": 1,
      "prices": {"wage": 25.0, "capital_rate": 1.0, "composite_price": 1.0},
      "creators": [
        {"id": 0,
         "tech": {"a": 1.0, "b": 0.0, "c": 0.0,
                   "alpha": 0.4, "beta": 0.4, "gamma": 1.0, "delta": 1.0},
         "pref": {"phi": 0.5}, "budget_cents": 1000000}],
      "regimes": [
        {"name": "starved", "kind": "approved_list", "benchmark": true,
         "capital_budget_cents": 100, "rest_budget_cents": 100,
         "catalog": [
           {"name": "lift", "price_cents": 200000,
            "capital_services": 40.0, "target": "joint", "required": true}
         ]}
      ]
    })";
  }
  CHECK(run("policy-compare --scenario " + infeasible).exit_code == 3);
  std::remove(infeasible.c_str());
}
