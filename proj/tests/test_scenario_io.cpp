#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "mvresp/error.hpp"
#include "mvresp/oracle.hpp"
#include "support.hpp"

using namespace mvresp;
using nlohmann::json;

namespace {

json toggle_doc() {
  return json::parse(R"({
    "name": "toggle",
    "agents": ["A"], "propositions": ["p"], "actions": ["on", "off"],
    "initial": [], "horizon": 2,
    "transitions": [
      {"from": "*", "joint": {"A": "on"}, "add": ["p"]},
      {"from": "*", "joint": {"A": "off"}, "remove": ["p"]}
    ],
    "values": [[{"name": "lit", "formula": "F p"}]],
    "strategies": {"always": {"agent": "A", "choices": {"*": "on"}}}
  })");
}

std::string load_error(const json& doc) {
  try {
    load_document(doc);
  } catch (const scenario_error& e) {
    return e.what();
  }
  return "";
}

const std::vector<std::string> all_fixtures{"table1a", "table1b", "table1c", "table2", "table3", "table4",
                                            "table5", "table6", "regret_explanation", "shopping_centre"};

} // namespace

TEST_CASE("canonical form reloads to the same system") {
  for (const auto& name : all_fixtures) {
    CAPTURE(name);
    const auto s = test::fixture(name);
    const auto doc = scenario_to_json(s);
    const auto back = load_document(doc);
    CHECK(back.system == s.system);
    CHECK(back.name == s.name);
    REQUIRE(back.strategies.size() == s.strategies.size());
    for (std::size_t k = 0; k < s.strategies.size(); ++k) {
      CHECK(back.strategies[k].name == s.strategies[k].name);
      CHECK(back.strategies[k].tree == s.strategies[k].tree);
    }
    CHECK(scenario_to_json(back) == doc);
  }
}

TEST_CASE("random systems round trip") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const mas d = oracle::random_mas(seed);
    CHECK(load_document(scenario_to_json(d)).system == d);
  }
}

TEST_CASE("matrix compilation") {
  for (const auto& name : {"table1b", "table2", "table4", "table5", "table6"}) {
    CAPTURE(name);
    const json doc = json::parse(std::ifstream(test::fixture_path(name)));
    const matrix_doc m = parse_matrix(doc);
    const auto s = compile_matrix(m);
    CHECK(s.system.horizon == 1);
    CHECK(s.system.system.agents == std::vector<std::string>{m.row_agent, m.column_agent});
    const auto rows = m.available_rows.value_or(m.rows);
    const auto cols = m.available_columns.value_or(m.columns);
    CHECK(strategy_count(s.system, 0) == rows.size());
    CHECK(strategy_count(s.system, 1) == cols.size());
    for (const auto& r : rows) {
      for (const auto& c : cols) {
        const joint_strategy js({*resolve_strategy(s, 0, r), *resolve_strategy(s, 1, c)});
        const auto ri = std::find(m.rows.begin(), m.rows.end(), r) - m.rows.begin();
        const auto ci = std::find(m.columns.begin(), m.columns.end(), c) - m.columns.begin();
        outcome_set expected(s.system.values.size());
        for (value_id v = 0; v < s.system.values.size(); ++v) {
          const auto& cell = m.cells[ri][ci];
          const bool sat = std::find(cell.begin(), cell.end(), s.system.values.at(v).name) != cell.end();
          expected.set(v, sat ? polarity::satisfied : polarity::violated);
        }
        CHECK(satset(play(js, s.system), s.system.values) == expected);
      }
    }
  }
}

TEST_CASE("a single empty cell leaves nothing to answer for") {
  const auto s = load_document_text(R"({
    "type": "matrix", "row_agent": "A", "column_agent": "B",
    "rows": ["only"], "columns": ["c"], "cells": [[[]]], "values": [["w1"]]
  })");
  const agent_analysis a(s.system, 0);
  CHECK(a.strategy_count() == 1);
  CHECK(anticipate(a, 0, responsibility_kind::passive).worst.empty());
  CHECK(recommend(a) == std::vector<std::size_t>{0});
}

TEST_CASE("shopping centre") {
  const auto s = test::fixture("shopping_centre");
  CHECK(s.system.values.size() == 5);
  CHECK(s.system.values.level_count() == 1);
  CHECK(s.system.system.agents == std::vector<std::string>{"Anna", "Ben"});
  CHECK(s.warnings.empty());
  CHECK(s.find_strategy("windows_then_litter") != nullptr);
}

TEST_CASE("add and remove effects") {
  const auto s = load_document(toggle_doc());
  CHECK(successor(s.system.system, {}, {0}) == state{"p"});
  CHECK(successor(s.system.system, {"p"}, {1}) == state{});
  const auto h = play(joint_strategy({s.find_strategy("always")->tree}), s.system);
  CHECK(h.states.back() == state{"p"});
}

TEST_CASE("strategy selectors") {
  const auto s = load_document(toggle_doc());
  CHECK(resolve_strategy(s, 0, "always") == s.find_strategy("always")->tree);
  CHECK(resolve_strategy(s, 0, "#0") == s.find_strategy("always")->tree);
  CHECK(strategy_label(s, *resolve_strategy(s, 0, "#3")) == "#3");
  CHECK_FALSE(resolve_strategy(s, 0, "#4").has_value());
  CHECK_FALSE(resolve_strategy(s, 0, "never").has_value());
}

TEST_CASE("validation errors") {
  auto doc = toggle_doc();
  doc["transitions"].erase(1);
  CHECK(load_error(doc).find("not total") != std::string::npos);

  doc = toggle_doc();
  doc["horizon"] = 0;
  CHECK(load_error(doc).find("horizon") != std::string::npos);

  doc = toggle_doc();
  doc["values"][0][0]["formula"] = "F q";
  CHECK(load_error(doc).find("undeclared proposition 'q'") != std::string::npos);

  doc = toggle_doc();
  doc["transitions"][0]["joint"]["A"] = "jump";
  CHECK(load_error(doc).find("unknown action 'jump'") != std::string::npos);

  doc = toggle_doc();
  doc["strategies"]["always"]["agent"] = "Z";
  CHECK(load_error(doc).find("unknown agent 'Z'") != std::string::npos);

  doc = toggle_doc();
  doc["strategies"]["always"]["choices"] = {{"/", "on"}};
  CHECK(load_error(doc).find("no action at decision point") != std::string::npos);

  doc = toggle_doc();
  doc["transitions"][0]["to"] = json::array();
  CHECK(load_error(doc).find("both") != std::string::npos);

  doc = toggle_doc();
  doc["values"][0][0]["formula"] = "F (p";
  CHECK(load_error(doc).find("value 'lit'") != std::string::npos);

  doc = toggle_doc();
  doc["type"] = "spreadsheet";
  CHECK(load_error(doc).find("unknown document type") != std::string::npos);

  doc = toggle_doc();
  doc.erase("initial");
  CHECK(load_error(doc).find("missing field 'initial'") != std::string::npos);
}

TEST_CASE("matrix errors") {
  auto doc = json::parse(std::ifstream(test::fixture_path("table3")));
  doc["cells"] = json::array();
  doc["rows"] = json::array();
  CHECK(load_error(doc).find("empty matrix") != std::string::npos);

  doc = json::parse(std::ifstream(test::fixture_path("table3")));
  doc["cells"][0].erase(1);
  CHECK(load_error(doc).find("not rectangular") != std::string::npos);

  doc = json::parse(std::ifstream(test::fixture_path("table3")));
  doc["cells"][0][0] = {"w9"};
  CHECK(load_error(doc).find("undeclared value 'w9'") != std::string::npos);

  doc = json::parse(std::ifstream(test::fixture_path("table3")));
  doc["available_rows"] = {"sZ"};
  CHECK(load_error(doc).find("unknown label 'sZ'") != std::string::npos);
}

TEST_CASE("text and file errors") {
  CHECK_THROWS_WITH_AS(load_document_text("{ not json"), doctest::Contains("parse error"), scenario_error);
  CHECK_THROWS_AS(load_document_file("/nonexistent/scenario.json"), scenario_error);
}

TEST_CASE("warnings travel with the scenario") {
  auto doc = toggle_doc();
  doc["values"] = json::parse(R"([[{"name": "lit", "formula": "F p"}, {"name": "dark", "formula": "!F p"}]])");
  const auto s = load_document(doc);
  REQUIRE_FALSE(s.warnings.empty());
  CHECK(s.warnings[0].kind == warning_kind::negation_pair);
}
