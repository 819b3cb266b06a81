#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvresp/consistency.hpp"
#include "mvresp/system.hpp"

namespace mvresp {

struct named_strategy {
  std::string name;
  strategy_tree tree;
};

/// A validated system plus the strategies and diagnostics that came with it.
struct loaded_scenario {
  std::string name;
  mas system;
  std::vector<named_strategy> strategies;
  std::vector<value_warning> warnings;

  const named_strategy* find_strategy(const std::string& name) const;
};

/// Normal-form table: cells list the values satisfied by each pair of labels.
struct matrix_doc {
  std::string name;
  std::string row_agent;
  std::vector<std::string> rows;
  std::optional<std::vector<std::string>> available_rows;
  std::string column_agent;
  std::vector<std::string> columns;
  std::optional<std::vector<std::string>> available_columns;
  std::vector<std::vector<std::vector<std::string>>> cells;
  std::vector<std::vector<std::string>> values;
};

/// Validates a scenario document (`"type": "scenario"` or no type).
loaded_scenario load_scenario(const nlohmann::json& doc);

matrix_doc parse_matrix(const nlohmann::json& doc);

/// One-step system: value j becomes `F p<j>` and the cell of (row r, column c)
/// is the successor of the empty start state under actions (a<r>, a<c>). Rows
/// and columns outside their availability lists are unavailable actions.
loaded_scenario compile_matrix(const matrix_doc& m);

/// Dispatches on `"type"`: "matrix" documents are compiled, others loaded.
loaded_scenario load_document(const nlohmann::json& doc);
loaded_scenario load_document_text(const std::string& text);
loaded_scenario load_document_file(const std::filesystem::path& path);

/// Canonical scenario document: sorted keys, rules and levels in order,
/// strategies spelled out on every decision point.
nlohmann::json scenario_to_json(const loaded_scenario& s);
nlohmann::json scenario_to_json(const mas& d, const std::string& name = "scenario");

/// Resolves "name", "#index" against the agent's named strategies.
std::optional<strategy_tree> resolve_strategy(const loaded_scenario& s, agent_id agent, const std::string& selector);

/// Display name: the first matching named strategy, else "#index".
std::string strategy_label(const loaded_scenario& s, const strategy_tree& t);

} // namespace mvresp
