#include "mvresp/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mvresp/error.hpp"
#include "mvresp/strategy.hpp"

namespace mvresp {

using nlohmann::json;

const named_strategy* loaded_scenario::find_strategy(const std::string& name) const {
  for (const auto& s : strategies) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw scenario_error(std::string("missing field '") + key + "'");
  }
  return doc.at(key);
}

std::string as_string(const json& j, const std::string& what) {
  if (!j.is_string()) throw scenario_error(what + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> as_strings(const json& j, const std::string& what) {
  if (!j.is_array()) throw scenario_error(what + " must be a list of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(as_string(e, what));
  return out;
}

void require_unique(const std::vector<std::string>& names, const std::string& what) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw scenario_error(what + " names must be non-empty");
    if (!seen.insert(n).second) throw scenario_error("duplicate " + what + " '" + n + "'");
  }
}

state as_state(const json& j, const std::set<std::string>& props, const std::string& what) {
  state s;
  for (const auto& p : as_strings(j, what)) {
    if (!props.count(p)) throw scenario_error(what + " mentions undeclared proposition '" + p + "'");
    s.insert(p);
  }
  return s;
}

json state_json(const state& s) { return json(std::vector<std::string>(s.begin(), s.end())); }

void finish(loaded_scenario& out) {
  try {
    reachable_states(out.system);
  } catch (const model_error& e) {
    throw scenario_error(std::string("transition table is not total: ") + e.what());
  }
  out.warnings = check_value_base(out.system);
}

} // namespace

loaded_scenario load_scenario(const json& doc) {
  if (!doc.is_object()) throw scenario_error("scenario document must be an object");
  loaded_scenario out;
  out.name = doc.contains("name") ? as_string(doc.at("name"), "name") : "scenario";
  mas& d = out.system;
  mts& m = d.system;

  m.agents = as_strings(require(doc, "agents"), "agents");
  m.propositions = as_strings(require(doc, "propositions"), "propositions");
  m.actions = as_strings(require(doc, "actions"), "actions");
  require_unique(m.agents, "agent");
  require_unique(m.propositions, "proposition");
  require_unique(m.actions, "action");
  if (m.agents.empty()) throw scenario_error("at least one agent is required");
  if (m.actions.empty()) throw scenario_error("at least one action is required");
  const std::set<std::string> props(m.propositions.begin(), m.propositions.end());

  m.availability.assign(m.agents.size(), {});
  for (agent_id a = 0; a < m.agents.size(); ++a) {
    for (action_id act = 0; act < m.actions.size(); ++act) m.availability[a].push_back(act);
  }
  if (doc.contains("availability")) {
    const json& av = doc.at("availability");
    if (!av.is_object()) throw scenario_error("availability must map agents to action lists");
    for (const auto& [agent, list] : av.items()) {
      const auto a = m.find_agent(agent);
      if (!a) throw scenario_error("availability names unknown agent '" + agent + "'");
      std::vector<action_id> allowed;
      for (const auto& name : as_strings(list, "availability")) {
        const auto act = m.find_action(name);
        if (!act) throw scenario_error("availability names unknown action '" + name + "'");
        allowed.push_back(*act);
      }
      std::sort(allowed.begin(), allowed.end());
      allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
      if (allowed.empty()) throw scenario_error("agent '" + agent + "' has no available action");
      m.availability[*a] = std::move(allowed);
    }
  }

  d.initial = as_state(require(doc, "initial"), props, "initial");
  const json& horizon = require(doc, "horizon");
  if (!horizon.is_number_integer() || horizon.get<long long>() < 1) {
    throw scenario_error("horizon must be an integer of at least 1");
  }
  d.horizon = horizon.get<std::size_t>();

  const json& rows = require(doc, "transitions");
  if (!rows.is_array()) throw scenario_error("transitions must be a list");
  for (const auto& row : rows) {
    transition_rule rule;
    rule.joint.assign(m.agents.size(), std::nullopt);
    const json& from = require(row, "from");
    if (!(from.is_string() && from.get<std::string>() == "*")) {
      rule.from = as_state(from, props, "transition source");
    }
    if (row.contains("joint")) {
      const json& joint = row.at("joint");
      if (!joint.is_object()) throw scenario_error("transition joint action must map agents to actions");
      for (const auto& [agent, act] : joint.items()) {
        const auto a = m.find_agent(agent);
        if (!a) throw scenario_error("transition names unknown agent '" + agent + "'");
        const std::string name = as_string(act, "transition action");
        if (name == "*") continue;
        const auto id = m.find_action(name);
        if (!id) throw scenario_error("transition names unknown action '" + name + "'");
        rule.joint[*a] = *id;
      }
    }
    if (row.contains("to")) {
      if (row.contains("add") || row.contains("remove")) {
        throw scenario_error("transition gives both 'to' and an add/remove effect");
      }
      rule.to = as_state(row.at("to"), props, "transition target");
    } else {
      if (!row.contains("add") && !row.contains("remove")) {
        throw scenario_error("transition needs 'to' or an add/remove effect");
      }
      if (row.contains("add")) rule.add = as_state(row.at("add"), props, "transition effect");
      if (row.contains("remove")) rule.remove = as_state(row.at("remove"), props, "transition effect");
    }
    m.rules.push_back(std::move(rule));
  }

  const json& levels = require(doc, "values");
  if (!levels.is_array()) throw scenario_error("values must be a list of levels");
  for (const auto& level : levels) {
    if (!level.is_array()) throw scenario_error("each value level must be a list");
    std::vector<value> vs;
    for (const auto& entry : level) {
      value v;
      v.name = as_string(require(entry, "name"), "value name");
      const std::string text = as_string(require(entry, "formula"), "value formula");
      try {
        v.surface = ltlf::parse_surface(text);
      } catch (const parse_error& e) {
        throw scenario_error("value '" + v.name + "': " + e.what());
      }
      for (const auto& p : ltlf::atoms(v.surface)) {
        if (!props.count(p)) {
          throw scenario_error("value '" + v.name + "' mentions undeclared proposition '" + p + "'");
        }
      }
      v.formula = ltlf::normalise(v.surface);
      vs.push_back(std::move(v));
    }
    try {
      d.values.add_level(std::move(vs));
    } catch (const scenario_error&) {
      throw;
    }
  }

  if (doc.contains("strategies")) {
    const json& named = doc.at("strategies");
    if (!named.is_object()) throw scenario_error("strategies must map names to strategies");
    for (const auto& [name, body] : named.items()) {
      const std::string agent = as_string(require(body, "agent"), "strategy agent");
      const auto a = m.find_agent(agent);
      if (!a) throw scenario_error("strategy '" + name + "' names unknown agent '" + agent + "'");
      const decision_tree tree(d, *a);
      std::vector<std::optional<action_id>> choices(tree.node_count());
      std::optional<action_id> fallback;
      const json& map = require(body, "choices");
      if (!map.is_object()) throw scenario_error("strategy '" + name + "' choices must be an object");
      const auto& avail = m.availability[*a];
      for (const auto& [key, act] : map.items()) {
        const auto id = m.find_action(as_string(act, "strategy action"));
        if (!id || std::find(avail.begin(), avail.end(), *id) == avail.end()) {
          throw scenario_error("strategy '" + name + "' chooses an action unavailable to '" + agent + "'");
        }
        if (key == "*") {
          fallback = id;
          continue;
        }
        const auto node = tree.find(key);
        if (!node) throw scenario_error("strategy '" + name + "' has unknown decision point '" + key + "'");
        choices[*node] = id;
      }
      strategy_tree t;
      t.owner = *a;
      for (std::size_t n = 0; n < choices.size(); ++n) {
        if (!choices[n] && !fallback) {
          throw scenario_error("strategy '" + name + "' has no action at decision point '" + tree.key(n) + "'");
        }
        t.choices.push_back(choices[n] ? *choices[n] : *fallback);
      }
      out.strategies.push_back({name, std::move(t)});
    }
  }

  finish(out);
  return out;
}

matrix_doc parse_matrix(const json& doc) {
  matrix_doc m;
  m.name = doc.contains("name") ? as_string(doc.at("name"), "name") : "matrix";
  m.row_agent = as_string(require(doc, "row_agent"), "row_agent");
  m.column_agent = as_string(require(doc, "column_agent"), "column_agent");
  m.rows = as_strings(require(doc, "rows"), "rows");
  m.columns = as_strings(require(doc, "columns"), "columns");
  if (doc.contains("available_rows")) m.available_rows = as_strings(doc.at("available_rows"), "available_rows");
  if (doc.contains("available_columns")) {
    m.available_columns = as_strings(doc.at("available_columns"), "available_columns");
  }
  const json& cells = require(doc, "cells");
  if (!cells.is_array()) throw scenario_error("cells must be a list of rows");
  for (const auto& row : cells) {
    if (!row.is_array()) throw scenario_error("each cell row must be a list");
    std::vector<std::vector<std::string>> r;
    for (const auto& cell : row) r.push_back(as_strings(cell, "cell"));
    m.cells.push_back(std::move(r));
  }
  const json& levels = require(doc, "values");
  if (!levels.is_array()) throw scenario_error("values must be a list of levels");
  for (const auto& level : levels) m.values.push_back(as_strings(level, "value level"));
  return m;
}

loaded_scenario compile_matrix(const matrix_doc& m) {
  if (m.rows.empty() || m.columns.empty()) throw scenario_error("empty matrix");
  if (m.row_agent == m.column_agent) throw scenario_error("row and column agents must differ");
  require_unique(m.rows, "row label");
  require_unique(m.columns, "column label");
  if (m.cells.size() != m.rows.size()) throw scenario_error("matrix must have one cell row per row label");
  for (const auto& r : m.cells) {
    if (r.size() != m.columns.size()) throw scenario_error("matrix is not rectangular");
  }

  std::vector<std::string> value_names;
  for (const auto& level : m.values) value_names.insert(value_names.end(), level.begin(), level.end());
  require_unique(value_names, "value");

  loaded_scenario out;
  out.name = m.name;
  mas& d = out.system;
  mts& sys = d.system;
  sys.agents = {m.row_agent, m.column_agent};
  for (std::size_t j = 0; j < value_names.size(); ++j) sys.propositions.push_back("p" + std::to_string(j + 1));
  const std::size_t width = std::max(m.rows.size(), m.columns.size());
  for (std::size_t x = 0; x < width; ++x) sys.actions.push_back("a" + std::to_string(x + 1));

  auto availability = [](const std::vector<std::string>& labels,
                         const std::optional<std::vector<std::string>>& subset) {
    std::vector<action_id> ids;
    for (std::size_t x = 0; x < labels.size(); ++x) {
      if (!subset || std::find(subset->begin(), subset->end(), labels[x]) != subset->end()) ids.push_back(x);
    }
    if (subset) {
      for (const auto& s : *subset) {
        if (std::find(labels.begin(), labels.end(), s) == labels.end()) {
          throw scenario_error("availability names unknown label '" + s + "'");
        }
      }
    }
    if (ids.empty()) throw scenario_error("matrix agent has no available label");
    return ids;
  };
  sys.availability = {availability(m.rows, m.available_rows), availability(m.columns, m.available_columns)};

  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
      transition_rule rule;
      rule.from = state{};
      rule.joint = {r, c};
      state target;
      for (const auto& name : m.cells[r][c]) {
        auto it = std::find(value_names.begin(), value_names.end(), name);
        if (it == value_names.end()) throw scenario_error("cell names undeclared value '" + name + "'");
        target.insert(sys.propositions[static_cast<std::size_t>(it - value_names.begin())]);
      }
      rule.to = std::move(target);
      sys.rules.push_back(std::move(rule));
    }
  }
  d.initial = {};
  d.horizon = 1;

  std::size_t j = 0;
  for (const auto& level : m.values) {
    std::vector<value> vs;
    for (const auto& name : level) {
      value v;
      v.name = name;
      v.surface = ltlf::formula::eventually(ltlf::formula::atom(sys.propositions[j++]));
      v.formula = ltlf::normalise(v.surface);
      vs.push_back(std::move(v));
    }
    d.values.add_level(std::move(vs));
  }

  // At horizon 1 a strategy is its single root choice.
  auto add_strategies = [&](agent_id a, const std::vector<std::string>& labels) {
    for (action_id act : sys.availability[a]) out.strategies.push_back({labels[act], strategy_tree{a, {act}}});
  };
  add_strategies(0, m.rows);
  add_strategies(1, m.columns);

  finish(out);
  return out;
}

loaded_scenario load_document(const json& doc) {
  if (doc.is_object() && doc.contains("type")) {
    const std::string type = as_string(doc.at("type"), "type");
    if (type == "matrix") return compile_matrix(parse_matrix(doc));
    if (type != "scenario") throw scenario_error("unknown document type '" + type + "'");
  }
  return load_scenario(doc);
}

loaded_scenario load_document_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw scenario_error(std::string("parse error: ") + e.what());
  }
  try {
    return load_document(doc);
  } catch (const json::exception& e) {
    throw scenario_error(std::string("malformed document: ") + e.what());
  }
}

loaded_scenario load_document_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw scenario_error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_document_text(buf.str());
}

json scenario_to_json(const mas& d, const std::string& name) {
  loaded_scenario s;
  s.name = name;
  s.system = d;
  return scenario_to_json(s);
}

json scenario_to_json(const loaded_scenario& s) {
  const mas& d = s.system;
  const mts& m = d.system;
  json doc;
  doc["type"] = "scenario";
  doc["name"] = s.name;
  doc["agents"] = m.agents;
  doc["propositions"] = m.propositions;
  doc["actions"] = m.actions;
  json avail = json::object();
  for (agent_id a = 0; a < m.agent_count(); ++a) {
    std::vector<std::string> names;
    for (action_id act : m.availability[a]) names.push_back(m.actions[act]);
    avail[m.agents[a]] = names;
  }
  doc["availability"] = avail;
  doc["initial"] = state_json(d.initial);
  doc["horizon"] = d.horizon;

  json rules = json::array();
  for (const auto& rule : m.rules) {
    json r;
    r["from"] = rule.from ? state_json(*rule.from) : json("*");
    json joint = json::object();
    for (agent_id a = 0; a < rule.joint.size(); ++a) {
      if (rule.joint[a]) joint[m.agents[a]] = m.actions[*rule.joint[a]];
    }
    r["joint"] = joint;
    if (rule.to) {
      r["to"] = state_json(*rule.to);
    } else {
      r["add"] = state_json(rule.add);
      r["remove"] = state_json(rule.remove);
    }
    rules.push_back(std::move(r));
  }
  doc["transitions"] = rules;

  json levels = json::array();
  for (std::size_t n = 0; n < d.values.level_count(); ++n) {
    json level = json::array();
    for (value_id v : d.values.level(n)) {
      level.push_back({{"name", d.values.at(v).name}, {"formula", ltlf::print(d.values.at(v).surface)}});
    }
    levels.push_back(std::move(level));
  }
  doc["values"] = levels;

  json named = json::object();
  for (const auto& ns : s.strategies) {
    const decision_tree tree(d, ns.tree.owner);
    json choices = json::object();
    for (std::size_t node = 0; node < tree.node_count(); ++node) {
      choices[tree.key(node)] = m.actions[ns.tree.choices.at(node)];
    }
    named[ns.name] = {{"agent", m.agents[ns.tree.owner]}, {"choices", choices}};
  }
  doc["strategies"] = named;
  return doc;
}

std::optional<strategy_tree> resolve_strategy(const loaded_scenario& s, agent_id agent, const std::string& selector) {
  if (!selector.empty() && selector[0] == '#') {
    std::uint64_t index = 0;
    try {
      std::size_t used = 0;
      index = std::stoull(selector.substr(1), &used);
      if (used + 1 != selector.size()) return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (index >= strategy_count(s.system, agent)) return std::nullopt;
    return strategy_at(s.system, decision_tree(s.system, agent), index);
  }
  const named_strategy* ns = s.find_strategy(selector);
  if (ns == nullptr || ns->tree.owner != agent) return std::nullopt;
  return ns->tree;
}

std::string strategy_label(const loaded_scenario& s, const strategy_tree& t) {
  for (const auto& ns : s.strategies) {
    if (ns.tree == t) return ns.name;
  }
  return "#" + std::to_string(strategy_index(s.system, decision_tree(s.system, t.owner), t));
}

} // namespace mvresp
