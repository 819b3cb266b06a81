#pragma once

#include <string>

#include "mvresp/responsibility.hpp"
#include "mvresp/scenario_io.hpp"
#include "mvresp/strategy.hpp"

namespace mvresp::test {

inline std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name + ".json"; }

inline loaded_scenario fixture(const std::string& name) { return load_document_file(fixture_path(name)); }

/// Row or column of a two-agent matrix fixture by label.
inline std::size_t row_of(const loaded_scenario& s, const agent_analysis& a, const std::string& label) {
  return a.index_of(*resolve_strategy(s, a.agent(), label));
}

inline std::size_t col_of(const loaded_scenario& s, const agent_analysis& a, const std::string& label) {
  const agent_id other = a.agent() == 0 ? 1 : 0;
  return a.opponent_index_of(joint_strategy({*resolve_strategy(s, other, label)}));
}

inline std::string show(const outcome_set& x, const agent_analysis& a) { return format_outcome(x, a.values()); }

inline std::string show(const outcome_set& x, const loaded_scenario& s) { return format_outcome(x, s.system.values); }

} // namespace mvresp::test

#include <random>
#include <vector>

namespace mvresp::test {

/// Any operator, sugar included, up to `depth`.
inline ltlf::formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& props, std::size_t depth) {
  using ltlf::formula;
  if (depth == 0 || rng() % 5 == 0) {
    const std::size_t pick = rng() % (props.size() + 2);
    if (pick == props.size()) return formula::top();
    if (pick == props.size() + 1) return formula::bottom();
    return formula::atom(props[pick]);
  }
  auto sub = [&] { return random_formula(rng, props, depth - 1); };
  switch (rng() % 8) {
  case 0: return formula::negation(sub());
  case 1: return formula::conjunction(sub(), sub());
  case 2: return formula::disjunction(sub(), sub());
  case 3: return formula::implication(sub(), sub());
  case 4: return formula::next(sub());
  case 5: return formula::until(sub(), sub());
  case 6: return formula::eventually(sub());
  default: return formula::henceforth(sub());
  }
}

inline std::vector<state> random_trace(std::mt19937_64& rng, const std::vector<std::string>& props,
                                       std::size_t max_length) {
  std::vector<state> trace(1 + rng() % max_length);
  for (auto& s : trace) {
    for (const auto& p : props) {
      if (rng() % 2) s.insert(p);
    }
  }
  return trace;
}

} // namespace mvresp::test
