#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvresp/history.hpp"
#include "mvresp/values.hpp"

namespace mvresp {

/// One row of the transition table. Unset `from` or joint entries are
/// wildcards. The target is either an absolute state (`to`) or an effect on
/// the source state (`remove` then `add`).
struct transition_rule {
  std::optional<state> from;
  std::vector<std::optional<action_id>> joint;
  std::optional<state> to;
  state add;
  state remove;

  std::size_t specificity() const noexcept;
  bool matches(const state& s, const joint_action& j) const;
  state apply(const state& s) const;

  bool operator==(const transition_rule&) const = default;
};

/// Multiagent transition system over a declared, finite proposition set.
struct mts {
  std::vector<std::string> propositions;
  std::vector<std::string> agents;
  std::vector<std::string> actions;
  /// Actions each agent may choose, in declaration order.
  std::vector<std::vector<action_id>> availability;
  std::vector<transition_rule> rules;

  std::size_t agent_count() const noexcept { return agents.size(); }
  std::optional<agent_id> find_agent(const std::string& name) const;
  std::optional<action_id> find_action(const std::string& name) const;

  bool operator==(const mts&) const = default;
};

/// Moral action system: transition system, start state, horizon, value base.
struct mas {
  mts system;
  state initial;
  std::size_t horizon = 1;
  value_base values;

  bool operator==(const mas&) const = default;
};

/// Unique successor; the most specific matching rule wins. Throws model_error
/// when nothing matches or equally specific rules disagree.
state successor(const mts& m, const state& s, const joint_action& j);

std::string format_state(const state& s);
std::string format_joint_action(const mts& m, const joint_action& j);

/// Every state reachable from the start state within the horizon, with the
/// joint actions permitted by availability. Also proves the table total on them.
std::vector<state> reachable_states(const mas& d);

/// All joint actions permitted by availability, agent 0 most significant.
std::vector<joint_action> joint_actions(const mts& m);

inline constexpr std::uint64_t default_node_cap = 10'000'000;

/// Decision points of one agent. Because transitions are deterministic and the
/// agent knows its own past choices, a point is identified by the sequence of
/// the other agents' joint actions so far. Points exist at depths 0..k-1.
///
/// Numbering: depth-d points occupy [offset(d), offset(d) + B^d) where B is the
/// number of distinct joint actions of the other agents; a point's code is the
/// base-B reading of its path, oldest step most significant.
class decision_tree {
public:
  decision_tree(const mas& d, agent_id owner, std::uint64_t node_cap = default_node_cap);

  agent_id owner() const noexcept { return owner_; }
  std::size_t horizon() const noexcept { return offsets_.size() - 1; }
  std::size_t branching() const noexcept { return branching_; }
  std::size_t node_count() const noexcept { return offsets_.back(); }
  std::size_t offset(std::size_t depth) const { return offsets_.at(depth); }
  std::size_t depth_of(std::size_t node) const;

  /// Position of the other agents' actions among their joint actions.
  std::size_t encode_others(const joint_action& j) const;

  /// Other agents' actions (in agent order, owner omitted) at each step.
  std::vector<std::vector<action_id>> path(std::size_t node) const;

  /// "/" for the root, "/b1/b0" below it; several other agents: "/a1,c0".
  std::string key(std::size_t node) const;
  std::optional<std::size_t> find(const std::string& key) const;

private:
  std::vector<std::string> action_names_;
  agent_id owner_;
  std::vector<agent_id> others_;
  std::vector<std::size_t> radix_;
  std::vector<std::vector<action_id>> avail_;
  std::size_t branching_ = 1;
  std::vector<std::size_t> offsets_;
  /// availability position per (agent, action); npos when unavailable
  std::vector<std::vector<std::size_t>> position_;
};

inline decision_tree reachable_nodes(const mas& d, agent_id owner) { return decision_tree(d, owner); }

/// Finite strategy: an action for every decision point of the owner.
struct strategy_tree {
  agent_id owner = 0;
  std::vector<action_id> choices;

  bool operator==(const strategy_tree&) const = default;
};

/// Strategies for a coalition, sorted by agent id.
class joint_strategy {
public:
  joint_strategy() = default;
  explicit joint_strategy(std::vector<strategy_tree> trees);

  const std::vector<strategy_tree>& trees() const noexcept { return trees_; }
  std::vector<agent_id> coalition() const;
  bool contains(agent_id a) const;
  const strategy_tree& of(agent_id a) const;

  /// Reduction to the coalition without `a`.
  joint_strategy without(agent_id a) const;
  /// Union with a strategy for an agent outside the coalition.
  joint_strategy with(strategy_tree t) const;

  bool operator==(const joint_strategy&) const = default;

private:
  std::vector<strategy_tree> trees_;
};

/// Reusable play engine: decision trees for every agent built once. Keeps a
/// pointer to `d`, which must outlive it.
class player {
public:
  explicit player(const mas& d, std::uint64_t node_cap = default_node_cap);

  /// The unique history from the start state under a strategy for every agent.
  history play(const joint_strategy& js) const;

  const decision_tree& tree(agent_id a) const { return trees_.at(a); }

private:
  const mas* mas_;
  std::vector<decision_tree> trees_;
};

history play(const joint_strategy& js, const mas& d);

} // namespace mvresp
