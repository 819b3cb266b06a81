#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace mvresp {

using agent_id = std::size_t;
using action_id = std::size_t;

/// The propositions true in a state.
using state = std::set<std::string>;

/// One action per agent, indexed by agent id.
using joint_action = std::vector<action_id>;

/// A k-history: k+1 states and the k joint actions between them.
struct history {
  std::vector<state> states;
  std::vector<joint_action> actions;

  std::size_t horizon() const noexcept { return actions.size(); }

  bool operator==(const history&) const = default;
};

/// First `length + 1` states and first `length` joint actions of `h`.
history prefix(const history& h, std::size_t length);

} // namespace mvresp
