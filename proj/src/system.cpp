#include "mvresp/system.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "mvresp/error.hpp"

namespace mvresp {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

} // namespace

std::size_t transition_rule::specificity() const noexcept {
  std::size_t n = from ? 1 : 0;
  for (const auto& a : joint) {
    n += a.has_value();
  }
  return n;
}

bool transition_rule::matches(const state& s, const joint_action& j) const {
  if (from && *from != s) {
    return false;
  }
  for (std::size_t a = 0; a < joint.size() && a < j.size(); ++a) {
    if (joint[a] && *joint[a] != j[a]) {
      return false;
    }
  }
  return true;
}

state transition_rule::apply(const state& s) const {
  if (to) {
    return *to;
  }
  state out;
  std::set_difference(s.begin(), s.end(), remove.begin(), remove.end(), std::inserter(out, out.end()));
  out.insert(add.begin(), add.end());
  return out;
}

std::optional<agent_id> mts::find_agent(const std::string& name) const {
  auto it = std::find(agents.begin(), agents.end(), name);
  if (it == agents.end()) {
    return std::nullopt;
  }
  return static_cast<agent_id>(it - agents.begin());
}

std::optional<action_id> mts::find_action(const std::string& name) const {
  auto it = std::find(actions.begin(), actions.end(), name);
  if (it == actions.end()) {
    return std::nullopt;
  }
  return static_cast<action_id>(it - actions.begin());
}

std::string format_state(const state& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& p : s) {
    os << (first ? "" : ", ") << p;
    first = false;
  }
  os << '}';
  return os.str();
}

std::string format_joint_action(const mts& m, const joint_action& j) {
  std::ostringstream os;
  os << '(';
  for (std::size_t a = 0; a < j.size(); ++a) {
    os << (a ? ", " : "") << m.agents.at(a) << '=' << m.actions.at(j[a]);
  }
  os << ')';
  return os.str();
}

state successor(const mts& m, const state& s, const joint_action& j) {
  const transition_rule* best = nullptr;
  std::optional<state> target;
  for (const auto& rule : m.rules) {
    if (!rule.matches(s, j)) {
      continue;
    }
    if (best == nullptr || rule.specificity() > best->specificity()) {
      best = &rule;
      target = rule.apply(s);
    } else if (rule.specificity() == best->specificity()) {
      if (rule.apply(s) != *target) {
        throw model_error("ambiguous transition for state " + format_state(s) + " and joint action " +
                          format_joint_action(m, j));
      }
    }
  }
  if (!target) {
    throw model_error("no transition for state " + format_state(s) + " and joint action " +
                      format_joint_action(m, j));
  }
  return *target;
}

std::vector<joint_action> joint_actions(const mts& m) {
  std::vector<joint_action> out{joint_action{}};
  for (agent_id a = 0; a < m.agent_count(); ++a) {
    std::vector<joint_action> next;
    for (const auto& prefix : out) {
      for (action_id act : m.availability.at(a)) {
        auto j = prefix;
        j.push_back(act);
        next.push_back(std::move(j));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<state> reachable_states(const mas& d) {
  const auto js = joint_actions(d.system);
  std::set<state> seen{d.initial};
  std::set<state> frontier{d.initial};
  for (std::size_t t = 0; t < d.horizon && !frontier.empty(); ++t) {
    std::set<state> next;
    for (const auto& s : frontier) {
      for (const auto& j : js) {
        state s2 = successor(d.system, s, j);
        if (seen.insert(s2).second) {
          next.insert(s2);
        }
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------------------

decision_tree::decision_tree(const mas& d, agent_id owner, std::uint64_t node_cap)
    : action_names_(d.system.actions), owner_(owner) {
  const mts& m = d.system;
  if (owner >= m.agent_count()) {
    throw precondition_error("unknown agent index " + std::to_string(owner));
  }
  if (d.horizon < 1) {
    throw precondition_error("horizon must be at least 1");
  }
  position_.resize(m.agent_count());
  for (agent_id a = 0; a < m.agent_count(); ++a) {
    position_[a].assign(m.actions.size(), npos);
    const auto& avail = m.availability.at(a);
    if (avail.empty()) {
      throw precondition_error("agent '" + m.agents[a] + "' has no available action");
    }
    for (std::size_t p = 0; p < avail.size(); ++p) {
      position_[a][avail[p]] = p;
    }
    if (a != owner) {
      others_.push_back(a);
      radix_.push_back(avail.size());
      avail_.push_back(avail);
    }
  }
  std::uint64_t b = 1;
  for (auto r : radix_) {
    b = saturating_mul(b, r);
  }
  std::uint64_t width = 1;
  std::uint64_t total = 0;
  offsets_.push_back(0);
  for (std::size_t depth = 0; depth < d.horizon; ++depth) {
    total += width;
    if (total > node_cap || width > node_cap) {
      throw cap_exceeded("decision tree of agent '" + m.agents[owner] + "' exceeds " +
                         std::to_string(node_cap) + " nodes");
    }
    offsets_.push_back(static_cast<std::size_t>(total));
    width = saturating_mul(width, b);
  }
  branching_ = static_cast<std::size_t>(std::min<std::uint64_t>(b, node_cap + 1));
}

std::size_t decision_tree::depth_of(std::size_t node) const {
  if (node >= node_count()) {
    throw precondition_error("decision node " + std::to_string(node) + " out of range");
  }
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), node);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

std::size_t decision_tree::encode_others(const joint_action& j) const {
  std::size_t code = 0;
  for (std::size_t o = 0; o < others_.size(); ++o) {
    const agent_id a = others_[o];
    const std::size_t p = j.at(a) < position_[a].size() ? position_[a][j[a]] : npos;
    if (p == npos) {
      throw precondition_error("action not available to agent " + std::to_string(a));
    }
    code = code * radix_[o] + p;
  }
  return code;
}

std::vector<std::vector<action_id>> decision_tree::path(std::size_t node) const {
  const std::size_t depth = depth_of(node);
  std::size_t code = node - offsets_[depth];
  std::vector<std::vector<action_id>> steps(depth);
  for (std::size_t t = depth; t-- > 0;) {
    std::size_t step = code % branching_;
    code /= branching_;
    std::vector<action_id> acts(others_.size());
    for (std::size_t o = others_.size(); o-- > 0;) {
      acts[o] = avail_[o][step % radix_[o]];
      step /= radix_[o];
    }
    steps[t] = std::move(acts);
  }
  return steps;
}

std::string decision_tree::key(std::size_t node) const {
  const auto steps = path(node);
  if (steps.empty()) {
    return "/";
  }
  std::string out;
  for (const auto& step : steps) {
    out += '/';
    for (std::size_t o = 0; o < step.size(); ++o) {
      out += (o ? "," : "") + action_names_[step[o]];
    }
  }
  return out;
}

std::optional<std::size_t> decision_tree::find(const std::string& key) const {
  if (key == "/") {
    return 0;
  }
  if (key.empty() || key[0] != '/') {
    return std::nullopt;
  }
  const auto segments = split(key.substr(1), '/');
  const std::size_t depth = segments.size();
  if (depth >= horizon()) {
    return std::nullopt;
  }
  std::size_t code = 0;
  for (const auto& seg : segments) {
    const auto names = split(seg, ',');
    if (names.size() != others_.size()) {
      return std::nullopt;
    }
    std::size_t step = 0;
    for (std::size_t o = 0; o < others_.size(); ++o) {
      auto it = std::find(action_names_.begin(), action_names_.end(), names[o]);
      if (it == action_names_.end()) {
        return std::nullopt;
      }
      const std::size_t p = position_[others_[o]][static_cast<std::size_t>(it - action_names_.begin())];
      if (p == npos) {
        return std::nullopt;
      }
      step = step * radix_[o] + p;
    }
    code = code * branching_ + step;
  }
  return offsets_[depth] + code;
}

// ---------------------------------------------------------------------------

joint_strategy::joint_strategy(std::vector<strategy_tree> trees) : trees_(std::move(trees)) {
  std::sort(trees_.begin(), trees_.end(), [](const auto& a, const auto& b) { return a.owner < b.owner; });
  for (std::size_t i = 1; i < trees_.size(); ++i) {
    if (trees_[i].owner == trees_[i - 1].owner) {
      throw precondition_error("joint strategy has two strategies for agent " +
                               std::to_string(trees_[i].owner));
    }
  }
}

std::vector<agent_id> joint_strategy::coalition() const {
  std::vector<agent_id> out;
  for (const auto& t : trees_) {
    out.push_back(t.owner);
  }
  return out;
}

bool joint_strategy::contains(agent_id a) const {
  return std::any_of(trees_.begin(), trees_.end(), [a](const auto& t) { return t.owner == a; });
}

const strategy_tree& joint_strategy::of(agent_id a) const {
  for (const auto& t : trees_) {
    if (t.owner == a) {
      return t;
    }
  }
  throw precondition_error("joint strategy has no strategy for agent " + std::to_string(a));
}

joint_strategy joint_strategy::without(agent_id a) const {
  std::vector<strategy_tree> rest;
  for (const auto& t : trees_) {
    if (t.owner != a) {
      rest.push_back(t);
    }
  }
  return joint_strategy(std::move(rest));
}

joint_strategy joint_strategy::with(strategy_tree t) const {
  auto all = trees_;
  all.push_back(std::move(t));
  return joint_strategy(std::move(all));
}

// ---------------------------------------------------------------------------

player::player(const mas& d, std::uint64_t node_cap) : mas_(&d) {
  for (agent_id a = 0; a < d.system.agent_count(); ++a) {
    trees_.emplace_back(d, a, node_cap);
  }
}

history player::play(const joint_strategy& js) const {
  const mas& d = *mas_;
  const std::size_t n = d.system.agent_count();
  std::vector<const strategy_tree*> strategies(n);
  for (agent_id a = 0; a < n; ++a) {
    strategies[a] = &js.of(a);
    if (strategies[a]->choices.size() != trees_[a].node_count()) {
      throw precondition_error("strategy for agent '" + d.system.agents[a] + "' has " +
                               std::to_string(strategies[a]->choices.size()) + " decisions, expected " +
                               std::to_string(trees_[a].node_count()));
    }
  }
  history h;
  h.states.reserve(d.horizon + 1);
  h.actions.reserve(d.horizon);
  h.states.push_back(d.initial);
  std::vector<std::size_t> codes(n, 0);
  for (std::size_t t = 0; t < d.horizon; ++t) {
    joint_action j(n);
    for (agent_id a = 0; a < n; ++a) {
      j[a] = strategies[a]->choices[trees_[a].offset(t) + codes[a]];
      const auto& avail = d.system.availability[a];
      if (std::find(avail.begin(), avail.end(), j[a]) == avail.end()) {
        throw precondition_error("strategy for agent '" + d.system.agents[a] +
                                 "' chooses an unavailable action");
      }
    }
    h.states.push_back(successor(d.system, h.states.back(), j));
    for (agent_id a = 0; a < n; ++a) {
      codes[a] = codes[a] * trees_[a].branching() + trees_[a].encode_others(j);
    }
    h.actions.push_back(std::move(j));
  }
  return h;
}

history play(const joint_strategy& js, const mas& d) { return player(d).play(js); }

} // namespace mvresp
