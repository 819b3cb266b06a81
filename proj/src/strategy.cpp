#include "mvresp/strategy.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "mvresp/error.hpp"

namespace mvresp {

namespace {

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t e = 0; e < exp; ++e) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out *= base;
  }
  return out;
}

/// Runs body(i) for i in [0, n) on up to `jobs` threads; rethrows the first error.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

} // namespace

std::uint64_t strategy_count(const mas& d, agent_id i) {
  const decision_tree tree(d, i);
  return saturating_pow(d.system.availability.at(i).size(), tree.node_count());
}

strategy_tree strategy_at(const mas& d, const decision_tree& tree, std::uint64_t index) {
  const auto& avail = d.system.availability.at(tree.owner());
  strategy_tree s;
  s.owner = tree.owner();
  s.choices.resize(tree.node_count());
  for (std::size_t node = tree.node_count(); node-- > 0;) {
    s.choices[node] = avail[index % avail.size()];
    index /= avail.size();
  }
  return s;
}

std::uint64_t strategy_index(const mas& d, const decision_tree& tree, const strategy_tree& s) {
  if (s.owner != tree.owner() || s.choices.size() != tree.node_count()) {
    throw precondition_error("strategy does not match the decision tree of agent '" +
                             d.system.agents.at(tree.owner()) + "'");
  }
  const auto& avail = d.system.availability.at(tree.owner());
  std::uint64_t index = 0;
  for (action_id act : s.choices) {
    auto it = std::find(avail.begin(), avail.end(), act);
    if (it == avail.end()) {
      throw precondition_error("strategy chooses an action unavailable to agent '" +
                               d.system.agents.at(tree.owner()) + "'");
    }
    index = index * avail.size() + static_cast<std::uint64_t>(it - avail.begin());
  }
  return index;
}

std::vector<strategy_tree> enumerate_strategies(const mas& d, agent_id i, std::uint64_t cap) {
  const decision_tree tree(d, i);
  const std::uint64_t count = saturating_pow(d.system.availability.at(i).size(), tree.node_count());
  if (count > cap) {
    throw cap_exceeded("agent '" + d.system.agents.at(i) + "' has more than " + std::to_string(cap) +
                       " strategies");
  }
  std::vector<strategy_tree> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t n = 0; n < count; ++n) {
    out.push_back(strategy_at(d, tree, n));
  }
  return out;
}

std::vector<joint_strategy> enumerate_joint(const mas& d, std::span<const agent_id> coalition, std::uint64_t cap) {
  std::vector<agent_id> members(coalition.begin(), coalition.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::vector<std::vector<strategy_tree>> per_member;
  std::uint64_t total = 1;
  for (agent_id a : members) {
    per_member.push_back(enumerate_strategies(d, a, cap));
    total *= per_member.back().size();
    if (total > cap) {
      throw cap_exceeded("coalition has more than " + std::to_string(cap) + " joint strategies");
    }
  }
  std::vector<joint_strategy> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> digits(members.size(), 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    std::vector<strategy_tree> trees;
    for (std::size_t m = 0; m < members.size(); ++m) {
      trees.push_back(per_member[m][digits[m]]);
    }
    out.emplace_back(std::move(trees));
    for (std::size_t m = members.size(); m-- > 0;) {
      if (++digits[m] < per_member[m].size()) break;
      digits[m] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

agent_analysis::agent_analysis(const mas& d, agent_id i, analysis_options options)
    : mas_(std::make_shared<const mas>(d)), agent_(i), options_(options) {
  if (i >= d.system.agent_count()) {
    throw precondition_error("unknown agent index " + std::to_string(i));
  }
  player_ = std::make_unique<player>(*mas_);
  strategies_ = enumerate_strategies(*mas_, i, options_.strategy_cap);
  for (agent_id a = 0; a < d.system.agent_count(); ++a) {
    if (a != i) others_.push_back(a);
  }
  opponents_ = enumerate_joint(*mas_, others_, options_.strategy_cap);
  cols_ = opponents_.size();
  const std::size_t rows = strategies_.size();
  if (static_cast<double>(rows) * static_cast<double>(cols_) > static_cast<double>(options_.profile_cap)) {
    throw cap_exceeded("more than " + std::to_string(options_.profile_cap) + " strategy profiles for agent '" +
                       d.system.agents[i] + "'");
  }
  outcomes_.resize(rows * cols_);
  scores_.resize(rows * cols_);
  parallel_for(rows, options_.jobs, [&](std::size_t r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const history h = player_->play(opponents_[c].with(strategies_[r]));
      outcomes_[r * cols_ + c] = satset(h, mas_->values);
      scores_[r * cols_ + c] = mvresp::score(outcomes_[r * cols_ + c], mas_->values);
    }
  });

  best_.assign(cols_, 0);
  for (std::size_t c = 0; c < cols_; ++c) {
    for (std::size_t r = 1; r < rows; ++r) {
      if (score(best_[c], c) < score(r, c)) best_[c] = r;
    }
  }

  representative_.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) representative_[r] = r;
  if (options_.dedupe) {
    std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
    for (std::size_t r = 0; r < rows; ++r) {
      std::size_t hash = 0;
      for (std::size_t c = 0; c < cols_; ++c) {
        for (const auto& l : outcome(r, c).literals()) {
          hash = hash * 31 + l.value * 2 + (l.sign == polarity::satisfied);
        }
      }
      auto& bucket = buckets[hash];
      for (std::size_t other : bucket) {
        bool same = true;
        for (std::size_t c = 0; c < cols_ && same; ++c) same = outcome(r, c) == outcome(other, c);
        if (same) {
          representative_[r] = other;
          break;
        }
      }
      if (representative_[r] == r) bucket.push_back(r);
    }
  }
}

joint_strategy agent_analysis::profile(std::size_t row, std::size_t col) const {
  return opponents_.at(col).with(strategies_.at(row));
}

history agent_analysis::play(std::size_t row, std::size_t col) const { return player_->play(profile(row, col)); }

std::size_t agent_analysis::index_of(const strategy_tree& s) const {
  if (s.owner != agent_) {
    throw precondition_error("strategy belongs to agent '" + mas_->system.agents.at(s.owner) + "', not '" +
                             mas_->system.agents[agent_] + "'");
  }
  return static_cast<std::size_t>(strategy_index(*mas_, tree(), s));
}

std::size_t agent_analysis::opponent_index_of(const joint_strategy& others) const {
  if (others.coalition() != others_) {
    throw precondition_error("joint strategy does not cover exactly the other agents");
  }
  std::uint64_t col = 0;
  for (agent_id a : others_) {
    const auto& tree_a = player_->tree(a);
    const std::uint64_t count = saturating_pow(mas_->system.availability[a].size(), tree_a.node_count());
    col = col * count + strategy_index(*mas_, tree_a, others.of(a));
  }
  return static_cast<std::size_t>(col);
}

std::pair<std::size_t, std::size_t> agent_analysis::locate(const joint_strategy& js) const {
  return {index_of(js.of(agent_)), opponent_index_of(js.without(agent_))};
}

// ---------------------------------------------------------------------------

bool is_weakly_dominated_by(const agent_analysis& a, std::size_t s, std::size_t by) {
  for (std::size_t c = 0; c < a.opponent_count(); ++c) {
    if (!score_leq(a.score(s, c), a.score(by, c))) return false;
  }
  return true;
}

bool non_dominated(const agent_analysis& a, std::size_t s) {
  for (std::size_t other = 0; other < a.strategy_count(); ++other) {
    if (is_weakly_dominated_by(a, s, other) && !is_weakly_dominated_by(a, other, s)) return false;
  }
  return true;
}

std::vector<std::size_t> non_dominated_set(const agent_analysis& a) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < a.strategy_count(); ++s) {
    if (non_dominated(a, s)) out.push_back(s);
  }
  return out;
}

anticipated_regret_result anticipated_regret(const agent_analysis& a, std::size_t s, bool all_witnesses) {
  const value_base& vb = a.values();
  anticipated_regret_result out;
  bool first = true;
  for (std::size_t c = 0; c < a.opponent_count(); ++c) {
    const std::size_t b = a.best_response(c);
    outcome_set regret = a.outcome(s, c).minus(a.outcome(b, c));
    score_vector sc = score(regret, vb);
    if (first || sc < out.score) {
      out.regret = std::move(regret);
      out.score = std::move(sc);
      out.opponent = c;
      out.alternative = b;
      first = false;
    }
  }
  if (all_witnesses) {
    for (std::size_t c = 0; c < a.opponent_count(); ++c) {
      for (std::size_t alt = 0; alt < a.strategy_count(); ++alt) {
        outcome_set regret = a.outcome(s, c).minus(a.outcome(alt, c));
        if (score(regret, vb) == out.score) out.ties.push_back({c, alt, std::move(regret)});
      }
    }
  }
  return out;
}

std::vector<std::size_t> regret_minimising_set(const agent_analysis& a) {
  std::vector<score_vector> scores(a.strategy_count());
  for (std::size_t s = 0; s < a.strategy_count(); ++s) {
    const std::size_t rep = a.representative(s);
    scores[s] = rep == s ? anticipated_regret(a, s).score : scores[rep];
  }
  const score_vector best = *std::max_element(scores.begin(), scores.end());
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < scores.size(); ++s) {
    if (scores[s] == best) out.push_back(s);
  }
  return out;
}

bool is_weakly_dominated_by(const mas& d, agent_id i, const strategy_tree& s, const strategy_tree& by) {
  const agent_analysis a(d, i);
  return is_weakly_dominated_by(a, a.index_of(s), a.index_of(by));
}

bool non_dominated(const mas& d, agent_id i, const strategy_tree& s) {
  const agent_analysis a(d, i);
  return non_dominated(a, a.index_of(s));
}

anticipated_regret_result anticipated_regret(const mas& d, agent_id i, const strategy_tree& s) {
  const agent_analysis a(d, i);
  return anticipated_regret(a, a.index_of(s));
}

std::vector<strategy_tree> regret_minimising_set(const mas& d, agent_id i) {
  const agent_analysis a(d, i);
  std::vector<strategy_tree> out;
  for (std::size_t s : regret_minimising_set(a)) out.push_back(a.strategy(s));
  return out;
}

} // namespace mvresp
