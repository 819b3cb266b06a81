#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mvresp/system.hpp"
#include "mvresp/values.hpp"

namespace mvresp {

inline constexpr std::uint64_t default_strategy_cap = 1'000'000;

struct analysis_options {
  /// Ceiling on strategies per agent and on opponent joint strategies.
  std::uint64_t strategy_cap = default_strategy_cap;
  /// Ceiling on (own strategy, opponent joint strategy) pairs.
  std::uint64_t profile_cap = 10'000'000;
  unsigned jobs = 1;
  /// Evaluate anticipation once per class of strategies with identical outcome
  /// rows. Results are unchanged; only the amount of work differs.
  bool dedupe = false;
};

/// |available actions|^(decision points), saturating.
std::uint64_t strategy_count(const mas& d, agent_id i);

/// Strategy number `index` in enumeration order: decision points in numbering
/// order, the first point most significant, actions in availability order.
strategy_tree strategy_at(const mas& d, const decision_tree& tree, std::uint64_t index);
std::uint64_t strategy_index(const mas& d, const decision_tree& tree, const strategy_tree& s);

std::vector<strategy_tree> enumerate_strategies(const mas& d, agent_id i,
                                                std::uint64_t cap = default_strategy_cap);

/// Cartesian product of the members' enumerations, lowest agent id most
/// significant. The empty coalition has exactly one (empty) joint strategy.
std::vector<joint_strategy> enumerate_joint(const mas& d, std::span<const agent_id> coalition,
                                            std::uint64_t cap = default_strategy_cap);

/// One agent's view of a system: its strategies (rows) against every joint
/// strategy of the others (columns), with the satisfied set of every play.
class agent_analysis {
public:
  agent_analysis(const mas& d, agent_id i, analysis_options options = {});

  const mas& system() const noexcept { return *mas_; }
  const value_base& values() const noexcept { return mas_->values; }
  agent_id agent() const noexcept { return agent_; }
  const analysis_options& options() const noexcept { return options_; }

  std::size_t strategy_count() const noexcept { return strategies_.size(); }
  std::size_t opponent_count() const noexcept { return opponents_.size(); }
  const strategy_tree& strategy(std::size_t row) const { return strategies_.at(row); }
  const joint_strategy& opponents(std::size_t col) const { return opponents_.at(col); }
  const decision_tree& tree() const { return player_->tree(agent_); }

  joint_strategy profile(std::size_t row, std::size_t col) const;
  history play(std::size_t row, std::size_t col) const;
  const outcome_set& outcome(std::size_t row, std::size_t col) const { return outcomes_.at(row * cols_ + col); }
  const score_vector& score(std::size_t row, std::size_t col) const { return scores_.at(row * cols_ + col); }

  /// First strategy (in enumeration order) with the best outcome against `col`.
  std::size_t best_response(std::size_t col) const { return best_.at(col); }

  /// First strategy with exactly the same outcome row as `row`.
  std::size_t representative(std::size_t row) const { return representative_.at(row); }

  std::size_t index_of(const strategy_tree& s) const;
  std::size_t opponent_index_of(const joint_strategy& others) const;
  /// (row, col) of a joint strategy for all agents.
  std::pair<std::size_t, std::size_t> locate(const joint_strategy& js) const;

private:
  std::shared_ptr<const mas> mas_;
  agent_id agent_;
  analysis_options options_;
  std::unique_ptr<player> player_;
  std::vector<strategy_tree> strategies_;
  std::vector<joint_strategy> opponents_;
  std::vector<agent_id> others_;
  std::size_t cols_ = 0;
  std::vector<outcome_set> outcomes_;
  std::vector<score_vector> scores_;
  std::vector<std::size_t> best_;
  std::vector<std::size_t> representative_;
};

/// σ ≤_D σ′: `by` does at least as well as `s` against every opponent strategy.
bool is_weakly_dominated_by(const agent_analysis& a, std::size_t s, std::size_t by);

/// No strategy weakly dominates `s` without being weakly dominated by it.
bool non_dominated(const agent_analysis& a, std::size_t s);
std::vector<std::size_t> non_dominated_set(const agent_analysis& a);

struct regret_witness {
  std::size_t opponent = 0;
  std::size_t alternative = 0;
  outcome_set regret;
};

struct anticipated_regret_result {
  /// ⪯-least relative regret; `score` identifies its equivalence class.
  outcome_set regret;
  score_vector score;
  std::size_t opponent = 0;
  std::size_t alternative = 0;
  /// Every (opponent, alternative) pair in the least class, when requested.
  std::vector<regret_witness> ties;
};

/// Worst relative regret of `s` over all opponent strategies and all own
/// alternatives. Uses the best response in each column: the difference against
/// it is the worst one there.
anticipated_regret_result anticipated_regret(const agent_analysis& a, std::size_t s, bool all_witnesses = false);

/// Strategies whose anticipated regret is ⪯-maximal.
std::vector<std::size_t> regret_minimising_set(const agent_analysis& a);

// Convenience forms taking strategies directly. Each builds an analysis.
bool is_weakly_dominated_by(const mas& d, agent_id i, const strategy_tree& s, const strategy_tree& by);
bool non_dominated(const mas& d, agent_id i, const strategy_tree& s);
anticipated_regret_result anticipated_regret(const mas& d, agent_id i, const strategy_tree& s);
std::vector<strategy_tree> regret_minimising_set(const mas& d, agent_id i);

} // namespace mvresp
