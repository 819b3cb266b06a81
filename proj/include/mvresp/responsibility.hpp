#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mvresp/ltlf.hpp"
#include "mvresp/strategy.hpp"

namespace mvresp {

enum class responsibility_kind { passive, inexcusable };
enum class excuse_kind { weak, strong };

std::string to_string(responsibility_kind k);
std::optional<responsibility_kind> parse_responsibility_kind(const std::string& s);

/// The agent is `kind`-responsible for `outcome` in the play of the profile
/// (context_row, context_col), witnessed by the alternative `via`:
///   outcome = satset(play(context)) \ satset(play(via, context_{-i})).
struct attribution {
  responsibility_kind kind = responsibility_kind::passive;
  outcome_set outcome;
  score_vector score;
  std::size_t via = 0;
  std::size_t context_row = 0;
  std::size_t context_col = 0;
};

/// An opponent joint strategy under which the chosen strategy does strictly
/// better than the accusing one (weak) or gains at least what it lost (strong).
struct excuse {
  excuse_kind kind = excuse_kind::weak;
  std::size_t witness = 0;
};

outcome_set responsible_via(const agent_analysis& a, std::size_t row, std::size_t col, std::size_t via);

/// Distinct outcome sets the agent is passively responsible for, sorted by
/// score then set; each carries the first alternative that witnesses it.
std::vector<attribution> passive_attributions(const agent_analysis& a, std::size_t row, std::size_t col);

/// Alternatives whose play violates `w`. Throws precondition_error when the
/// actual play does not satisfy `w`.
std::vector<std::size_t> accusations(const agent_analysis& a, std::size_t row, std::size_t col,
                                     const ltlf::formula& w);

struct liability {
  bool liable = false;
  std::optional<std::size_t> via;
};

/// Liable for `w`: `w` holds and some accusation also weakly dominates the
/// chosen strategy.
liability liable(const agent_analysis& a, std::size_t row, std::size_t col, const ltlf::formula& w);

/// Defined only when responsible_via(row, col, via) ⪯ ∅; otherwise throws
/// precondition_error.
std::optional<excuse> weak_excuse(const agent_analysis& a, std::size_t row, std::size_t col, std::size_t via);

/// Witness whose gain G (chosen over accuser) satisfies G ≻ ∅ and L ⪯ G, where
/// L is what the chosen strategy lost against the accuser in the actual play.
std::optional<excuse> strong_excuse(const agent_analysis& a, std::size_t row, std::size_t col, std::size_t via);

/// Whether some opponent strategy makes `row` strictly better than `via`. This
/// is the weak-excuse condition without its precondition.
bool has_advantage_somewhere(const agent_analysis& a, std::size_t row, std::size_t via);

/// Passive attributions whose witness admits no weak excuse. An attribution
/// strictly better than ∅ never qualifies: the actual opponent strategy is
/// itself a witness of the chosen strategy's advantage.
std::vector<attribution> inexcusable_attributions(const agent_analysis& a, std::size_t row, std::size_t col);

struct anticipation {
  outcome_set worst;
  score_vector score;
  std::size_t opponent = 0;
  std::size_t accuser = 0;
  /// All (opponent, accuser) pairs in the worst class, when requested.
  std::vector<attribution> ties;
};

/// The ⪯-least outcome the agent could be `kind`-responsible for after playing
/// `row`, over every opponent joint strategy. Ties go to the first opponent
/// strategy, then the first accuser, in enumeration order.
anticipation anticipate(const agent_analysis& a, std::size_t row, responsibility_kind kind,
                        bool all_witnesses = false);

/// Strategies whose anticipated responsibility is ⪯-maximal.
std::vector<std::size_t> responsibility_minimising_set(const agent_analysis& a, responsibility_kind kind);

/// Strategies minimising both passive and inexcusable responsibility.
std::vector<std::size_t> recommend(const agent_analysis& a);

/// Violated values the agent is passively responsible for in at least one
/// play of `row`, merged across plays. Not a sound notion of anticipated
/// responsibility; kept to show how merging overstates it.
outcome_set naive_union_diagnostic(const agent_analysis& a, std::size_t row);

/// Strategies s -> t where, in some play of s that is worse than t's play
/// against the same opponents, no strong excuse exists for s over t. Returns
/// a cycle in that relation when there is one.
std::optional<std::vector<std::size_t>> strong_preference_cycle(const agent_analysis& a);

// Convenience forms taking strategies directly. Each builds an analysis.
outcome_set responsible_via(const mas& d, const joint_strategy& js, agent_id i, const strategy_tree& via);
liability liable(const mas& d, const joint_strategy& js, agent_id i, const ltlf::formula& w);
anticipation anticipate(const mas& d, agent_id i, const strategy_tree& s, responsibility_kind kind);

} // namespace mvresp
