#include "mvresp/responsibility.hpp"

#include <algorithm>
#include <functional>

#include "mvresp/error.hpp"

namespace mvresp {

std::string to_string(responsibility_kind k) {
  return k == responsibility_kind::passive ? "passive" : "inexcusable";
}

std::optional<responsibility_kind> parse_responsibility_kind(const std::string& s) {
  if (s == "passive") return responsibility_kind::passive;
  if (s == "inexcusable") return responsibility_kind::inexcusable;
  return std::nullopt;
}

namespace {

bool at_most_empty(const outcome_set& x, const value_base& vb) {
  return score_leq(score(x, vb), score_vector(vb.level_count(), 0));
}

attribution make_attribution(const agent_analysis& a, responsibility_kind kind, std::size_t row, std::size_t col,
                             std::size_t via, outcome_set x) {
  attribution out;
  out.kind = kind;
  out.score = score(x, a.values());
  out.outcome = std::move(x);
  out.via = via;
  out.context_row = row;
  out.context_col = col;
  return out;
}

std::vector<attribution> distinct_sorted(std::vector<attribution> all) {
  std::vector<attribution> out;
  for (auto& x : all) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const auto& y) { return y.outcome == x.outcome; });
    if (!seen) out.push_back(std::move(x));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    if (l.score != r.score) return l.score < r.score;
    return l.outcome < r.outcome;
  });
  return out;
}

void require_negative(const agent_analysis& a, std::size_t row, std::size_t col, std::size_t via) {
  if (!at_most_empty(responsible_via(a, row, col, via), a.values())) {
    throw precondition_error("excuses are only defined for responsibility at most as good as the empty set");
  }
}

} // namespace

outcome_set responsible_via(const agent_analysis& a, std::size_t row, std::size_t col, std::size_t via) {
  return a.outcome(row, col).minus(a.outcome(via, col));
}

std::vector<attribution> passive_attributions(const agent_analysis& a, std::size_t row, std::size_t col) {
  std::vector<attribution> all;
  for (std::size_t via = 0; via < a.strategy_count(); ++via) {
    all.push_back(make_attribution(a, responsibility_kind::passive, row, col, via, responsible_via(a, row, col, via)));
  }
  return distinct_sorted(std::move(all));
}

std::vector<std::size_t> accusations(const agent_analysis& a, std::size_t row, std::size_t col,
                                     const ltlf::formula& w) {
  if (!ltlf::holds(w, a.play(row, col))) {
    throw precondition_error("the formula is not satisfied by the actual play");
  }
  std::vector<std::size_t> out;
  for (std::size_t via = 0; via < a.strategy_count(); ++via) {
    if (!ltlf::holds(w, a.play(via, col))) out.push_back(via);
  }
  return out;
}

liability liable(const agent_analysis& a, std::size_t row, std::size_t col, const ltlf::formula& w) {
  if (!ltlf::holds(w, a.play(row, col))) return {};
  for (std::size_t via : accusations(a, row, col, w)) {
    if (is_weakly_dominated_by(a, row, via)) return {true, via};
  }
  return {};
}

bool has_advantage_somewhere(const agent_analysis& a, std::size_t row, std::size_t via) {
  for (std::size_t c = 0; c < a.opponent_count(); ++c) {
    if (a.score(via, c) < a.score(row, c)) return true;
  }
  return false;
}

std::optional<excuse> weak_excuse(const agent_analysis& a, std::size_t row, std::size_t col, std::size_t via) {
  require_negative(a, row, col, via);
  for (std::size_t c = 0; c < a.opponent_count(); ++c) {
    if (a.score(via, c) < a.score(row, c)) return excuse{excuse_kind::weak, c};
  }
  return std::nullopt;
}

std::optional<excuse> strong_excuse(const agent_analysis& a, std::size_t row, std::size_t col, std::size_t via) {
  require_negative(a, row, col, via);
  const value_base& vb = a.values();
  const score_vector zero(vb.level_count(), 0);
  const score_vector loss = score(a.outcome(via, col).minus(a.outcome(row, col)), vb);
  for (std::size_t c = 0; c < a.opponent_count(); ++c) {
    const score_vector gain = score(a.outcome(row, c).minus(a.outcome(via, c)), vb);
    if (zero < gain && score_leq(loss, gain)) return excuse{excuse_kind::strong, c};
  }
  return std::nullopt;
}

std::vector<attribution> inexcusable_attributions(const agent_analysis& a, std::size_t row, std::size_t col) {
  std::vector<attribution> all;
  for (std::size_t via = 0; via < a.strategy_count(); ++via) {
    outcome_set x = responsible_via(a, row, col, via);
    if (at_most_empty(x, a.values()) && !has_advantage_somewhere(a, row, via)) {
      all.push_back(make_attribution(a, responsibility_kind::inexcusable, row, col, via, std::move(x)));
    }
  }
  return distinct_sorted(std::move(all));
}

anticipation anticipate(const agent_analysis& a, std::size_t row, responsibility_kind kind, bool all_witnesses) {
  const value_base& vb = a.values();
  // An accuser admits no weak excuse exactly when it weakly dominates `row`;
  // every passive accuser is admissible. Within a column the worst difference
  // comes from the best admissible accuser, the first one in enumeration order
  // on ties, which is the order a direct scan would report.
  std::vector<std::size_t> accusers;
  if (kind == responsibility_kind::inexcusable) {
    for (std::size_t via = 0; via < a.strategy_count(); ++via) {
      if (!has_advantage_somewhere(a, row, via)) accusers.push_back(via);
    }
  }
  auto best_in = [&](std::size_t c) {
    if (kind == responsibility_kind::passive) return a.best_response(c);
    std::size_t best = accusers.front();
    for (std::size_t via : accusers) {
      if (a.score(best, c) < a.score(via, c)) best = via;
    }
    return best;
  };

  anticipation out;
  bool first = true;
  score_vector best_score;
  for (std::size_t c = 0; c < a.opponent_count(); ++c) {
    const std::size_t via = best_in(c);
    // The worst difference is the one against the best accuser; comparing
    // (own - accuser) scores orders the differences the same way.
    score_vector gap = a.score(row, c);
    for (std::size_t n = 0; n < gap.size(); ++n) gap[n] -= a.score(via, c)[n];
    if (first || gap < best_score) {
      best_score = std::move(gap);
      out.opponent = c;
      out.accuser = via;
      first = false;
    }
  }
  out.worst = responsible_via(a, row, out.opponent, out.accuser);
  out.score = score(out.worst, vb);
  if (all_witnesses) {
    for (std::size_t c = 0; c < a.opponent_count(); ++c) {
      for (std::size_t via = 0; via < a.strategy_count(); ++via) {
        if (kind == responsibility_kind::inexcusable && has_advantage_somewhere(a, row, via)) continue;
        outcome_set x = responsible_via(a, row, c, via);
        if (score(x, vb) == out.score) out.ties.push_back(make_attribution(a, kind, row, c, via, std::move(x)));
      }
    }
  }
  return out;
}

std::vector<std::size_t> responsibility_minimising_set(const agent_analysis& a, responsibility_kind kind) {
  std::vector<score_vector> scores(a.strategy_count());
  for (std::size_t s = 0; s < a.strategy_count(); ++s) {
    const std::size_t rep = a.representative(s);
    scores[s] = rep == s ? anticipate(a, s, kind).score : scores[rep];
  }
  const score_vector best = *std::max_element(scores.begin(), scores.end());
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < scores.size(); ++s) {
    if (scores[s] == best) out.push_back(s);
  }
  return out;
}

std::vector<std::size_t> recommend(const agent_analysis& a) {
  const auto passive = responsibility_minimising_set(a, responsibility_kind::passive);
  const auto inexcusable = responsibility_minimising_set(a, responsibility_kind::inexcusable);
  std::vector<std::size_t> out;
  std::set_intersection(passive.begin(), passive.end(), inexcusable.begin(), inexcusable.end(),
                        std::back_inserter(out));
  return out;
}

outcome_set naive_union_diagnostic(const agent_analysis& a, std::size_t row) {
  outcome_set out(a.values().size());
  for (std::size_t c = 0; c < a.opponent_count(); ++c) {
    for (std::size_t via = 0; via < a.strategy_count(); ++via) {
      for (const auto& l : responsible_via(a, row, c, via).literals()) {
        if (l.sign == polarity::violated) out.set(l.value, polarity::violated);
      }
    }
  }
  return out;
}

std::optional<std::vector<std::size_t>> strong_preference_cycle(const agent_analysis& a) {
  const std::size_t n = a.strategy_count();
  std::vector<std::vector<std::size_t>> edges(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t) continue;
      for (std::size_t c = 0; c < a.opponent_count(); ++c) {
        if (a.score(s, c) < a.score(t, c) && !strong_excuse(a, s, c, t)) {
          edges[s].push_back(t);
          break;
        }
      }
    }
  }
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> mark(n, 0);
  std::vector<std::size_t> stack;
  std::optional<std::vector<std::size_t>> cycle;
  std::function<void(std::size_t)> visit = [&](std::size_t s) {
    mark[s] = 1;
    stack.push_back(s);
    for (std::size_t t : edges[s]) {
      if (cycle) return;
      if (mark[t] == 1) {
        auto start = std::find(stack.begin(), stack.end(), t);
        cycle = std::vector<std::size_t>(start, stack.end());
        return;
      }
      if (mark[t] == 0) visit(t);
    }
    stack.pop_back();
    mark[s] = 2;
  };
  for (std::size_t s = 0; s < n && !cycle; ++s) {
    if (mark[s] == 0) visit(s);
  }
  return cycle;
}

outcome_set responsible_via(const mas& d, const joint_strategy& js, agent_id i, const strategy_tree& via) {
  const agent_analysis a(d, i);
  const auto [row, col] = a.locate(js);
  return responsible_via(a, row, col, a.index_of(via));
}

liability liable(const mas& d, const joint_strategy& js, agent_id i, const ltlf::formula& w) {
  const agent_analysis a(d, i);
  const auto [row, col] = a.locate(js);
  return liable(a, row, col, w);
}

anticipation anticipate(const mas& d, agent_id i, const strategy_tree& s, responsibility_kind kind) {
  const agent_analysis a(d, i);
  return anticipate(a, a.index_of(s), kind);
}

} // namespace mvresp
