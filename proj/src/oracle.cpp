#include "mvresp/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "mvresp/error.hpp"
#include "mvresp/responsibility.hpp"
#include "mvresp/scenario_io.hpp"
#include "mvresp/strategy.hpp"

namespace mvresp::oracle {

using ltlf::formula;
using ltlf::kind;
using nlohmann::json;

void validate(const instance_caps& caps) {
  auto positive = [](std::uint64_t v, const char* field) {
    if (v == 0) throw precondition_error(std::string("cap '") + field + "' must be positive");
  };
  positive(caps.agents, "agents");
  positive(caps.propositions, "propositions");
  positive(caps.actions, "actions");
  positive(caps.horizon, "horizon");
  positive(caps.depth, "depth");
  positive(caps.values_per_level, "values_per_level");
  positive(caps.levels, "levels");
  positive(caps.strategy_ceiling, "strategy_ceiling");
  if (caps.propositions > 16) throw precondition_error("cap 'propositions' is at most 16");
}

namespace {

class draw {
public:
  explicit draw(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool coin() { return below(2) == 1; }

private:
  std::mt19937_64 rng_;
};

formula random_literal(draw& r, const std::vector<std::string>& props, std::size_t depth) {
  formula a = formula::atom(props[r.below(props.size())]);
  return depth >= 1 && r.coin() ? formula::negation(a) : a;
}

formula template_formula(draw& r, const std::vector<std::string>& props, std::size_t depth) {
  // A negated literal costs one level of depth.
  auto lit = [&](std::size_t room) { return random_literal(r, props, room); };
  std::vector<std::function<formula()>> pool;
  pool.push_back([&] { return lit(depth); });
  if (depth >= 1) {
    pool.push_back([&] { return formula::eventually(lit(depth - 1)); });
    pool.push_back([&] { return formula::henceforth(lit(depth - 1)); });
    pool.push_back([&] { return formula::next(lit(depth - 1)); });
    pool.push_back([&] { return formula::until(lit(depth - 1), lit(depth - 1)); });
  }
  if (depth >= 2) {
    pool.push_back([&] { return formula::eventually(formula::conjunction(lit(depth - 2), lit(depth - 2))); });
    pool.push_back([&] { return formula::henceforth(formula::disjunction(lit(depth - 2), lit(depth - 2))); });
    pool.push_back([&] { return formula::eventually(formula::henceforth(lit(depth - 2))); });
    pool.push_back([&] { return formula::henceforth(formula::eventually(lit(depth - 2))); });
  }
  return pool[r.below(pool.size())]();
}

formula random_formula(draw& r, const std::vector<std::string>& props, std::size_t depth) {
  if (depth == 0 || r.below(4) == 0) {
    const std::size_t pick = r.below(props.size() + 2);
    if (pick == props.size()) return formula::top();
    if (pick == props.size() + 1) return formula::bottom();
    return formula::atom(props[pick]);
  }
  auto sub = [&] { return random_formula(r, props, depth - 1); };
  switch (r.below(9)) {
  case 0: return formula::negation(sub());
  case 1: return formula::conjunction(sub(), sub());
  case 2: return formula::disjunction(sub(), sub());
  case 3: return formula::implication(sub(), sub());
  case 4: return formula::next(sub());
  case 5: return formula::until(sub(), sub());
  case 6: return formula::eventually(sub());
  case 7: return formula::henceforth(sub());
  default: return formula::atom(props[r.below(props.size())]);
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

} // namespace

mas random_mas(std::uint64_t seed, const instance_caps& caps) {
  validate(caps);
  // Strategies per agent: actions^(decision points), points = sum of B^t.
  std::uint64_t branching = 1;
  for (std::size_t a = 1; a < caps.agents; ++a) branching = saturating_mul(branching, caps.actions);
  std::uint64_t nodes = 0;
  std::uint64_t layer = 1;
  for (std::size_t t = 0; t < caps.horizon; ++t) {
    nodes = std::min<std::uint64_t>(UINT64_MAX / 2, nodes + layer);
    layer = saturating_mul(layer, branching);
  }
  std::uint64_t strategies = 1;
  for (std::uint64_t n = 0; n < nodes && strategies <= caps.strategy_ceiling; ++n) {
    strategies = saturating_mul(strategies, caps.actions);
  }
  if (strategies > caps.strategy_ceiling) {
    throw precondition_error("caps cannot be satisfied: agents have more than " +
                             std::to_string(caps.strategy_ceiling) + " strategies");
  }

  draw r(seed);
  mas d;
  mts& m = d.system;
  for (std::size_t a = 0; a < caps.agents; ++a) m.agents.push_back("ag" + std::to_string(a + 1));
  for (std::size_t x = 0; x < caps.actions; ++x) m.actions.push_back("a" + std::to_string(x + 1));
  const std::size_t prop_count = r.between(1, caps.propositions);
  for (std::size_t p = 0; p < prop_count; ++p) m.propositions.push_back("p" + std::to_string(p + 1));
  for (std::size_t a = 0; a < caps.agents; ++a) {
    std::vector<action_id> all(caps.actions);
    for (std::size_t x = 0; x < caps.actions; ++x) all[x] = x;
    m.availability.push_back(all);
  }

  auto subset = [&](std::uint64_t mask) {
    state s;
    for (std::size_t p = 0; p < prop_count; ++p) {
      if (mask >> p & 1) s.insert(m.propositions[p]);
    }
    return s;
  };
  const std::uint64_t state_count = std::uint64_t{1} << prop_count;
  d.initial = subset(r.below(state_count));
  d.horizon = caps.horizon;
  const auto joints = joint_actions(m);
  for (std::uint64_t mask = 0; mask < state_count; ++mask) {
    for (const auto& j : joints) {
      transition_rule rule;
      rule.from = subset(mask);
      rule.joint.assign(j.begin(), j.end());
      rule.to = subset(r.below(state_count));
      m.rules.push_back(std::move(rule));
    }
  }

  std::vector<formula> taken;
  auto clashes = [&](const formula& f) {
    for (const auto& g : taken) {
      if (f == g || f == ltlf::negate(g)) return true;
    }
    return false;
  };
  const std::size_t level_count = r.between(1, caps.levels);
  std::size_t next_name = 1;
  for (std::size_t n = 0; n < level_count; ++n) {
    const std::size_t size = r.between(1, caps.values_per_level);
    std::vector<value> level;
    for (std::size_t v = 0; v < size; ++v) {
      value val;
      for (int attempt = 0;; ++attempt) {
        if (attempt == 1000) throw precondition_error("caps cannot be satisfied: too few distinct formulas");
        val.surface = caps.pure_random ? random_formula(r, m.propositions, caps.depth)
                                       : template_formula(r, m.propositions, caps.depth);
        val.formula = ltlf::normalise(val.surface);
        if (!clashes(val.formula)) break;
      }
      val.name = "w" + std::to_string(next_name++);
      taken.push_back(val.formula);
      level.push_back(std::move(val));
    }
    d.values.add_level(std::move(level));
  }
  return d;
}

bool naive_eval(const formula& f, std::span<const state> trace, std::size_t t) {
  const std::size_t last = trace.size() - 1;
  switch (f.kind()) {
  case kind::atom: return trace[t].count(f.name()) > 0;
  case kind::top: return true;
  case kind::bottom: return false;
  case kind::negation: return !naive_eval(f.child(0), trace, t);
  case kind::conjunction: return naive_eval(f.child(0), trace, t) && naive_eval(f.child(1), trace, t);
  case kind::disjunction: return naive_eval(f.child(0), trace, t) || naive_eval(f.child(1), trace, t);
  case kind::implication: return !naive_eval(f.child(0), trace, t) || naive_eval(f.child(1), trace, t);
  case kind::next: return t < last && naive_eval(f.child(0), trace, t + 1);
  case kind::until:
    for (std::size_t u = t; u <= last; ++u) {
      if (naive_eval(f.child(1), trace, u)) return true;
      if (!naive_eval(f.child(0), trace, u)) return false;
    }
    return false;
  case kind::eventually:
    for (std::size_t u = t; u <= last; ++u) {
      if (naive_eval(f.child(0), trace, u)) return true;
    }
    return false;
  case kind::henceforth:
    for (std::size_t u = t; u <= last; ++u) {
      if (!naive_eval(f.child(0), trace, u)) return false;
    }
    return true;
  }
  return false;
}

std::vector<int> naive_score(const literal_set& x, const value_base& vb) {
  std::vector<int> out(vb.level_count(), 0);
  for (const auto& [v, sign] : x) out[vb.level_of(v)] += sign;
  return out;
}

bool naive_leq(const literal_set& x, const literal_set& y, const value_base& vb) {
  const auto sx = naive_score(x, vb);
  const auto sy = naive_score(y, vb);
  for (std::size_t n = 0; n < sx.size(); ++n) {
    if (sx[n] != sy[n]) return sx[n] < sy[n];
  }
  return true;
}

literal_set set_minus(const literal_set& x, const literal_set& y) {
  literal_set out;
  std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::inserter(out, out.end()));
  return out;
}

literal_set to_literal_set(const outcome_set& x) {
  literal_set out;
  for (const auto& l : x.literals()) out.insert({l.value, l.sign == polarity::satisfied ? 1 : -1});
  return out;
}

bool check_report::passed() const {
  return std::all_of(claims.begin(), claims.end(), [](const auto& c) { return c.passed; });
}

const claim_result* check_report::find(const std::string& claim) const {
  for (const auto& c : claims) {
    if (c.name == claim) return &c;
  }
  return nullptr;
}

json check_report::to_json() const {
  json out;
  out["instance"] = instance;
  out["skipped"] = skipped;
  if (skipped) out["skip_reason"] = skip_reason;
  out["passed"] = passed();
  out["strong_cycle"] = strong_cycle;
  json claims_json = json::object();
  for (const auto& c : claims) {
    json entry{{"passed", c.passed}, {"checks", c.checks}};
    if (!c.passed) {
      entry["detail"] = c.detail;
      entry["counterexample"] = c.counterexample;
    }
    claims_json[c.name] = entry;
  }
  out["claims"] = claims_json;
  return out;
}

namespace {

const std::vector<std::string> claim_names = {
    "outcomes",           "order",              "passive_attribution",   "inexcusable_attribution",
    "weak_acceptance",    "strong_acceptance",  "excuses",               "strong_implies_weak",
    "liability_equivalence", "liability",       "anticipation_floor",    "anticipation",
    "passive_minimisers", "inexcusable_minimisers", "recommend_nonempty", "minimising_sets",
    "difference_order",   "strong_cycle_agrees",
};

std::string show(const literal_set& x, const value_base& vb) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, sign] : x) {
    out += first ? "" : ", ";
    out += (sign > 0 ? "+" : "-") + vb.at(v).name;
    first = false;
  }
  return out + "}";
}

/// Everything the checker knows about one agent's game, from first principles.
class agent_checker {
public:
  agent_checker(const mas& d, agent_id i, const check_options& options, check_report& report,
                const std::string& instance)
      : d_(d), vb_(d.values), i_(i), options_(options), report_(report), instance_(instance),
        a_(d, i, analysis_options{.jobs = options.jobs}) {
    rows_ = a_.strategy_count();
    cols_ = a_.opponent_count();
    const player p(d);
    truth_.resize(rows_ * cols_);
    sets_.resize(rows_ * cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        const history h = p.play(a_.profile(r, c));
        auto& t = truth_[r * cols_ + c];
        for (value_id v = 0; v < vb_.size(); ++v) {
          t.push_back(naive_eval(vb_.at(v).surface, h.states, 0));
          sets_[r * cols_ + c].insert({v, t.back() ? 1 : -1});
        }
      }
    }
  }

  void run() {
    check_outcomes();
    check_profiles();
    check_anticipation();
  }

  const std::vector<literal_set>& sets() const { return sets_; }

private:
  const literal_set& out(std::size_t r, std::size_t c) const { return sets_[r * cols_ + c]; }
  bool holds(std::size_t r, std::size_t c, value_id v) const { return truth_[r * cols_ + c][v]; }
  bool leq(const literal_set& x, const literal_set& y) const { return naive_leq(x, y, vb_); }
  bool less(const literal_set& x, const literal_set& y) const { return !leq(y, x); }

  claim_result& claim(const std::string& name) {
    for (auto& c : report_.claims) {
      if (c.name == name) return c;
    }
    throw std::logic_error("unknown claim " + name);
  }

  void verdict(const std::string& name, bool ok, std::size_t r, std::optional<std::size_t> c,
               std::optional<std::size_t> via, const std::string& detail) {
    claim_result& cl = claim(name);
    ++cl.checks;
    if (ok || !cl.passed) return;
    cl.passed = false;
    cl.detail = "agent " + d_.system.agents[i_] + ": " + detail;
    json annex;
    annex["claim"] = name;
    annex["agent"] = d_.system.agents[i_];
    annex["strategy"] = "#" + std::to_string(r);
    if (c) {
      json opponents = json::object();
      for (const auto& t : a_.opponents(*c).trees()) {
        opponents[d_.system.agents[t.owner]] =
            "#" + std::to_string(strategy_index(d_, decision_tree(d_, t.owner), t));
      }
      annex["opponents"] = opponents;
    }
    if (via) annex["via"] = "#" + std::to_string(*via);
    annex["detail"] = detail;
    annex["reading"] = options_.vacuous_positive ? "vacuous_positive" : "literal";
    cl.counterexample = {{"scenario", scenario_to_json(d_, instance_)}, {"claims", annex}};
  }

  bool dominated(std::size_t s, std::size_t by) const {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (!leq(out(s, c), out(by, c))) return false;
    }
    return true;
  }

  bool weak_bf(std::size_t r, std::size_t via) const {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (less(out(via, c), out(r, c))) return true;
    }
    return false;
  }

  bool strong_bf(std::size_t r, std::size_t col, std::size_t via) const {
    const literal_set loss = set_minus(out(via, col), out(r, col));
    for (std::size_t c = 0; c < cols_; ++c) {
      const literal_set gain = set_minus(out(r, c), out(via, c));
      if (less({}, gain) && leq(loss, gain)) return true;
    }
    return false;
  }

  bool inexcusable_bf(std::size_t r, std::size_t col, std::size_t via) const {
    if (options_.vacuous_positive && less({}, set_minus(out(r, col), out(via, col)))) return true;
    return !weak_bf(r, via);
  }

  void check_outcomes() {
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        const literal_set lib = to_literal_set(a_.outcome(r, c));
        verdict("outcomes", lib == out(r, c), r, c, std::nullopt,
                "library outcome " + show(lib, vb_) + " but play satisfies " + show(out(r, c), vb_));
      }
    }
  }

  // Consistency and completeness of one attribution against its witness.
  bool sound(const literal_set& x, std::size_t r, std::size_t c, std::size_t via) const {
    for (value_id v = 0; v < vb_.size(); ++v) {
      const bool here = holds(r, c, v);
      const bool there = holds(via, c, v);
      if (x.count({v, 1}) && !(here && !there)) return false;
      if (x.count({v, -1}) && !(!here && there)) return false;
      if (!x.count({v, 1}) && !x.count({v, -1}) && here != there) return false;
    }
    return true;
  }

  void check_attributions(const std::string& name, const std::vector<attribution>& lib, std::size_t r,
                          std::size_t c, const std::set<literal_set>& expected) {
    std::set<literal_set> got;
    for (const auto& x : lib) {
      const literal_set xs = to_literal_set(x.outcome);
      got.insert(xs);
      verdict(name, sound(xs, r, c, x.via), r, c, x.via,
              "attribution " + show(xs, vb_) + " is not consistent and complete with its witness");
    }
    verdict(name, got == expected, r, c, std::nullopt,
            "library reports " + std::to_string(got.size()) + " distinct sets, expected " +
                std::to_string(expected.size()));
  }

  void check_profiles() {
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        std::set<literal_set> passive;
        std::set<literal_set> inexcusable;
        for (std::size_t via = 0; via < rows_; ++via) {
          const literal_set x = set_minus(out(r, c), out(via, c));
          passive.insert(x);
          if (inexcusable_bf(r, c, via)) inexcusable.insert(x);
          if (!leq(x, {})) continue;
          const bool weak = weak_bf(r, via);
          const bool strong = strong_bf(r, c, via);
          verdict("excuses", weak_excuse(a_, r, c, via).has_value() == weak, r, c, via,
                  "weak excuse disagrees with the definition");
          verdict("excuses", strong_excuse(a_, r, c, via).has_value() == strong, r, c, via,
                  "strong excuse disagrees with the definition");
          verdict("strong_implies_weak", !strong || weak, r, c, via, "strong excuse that is not a weak excuse");
        }
        check_attributions("passive_attribution", passive_attributions(a_, r, c), r, c, passive);
        const auto lib_inexcusable = inexcusable_attributions(a_, r, c);
        check_attributions("inexcusable_attribution", lib_inexcusable, r, c, inexcusable);
        for (const auto& x : lib_inexcusable) {
          if (!leq(to_literal_set(x.outcome), {})) continue;
          verdict("weak_acceptance", !weak_excuse(a_, r, c, x.via), r, c, x.via,
                  "inexcusable attribution admits a weak excuse");
          verdict("strong_acceptance", !strong_excuse(a_, r, c, x.via), r, c, x.via,
                  "inexcusable attribution admits a strong excuse");
        }
        for (value_id w = 0; w < vb_.size(); ++w) {
          if (holds(r, c, w)) continue;
          std::optional<std::size_t> accuser;
          for (std::size_t via = 0; via < rows_ && !accuser; ++via) {
            if (holds(via, c, w) && dominated(r, via)) accuser = via;
          }
          const bool member = std::any_of(inexcusable.begin(), inexcusable.end(),
                                          [&](const literal_set& x) { return x.count({w, -1}) > 0; });
          verdict("liability_equivalence", accuser.has_value() == member, r, c, accuser,
                  std::string(accuser ? "liable" : "not liable") + " for not " + vb_.at(w).name + " but " +
                      (member ? "" : "no ") + "inexcusable attribution contains -" + vb_.at(w).name);
          const liability lib = liable(a_, r, c, ltlf::negate(vb_.at(w).formula));
          verdict("liability", lib.liable == accuser.has_value(), r, c, lib.via,
                  "library liability disagrees with the definition for " + vb_.at(w).name);
        }
      }
    }
  }

  void check_anticipation() {
    std::vector<literal_set> passive(rows_), inexcusable(rows_), regret(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      bool first_p = true, first_i = true;
      for (std::size_t c = 0; c < cols_; ++c) {
        for (std::size_t via = 0; via < rows_; ++via) {
          const literal_set x = set_minus(out(r, c), out(via, c));
          if (first_p || less(x, passive[r])) passive[r] = x;
          first_p = false;
          if (inexcusable_bf(r, c, via) && (first_i || less(x, inexcusable[r]))) {
            inexcusable[r] = x;
            first_i = false;
          }
        }
      }
      // Relative regret from every play of r to every play sharing its opponents.
      bool first_r = true;
      for (std::size_t c = 0; c < cols_; ++c) {
        for (std::size_t alt = 0; alt < rows_; ++alt) {
          const literal_set x = set_minus(out(r, c), out(alt, c));
          if (first_r || less(x, regret[r])) regret[r] = x;
          first_r = false;
        }
      }
      verdict("anticipation_floor", leq(passive[r], {}) && leq(inexcusable[r], {}), r, std::nullopt, std::nullopt,
              "anticipated responsibility is better than the empty set");

      const anticipation ap = anticipate(a_, r, responsibility_kind::passive);
      const anticipation ai = anticipate(a_, r, responsibility_kind::inexcusable);
      const anticipated_regret_result ar = anticipated_regret(a_, r);
      auto same_class = [&](const outcome_set& x, const literal_set& y) {
        const literal_set xs = to_literal_set(x);
        return leq(xs, y) && leq(y, xs);
      };
      verdict("anticipation", same_class(ap.worst, passive[r]), r, ap.opponent, ap.accuser,
              "passive anticipation " + format_outcome(ap.worst, vb_) + " vs " + show(passive[r], vb_));
      verdict("anticipation", same_class(ai.worst, inexcusable[r]), r, ai.opponent, ai.accuser,
              "inexcusable anticipation " + format_outcome(ai.worst, vb_) + " vs " + show(inexcusable[r], vb_));
      verdict("anticipation", same_class(ar.regret, regret[r]), r, ar.opponent, ar.alternative,
              "anticipated regret " + format_outcome(ar.regret, vb_) + " vs " + show(regret[r], vb_));
      verdict("anticipation", to_literal_set(ap.worst) == set_minus(out(r, ap.opponent), out(ap.accuser, ap.opponent)),
              r, ap.opponent, ap.accuser, "passive witness does not produce the reported set");
    }

    auto maximal = [&](const std::vector<literal_set>& worst) {
      std::vector<std::size_t> out;
      for (std::size_t r = 0; r < rows_; ++r) {
        bool best = true;
        for (std::size_t s = 0; s < rows_ && best; ++s) best = leq(worst[s], worst[r]);
        if (best) out.push_back(r);
      }
      return out;
    };
    const auto passive_min = maximal(passive);
    const auto inexcusable_min = maximal(inexcusable);
    const auto regret_min = maximal(regret);
    std::vector<std::size_t> undominated;
    for (std::size_t r = 0; r < rows_; ++r) {
      bool ok = true;
      for (std::size_t s = 0; s < rows_ && ok; ++s) ok = !(dominated(r, s) && !dominated(s, r));
      if (ok) undominated.push_back(r);
    }
    std::vector<std::size_t> both;
    std::set_intersection(passive_min.begin(), passive_min.end(), inexcusable_min.begin(), inexcusable_min.end(),
                          std::back_inserter(both));

    verdict("passive_minimisers", passive_min == regret_min, 0, std::nullopt, std::nullopt,
            "passive-minimising and regret-minimising strategies differ");
    verdict("inexcusable_minimisers", inexcusable_min == undominated, 0, std::nullopt, std::nullopt,
            "inexcusable-minimising and non-dominated strategies differ");
    verdict("recommend_nonempty", !both.empty(), 0, std::nullopt, std::nullopt, "no strategy minimises both kinds");
    verdict("minimising_sets", responsibility_minimising_set(a_, responsibility_kind::passive) == passive_min, 0,
            std::nullopt, std::nullopt, "library passive-minimising set");
    verdict("minimising_sets", responsibility_minimising_set(a_, responsibility_kind::inexcusable) == inexcusable_min,
            0, std::nullopt, std::nullopt, "library inexcusable-minimising set");
    verdict("minimising_sets", regret_minimising_set(a_) == regret_min, 0, std::nullopt, std::nullopt,
            "library regret-minimising set");
    verdict("minimising_sets", non_dominated_set(a_) == undominated, 0, std::nullopt, std::nullopt,
            "library non-dominated set");
    verdict("minimising_sets", recommend(a_) == both, 0, std::nullopt, std::nullopt, "library recommendation");

    // Preference "s should have been t": some play of s is worse than t's and
    // admits no strong excuse. Cycle iff some strategy reaches itself.
    std::vector<std::vector<char>> reach(rows_, std::vector<char>(rows_, 0));
    for (std::size_t s = 0; s < rows_; ++s) {
      for (std::size_t t = 0; t < rows_; ++t) {
        for (std::size_t c = 0; c < cols_ && s != t && !reach[s][t]; ++c) {
          reach[s][t] = less(out(s, c), out(t, c)) && !strong_bf(s, c, t);
        }
      }
    }
    for (std::size_t m = 0; m < rows_; ++m) {
      for (std::size_t s = 0; s < rows_; ++s) {
        for (std::size_t t = 0; t < rows_; ++t) {
          if (reach[s][m] && reach[m][t]) reach[s][t] = 1;
        }
      }
    }
    bool cycle = false;
    for (std::size_t s = 0; s < rows_; ++s) cycle = cycle || reach[s][s];
    verdict("strong_cycle_agrees", strong_preference_cycle(a_).has_value() == cycle, 0, std::nullopt, std::nullopt,
            "library cycle detection disagrees");
    report_.strong_cycle = report_.strong_cycle || cycle;
  }

  const mas& d_;
  const value_base& vb_;
  agent_id i_;
  check_options options_;
  check_report& report_;
  std::string instance_;
  agent_analysis a_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<char>> truth_;
  std::vector<literal_set> sets_;
};

void check_order(const mas& d, const std::vector<literal_set>& sets, check_report& report) {
  const value_base& vb = d.values;
  auto find = [&](const std::string& name) -> claim_result& {
    return *std::find_if(report.claims.begin(), report.claims.end(), [&](const auto& c) { return c.name == name; });
  };
  claim_result& order = find("order");
  claim_result& corollary = find("difference_order");
  auto fail = [&](claim_result& c, const std::string& detail) {
    if (!c.passed) return;
    c.passed = false;
    c.detail = detail;
    json annex{{"claim", c.name}, {"detail", detail}};
    c.counterexample = {{"scenario", scenario_to_json(d, report.instance)}, {"claims", annex}};
  };
  auto lib = [&](const literal_set& x) {
    outcome_set o(vb.size());
    for (const auto& [v, sign] : x) o.set(v, sign > 0 ? polarity::satisfied : polarity::violated);
    return o;
  };
  for (const auto& x : sets) {
    for (const auto& y : sets) {
      ++order.checks;
      if (leq(lib(x), lib(y), vb) != naive_leq(x, y, vb) ||
          strictly_less(lib(x), lib(y), vb) != !naive_leq(y, x, vb)) {
        fail(order, "library order disagrees on " + show(x, vb) + " and " + show(y, vb));
      }
      for (const auto& z : sets) {
        ++corollary.checks;
        const literal_set xz = set_minus(x, z);
        const literal_set yz = set_minus(y, z);
        if (naive_leq(x, y, vb) != naive_leq(xz, yz, vb)) {
          fail(corollary, "removing " + show(z, vb) + " changes the order of " + show(x, vb) + " and " + show(y, vb));
        }
        const auto sxz = naive_score(xz, vb);
        const auto sx = naive_score(x, vb);
        const auto sz = naive_score(z, vb);
        for (std::size_t n = 0; n < sx.size(); ++n) {
          if (2 * sxz[n] != sx[n] - sz[n]) fail(corollary, "score of a difference is not half the difference");
        }
      }
    }
  }
}

} // namespace

check_report check_instance(const mas& d, const std::string& instance, const check_options& options) {
  check_report report;
  report.instance = instance;
  for (const auto& name : claim_names) {
    claim_result c;
    c.name = name;
    report.claims.push_back(std::move(c));
  }
  std::set<literal_set> sets;
  try {
    for (agent_id i = 0; i < d.system.agent_count(); ++i) {
      agent_checker checker(d, i, options, report, instance);
      checker.run();
      sets.insert(checker.sets().begin(), checker.sets().end());
    }
  } catch (const cap_exceeded& e) {
    report.skipped = true;
    report.skip_reason = e.what();
    report.claims.clear();
    return report;
  }
  check_order(d, std::vector<literal_set>(sets.begin(), sets.end()), report);
  return report;
}

std::size_t fuzz_summary::passed() const {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.skipped && r.passed(); }));
}

std::size_t fuzz_summary::failed() const {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.skipped && !r.passed(); }));
}

std::size_t fuzz_summary::skipped() const {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(), [](const auto& r) { return r.skipped; }));
}

json caps_to_json(const instance_caps& caps) {
  return {{"agents", caps.agents},
          {"propositions", caps.propositions},
          {"actions", caps.actions},
          {"horizon", caps.horizon},
          {"depth", caps.depth},
          {"values_per_level", caps.values_per_level},
          {"levels", caps.levels},
          {"strategy_ceiling", caps.strategy_ceiling},
          {"pure_random", caps.pure_random}};
}

json fuzz_summary::to_json() const {
  json claims = json::object();
  std::uint64_t cycles = 0;
  json failures = json::array();
  for (const auto& r : reports) {
    cycles += r.strong_cycle;
    for (const auto& c : r.claims) {
      json& entry = claims[c.name];
      if (entry.is_null()) entry = {{"passed", 0}, {"failed", 0}, {"checks", 0}};
      entry[c.passed ? "passed" : "failed"] = entry[c.passed ? "passed" : "failed"].get<std::uint64_t>() + 1;
      entry["checks"] = entry["checks"].get<std::uint64_t>() + c.checks;
    }
    if (!r.skipped && !r.passed()) failures.push_back(r.to_json());
  }
  return {{"seed", seed},
          {"caps", caps_to_json(caps)},
          {"instances", reports.size()},
          {"passed", passed()},
          {"failed", failed()},
          {"skipped", skipped()},
          {"strong_cycles", cycles},
          {"claims", claims},
          {"failures", failures}};
}

fuzz_summary fuzz(std::size_t n, const instance_caps& caps, std::uint64_t seed, unsigned jobs,
                  const check_options& options) {
  if (n == 0) throw precondition_error("fuzz needs at least one instance");
  validate(caps);
  std::mt19937_64 master(seed);
  std::vector<std::uint64_t> seeds(n);
  for (auto& s : seeds) s = master();

  fuzz_summary out;
  out.seed = seed;
  out.caps = caps;
  out.reports.resize(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        const mas d = random_mas(seeds[k], caps);
        out.reports[k] = check_instance(d, "seed=" + std::to_string(seeds[k]), options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

} // namespace mvresp::oracle
