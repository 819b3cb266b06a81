#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mvresp/history.hpp"

namespace mvresp::ltlf {

/// Core kinds come first; the rest are sugar that `normalise` rewrites away.
enum class kind {
  atom,
  top,
  negation,
  conjunction,
  next,
  until,
  bottom,
  disjunction,
  implication,
  eventually,
  henceforth,
};

std::size_t arity(kind k) noexcept;
bool is_core(kind k) noexcept;

/// Immutable LTLf syntax tree. Copies share structure.
class formula {
public:
  formula();

  static formula atom(std::string name);
  static formula top();
  static formula bottom();
  static formula negation(formula f);
  static formula conjunction(formula lhs, formula rhs);
  static formula disjunction(formula lhs, formula rhs);
  static formula implication(formula lhs, formula rhs);
  static formula next(formula f);
  static formula until(formula lhs, formula rhs);
  static formula eventually(formula f);
  static formula henceforth(formula f);

  ltlf::kind kind() const noexcept;
  const std::string& name() const noexcept;
  std::size_t child_count() const noexcept;
  const formula& child(std::size_t i) const;

  /// Operator nesting depth; atoms and constants have depth 0.
  std::size_t depth() const noexcept;

  /// Identity of the shared node, used as a memo key.
  const void* node_id() const noexcept { return node_.get(); }

  friend bool operator==(const formula& a, const formula& b);

private:
  struct node;
  explicit formula(std::shared_ptr<const node> n) : node_(std::move(n)) {}
  static formula make(ltlf::kind k, std::vector<formula> children, std::string name = {});

  std::shared_ptr<const node> node_;
};

/// Rewrites into the core kinds: G a = !(true U !a), F a = !G!a, or/implies via
/// De Morgan, false = !true. Double negations introduced by the rewriting cancel,
/// so F a becomes (true U a).
formula normalise(const formula& f);

/// Negation that cancels an existing top-level negation.
formula negate(const formula& f);

/// Parses the concrete syntax, keeping derived operators as written.
formula parse_surface(std::string_view text);

/// Parses and normalises.
formula parse_formula(std::string_view text);

/// Fully parenthesised concrete syntax; parse_formula(print(f)) == normalise(f).
std::string print(const formula& f);

/// Propositions mentioned by `f`, sorted and unique.
std::vector<std::string> atoms(const formula& f);

/// Memoised satisfaction over one fixed trace. Each subformula is evaluated once
/// for every instant, bottom-up from the end of the trace.
class trace_evaluator {
public:
  explicit trace_evaluator(std::span<const state> trace);

  /// `t` ranges over 0..k where the trace has k+1 states.
  bool eval_at(const formula& f, std::size_t t);

  std::size_t last_instant() const noexcept { return trace_.size() - 1; }

private:
  const std::vector<char>& column(const formula& f);

  std::span<const state> trace_;
  std::unordered_map<const void*, std::vector<char>> memo_;
  std::vector<formula> pinned_;
};

bool eval_at(const formula& f, const history& h, std::size_t t);

/// Satisfaction at instant 0.
bool holds(const formula& f, const history& h);

} // namespace mvresp::ltlf
