#include "mvresp/ltlf.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "mvresp/error.hpp"

namespace mvresp {

history prefix(const history& h, std::size_t length) {
  if (length > h.horizon()) {
    throw precondition_error("prefix length " + std::to_string(length) +
                             " exceeds horizon " + std::to_string(h.horizon()));
  }
  history out;
  out.states.assign(h.states.begin(), h.states.begin() + static_cast<std::ptrdiff_t>(length + 1));
  out.actions.assign(h.actions.begin(), h.actions.begin() + static_cast<std::ptrdiff_t>(length));
  return out;
}

} // namespace mvresp

namespace mvresp::ltlf {

struct formula::node {
  ltlf::kind kind;
  std::string name;
  std::vector<formula> children;
  std::size_t depth;
};

std::size_t arity(kind k) noexcept {
  switch (k) {
  case kind::atom:
  case kind::top:
  case kind::bottom:
    return 0;
  case kind::negation:
  case kind::next:
  case kind::eventually:
  case kind::henceforth:
    return 1;
  case kind::conjunction:
  case kind::disjunction:
  case kind::implication:
  case kind::until:
    return 2;
  }
  return 0;
}

bool is_core(kind k) noexcept {
  switch (k) {
  case kind::atom:
  case kind::top:
  case kind::negation:
  case kind::conjunction:
  case kind::next:
  case kind::until:
    return true;
  default:
    return false;
  }
}

formula::formula() : formula(top()) {}

formula formula::make(ltlf::kind k, std::vector<formula> children, std::string name) {
  std::size_t depth = 0;
  for (const auto& c : children) {
    depth = std::max(depth, c.depth() + 1);
  }
  return formula(std::make_shared<const node>(node{k, std::move(name), std::move(children), depth}));
}

formula formula::atom(std::string name) { return make(kind::atom, {}, std::move(name)); }

formula formula::top() {
  static const formula t = make(kind::top, {});
  return t;
}

formula formula::bottom() {
  static const formula b = make(kind::bottom, {});
  return b;
}

formula formula::negation(formula f) { return make(kind::negation, {std::move(f)}); }
formula formula::next(formula f) { return make(kind::next, {std::move(f)}); }
formula formula::eventually(formula f) { return make(kind::eventually, {std::move(f)}); }
formula formula::henceforth(formula f) { return make(kind::henceforth, {std::move(f)}); }

formula formula::conjunction(formula lhs, formula rhs) {
  return make(kind::conjunction, {std::move(lhs), std::move(rhs)});
}
formula formula::disjunction(formula lhs, formula rhs) {
  return make(kind::disjunction, {std::move(lhs), std::move(rhs)});
}
formula formula::implication(formula lhs, formula rhs) {
  return make(kind::implication, {std::move(lhs), std::move(rhs)});
}
formula formula::until(formula lhs, formula rhs) {
  return make(kind::until, {std::move(lhs), std::move(rhs)});
}

kind formula::kind() const noexcept { return node_->kind; }
const std::string& formula::name() const noexcept { return node_->name; }
std::size_t formula::child_count() const noexcept { return node_->children.size(); }
const formula& formula::child(std::size_t i) const { return node_->children.at(i); }
std::size_t formula::depth() const noexcept { return node_->depth; }

bool operator==(const formula& a, const formula& b) {
  if (a.node_ == b.node_) {
    return true;
  }
  if (a.kind() != b.kind() || a.name() != b.name() || a.child_count() != b.child_count()) {
    return false;
  }
  for (std::size_t i = 0; i < a.child_count(); ++i) {
    if (!(a.child(i) == b.child(i))) {
      return false;
    }
  }
  return true;
}

formula negate(const formula& f) {
  if (f.kind() == kind::negation) {
    return f.child(0);
  }
  return formula::negation(f);
}

formula normalise(const formula& f) {
  switch (f.kind()) {
  case kind::atom:
  case kind::top:
    return f;
  case kind::bottom:
    return formula::negation(formula::top());
  case kind::negation:
    return negate(normalise(f.child(0)));
  case kind::conjunction:
    return formula::conjunction(normalise(f.child(0)), normalise(f.child(1)));
  case kind::disjunction:
    return negate(formula::conjunction(negate(normalise(f.child(0))), negate(normalise(f.child(1)))));
  case kind::implication:
    return negate(formula::conjunction(normalise(f.child(0)), negate(normalise(f.child(1)))));
  case kind::next:
    return formula::next(normalise(f.child(0)));
  case kind::until:
    return formula::until(normalise(f.child(0)), normalise(f.child(1)));
  case kind::henceforth:
    return negate(formula::until(formula::top(), negate(normalise(f.child(0)))));
  case kind::eventually:
    // !G!a = !!(true U !!a)
    return formula::until(formula::top(), normalise(f.child(0)));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Concrete syntax

namespace {

enum class token_kind { ident, kw_true, kw_false, kw_x, kw_u, kw_f, kw_g, bang, amp, bar, arrow, lparen, rparen, end };

struct token {
  token_kind kind;
  std::string text;
  std::size_t pos;
};

std::vector<token> tokenize(std::string_view s) {
  std::vector<token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        ++i;
      }
      std::string word(s.substr(start, i - start));
      token_kind k = token_kind::ident;
      if (word == "true") k = token_kind::kw_true;
      else if (word == "false") k = token_kind::kw_false;
      else if (word == "X") k = token_kind::kw_x;
      else if (word == "U") k = token_kind::kw_u;
      else if (word == "F") k = token_kind::kw_f;
      else if (word == "G") k = token_kind::kw_g;
      out.push_back({k, std::move(word), start});
      continue;
    }
    switch (c) {
    case '!': out.push_back({token_kind::bang, "!", start}); ++i; continue;
    case '&': out.push_back({token_kind::amp, "&", start}); ++i; continue;
    case '|': out.push_back({token_kind::bar, "|", start}); ++i; continue;
    case '(': out.push_back({token_kind::lparen, "(", start}); ++i; continue;
    case ')': out.push_back({token_kind::rparen, ")", start}); ++i; continue;
    case '-':
      if (i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({token_kind::arrow, "->", start});
        i += 2;
        continue;
      }
      break;
    default:
      break;
    }
    throw parse_error("unknown operator '" + std::string(1, c) + "'", start);
  }
  out.push_back({token_kind::end, "", s.size()});
  return out;
}

class parser {
public:
  explicit parser(std::string_view text) : tokens_(tokenize(text)) {}

  formula parse() {
    formula f = implication();
    if (peek().kind == token_kind::rparen) {
      throw parse_error("unbalanced parentheses: unmatched ')'", peek().pos);
    }
    if (peek().kind != token_kind::end) {
      throw parse_error("unexpected '" + peek().text + "'", peek().pos);
    }
    return f;
  }

private:
  const token& peek() const { return tokens_[pos_]; }
  const token& advance() { return tokens_[pos_++]; }
  bool accept(token_kind k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }

  formula implication() {
    formula lhs = disjunction();
    if (accept(token_kind::arrow)) {
      return formula::implication(std::move(lhs), implication());
    }
    return lhs;
  }

  formula disjunction() {
    formula lhs = conjunction();
    while (accept(token_kind::bar)) {
      lhs = formula::disjunction(std::move(lhs), conjunction());
    }
    return lhs;
  }

  formula conjunction() {
    formula lhs = until();
    while (accept(token_kind::amp)) {
      lhs = formula::conjunction(std::move(lhs), until());
    }
    return lhs;
  }

  formula until() {
    formula lhs = unary();
    if (accept(token_kind::kw_u)) {
      return formula::until(std::move(lhs), until());
    }
    return lhs;
  }

  formula unary() {
    switch (peek().kind) {
    case token_kind::bang: advance(); return formula::negation(unary());
    case token_kind::kw_x: advance(); return formula::next(unary());
    case token_kind::kw_f: advance(); return formula::eventually(unary());
    case token_kind::kw_g: advance(); return formula::henceforth(unary());
    default: return primary();
    }
  }

  formula primary() {
    const token& t = advance();
    switch (t.kind) {
    case token_kind::ident: return formula::atom(t.text);
    case token_kind::kw_true: return formula::top();
    case token_kind::kw_false: return formula::bottom();
    case token_kind::lparen: {
      formula inner = implication();
      if (!accept(token_kind::rparen)) {
        throw parse_error("unbalanced parentheses: expected ')'", peek().pos);
      }
      return inner;
    }
    case token_kind::end: throw parse_error("unexpected end of input", t.pos);
    case token_kind::rparen: throw parse_error("unbalanced parentheses: unmatched ')'", t.pos);
    default: throw parse_error("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<token> tokens_;
  std::size_t pos_ = 0;
};

void print_into(const formula& f, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print_into(f.child(0), out);
    out += op;
    print_into(f.child(1), out);
    out += ')';
  };
  auto unary = [&](const char* op) {
    out += op;
    print_into(f.child(0), out);
  };
  switch (f.kind()) {
  case kind::atom: out += f.name(); break;
  case kind::top: out += "true"; break;
  case kind::bottom: out += "false"; break;
  case kind::negation: unary("!"); break;
  case kind::next: unary("X "); break;
  case kind::eventually: unary("F "); break;
  case kind::henceforth: unary("G "); break;
  case kind::conjunction: binary(" & "); break;
  case kind::disjunction: binary(" | "); break;
  case kind::implication: binary(" -> "); break;
  case kind::until: binary(" U "); break;
  }
}

void collect_atoms(const formula& f, std::set<std::string>& out) {
  if (f.kind() == kind::atom) {
    out.insert(f.name());
  }
  for (std::size_t i = 0; i < f.child_count(); ++i) {
    collect_atoms(f.child(i), out);
  }
}

} // namespace

formula parse_surface(std::string_view text) { return parser(text).parse(); }

formula parse_formula(std::string_view text) { return normalise(parse_surface(text)); }

std::string print(const formula& f) {
  std::string out;
  print_into(f, out);
  return out;
}

std::vector<std::string> atoms(const formula& f) {
  std::set<std::string> s;
  collect_atoms(f, s);
  return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// Evaluation

trace_evaluator::trace_evaluator(std::span<const state> trace) : trace_(trace) {
  if (trace_.empty()) {
    throw precondition_error("cannot evaluate over an empty trace");
  }
}

bool trace_evaluator::eval_at(const formula& f, std::size_t t) {
  if (t > last_instant()) {
    throw precondition_error("instant " + std::to_string(t) + " outside 0.." +
                             std::to_string(last_instant()));
  }
  return column(f)[t] != 0;
}

const std::vector<char>& trace_evaluator::column(const formula& f) {
  if (auto it = memo_.find(f.node_id()); it != memo_.end()) {
    return it->second;
  }
  const std::size_t n = trace_.size();
  const std::size_t last = n - 1;
  std::vector<char> c(n, 0);
  switch (f.kind()) {
  case kind::atom:
    for (std::size_t t = 0; t < n; ++t) c[t] = trace_[t].count(f.name()) ? 1 : 0;
    break;
  case kind::top:
    std::fill(c.begin(), c.end(), 1);
    break;
  case kind::bottom:
    break;
  case kind::negation: {
    const auto& a = column(f.child(0));
    for (std::size_t t = 0; t < n; ++t) c[t] = !a[t];
    break;
  }
  case kind::conjunction:
  case kind::disjunction:
  case kind::implication: {
    const auto& a = column(f.child(0));
    const auto& b = column(f.child(1));
    for (std::size_t t = 0; t < n; ++t) {
      if (f.kind() == kind::conjunction) c[t] = a[t] && b[t];
      else if (f.kind() == kind::disjunction) c[t] = a[t] || b[t];
      else c[t] = !a[t] || b[t];
    }
    break;
  }
  case kind::next: {
    const auto& a = column(f.child(0));
    for (std::size_t t = 0; t < last; ++t) c[t] = a[t + 1];
    break;
  }
  case kind::until: {
    const auto& a = column(f.child(0));
    const auto& b = column(f.child(1));
    c[last] = b[last];
    for (std::size_t t = last; t-- > 0;) c[t] = b[t] || (a[t] && c[t + 1]);
    break;
  }
  case kind::eventually: {
    const auto& a = column(f.child(0));
    c[last] = a[last];
    for (std::size_t t = last; t-- > 0;) c[t] = a[t] || c[t + 1];
    break;
  }
  case kind::henceforth: {
    const auto& a = column(f.child(0));
    c[last] = a[last];
    for (std::size_t t = last; t-- > 0;) c[t] = a[t] && c[t + 1];
    break;
  }
  }
  // Holding a copy of `f` keeps the node alive, so its address cannot be reused
  // by another formula while this evaluator exists.
  pinned_.push_back(f);
  return memo_.emplace(f.node_id(), std::move(c)).first->second;
}

bool eval_at(const formula& f, const history& h, std::size_t t) {
  trace_evaluator ev(h.states);
  return ev.eval_at(f, t);
}

bool holds(const formula& f, const history& h) { return eval_at(f, h, 0); }

} // namespace mvresp::ltlf
