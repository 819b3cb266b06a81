#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvresp/error.hpp"
#include "mvresp/ltlf.hpp"
#include "mvresp/oracle.hpp"
#include "support.hpp"

using namespace mvresp;
using ltlf::formula;
using ltlf::kind;

namespace {

std::vector<state> trace(std::initializer_list<state> states) { return {states}; }

bool at(const std::string& text, const std::vector<state>& tr, std::size_t t = 0) {
  ltlf::trace_evaluator ev(tr);
  return ev.eval_at(ltlf::parse_formula(text), t);
}

std::size_t error_position(const std::string& text) {
  try {
    ltlf::parse_formula(text);
  } catch (const parse_error& e) {
    return e.position();
  }
  FAIL("no parse error for " << text);
  return 0;
}

} // namespace

TEST_CASE("surface syntax keeps derived operators") {
  const formula f = ltlf::parse_surface("F p1");
  CHECK(f.kind() == kind::eventually);
  CHECK(f.child(0) == formula::atom("p1"));
  CHECK(ltlf::parse_formula("F p1") == formula::until(formula::top(), formula::atom("p1")));
}

TEST_CASE("henceforth normalises to a negated until") {
  const formula p = formula::atom("p");
  CHECK(ltlf::parse_formula("G p") == formula::negation(formula::until(formula::top(), formula::negation(p))));
}

TEST_CASE("until is right associative") {
  CHECK(ltlf::parse_formula("p U (q U r)") == ltlf::parse_formula("p U q U r"));
  CHECK_FALSE(ltlf::parse_formula("(p U q) U r") == ltlf::parse_formula("p U q U r"));
}

TEST_CASE("precedence") {
  CHECK(ltlf::parse_surface("!p U q") == ltlf::parse_surface("(!p) U q"));
  CHECK(ltlf::parse_surface("p & q | r") == ltlf::parse_surface("(p & q) | r"));
  CHECK(ltlf::parse_surface("p | q & r") == ltlf::parse_surface("p | (q & r)"));
  CHECK(ltlf::parse_surface("p -> q -> r") == ltlf::parse_surface("p -> (q -> r)"));
  CHECK(ltlf::parse_surface("X p U q") == ltlf::parse_surface("(X p) U q"));
  CHECK(ltlf::parse_surface("p U q & r") == ltlf::parse_surface("(p U q) & r"));
  CHECK(ltlf::parse_surface("G F p") == formula::henceforth(formula::eventually(formula::atom("p"))));
}

TEST_CASE("constants and keywords") {
  CHECK(ltlf::parse_surface("true").kind() == kind::top);
  CHECK(ltlf::parse_surface("false").kind() == kind::bottom);
  CHECK(ltlf::parse_formula("false") == formula::negation(formula::top()));
  CHECK(ltlf::parse_formula("!!p") == formula::atom("p"));
  CHECK(ltlf::atoms(ltlf::parse_surface("F (b & a) U G a")) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(ltlf::parse_formula("p &"), parse_error);
  CHECK(error_position("p &") == 3);
  CHECK(error_position("p # q") == 2);
  CHECK(error_position("(p & q") == 6);
  CHECK(error_position("p & q)") == 5);
  CHECK(error_position("") == 0);
  CHECK_THROWS_WITH_AS(ltlf::parse_formula("p # q"), doctest::Contains("unknown operator"), parse_error);
  CHECK_THROWS_WITH_AS(ltlf::parse_formula("(p"), doctest::Contains("unbalanced"), parse_error);
  CHECK_THROWS_WITH_AS(ltlf::parse_formula("p)"), doctest::Contains("unbalanced"), parse_error);
  CHECK_THROWS_AS(ltlf::parse_formula("p q"), parse_error);
  CHECK_THROWS_AS(ltlf::parse_formula("U p"), parse_error);
}

TEST_CASE("next is false at the last instant") {
  const auto tr = trace({{"p"}, {"p"}, {"p"}});
  CHECK(at("X p", tr, 1));
  CHECK_FALSE(at("X p", tr, 2));
  CHECK_FALSE(at("X true", tr, 2));
}

TEST_CASE("henceforth over an all-true trace") {
  CHECK(at("G p", trace({{"p"}, {"p"}, {"p"}})));
  CHECK_FALSE(at("G p", trace({{"p"}, {}, {"p"}})));
}

TEST_CASE("until on a short trace") {
  CHECK(at("p U q", trace({{"p"}, {"p"}, {"q"}})));
  CHECK_FALSE(at("p U q", trace({{"p"}, {}, {"q"}})));
  CHECK(at("!(p U q)", trace({{"p"}, {"p"}, {"p"}})));
}

TEST_CASE("eventually") {
  history h;
  h.states = trace({{}, {"p"}, {}});
  h.actions = {{0}, {0}};
  CHECK(ltlf::holds(ltlf::parse_formula("F p"), h));
  h.states = trace({{}, {}, {}});
  CHECK_FALSE(ltlf::holds(ltlf::parse_formula("F p"), h));
}

TEST_CASE("instants outside the trace are rejected") {
  const auto tr = trace({{}, {}});
  ltlf::trace_evaluator ev(tr);
  CHECK_THROWS_AS(ev.eval_at(formula::atom("p"), 2), precondition_error);
}

TEST_CASE("printing is parseable and stable") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> props{"p", "q", "r"};
  for (int n = 0; n < 500; ++n) {
    const formula f = test::random_formula(rng, props, 4);
    const std::string text = ltlf::print(f);
    CAPTURE(text);
    CHECK(ltlf::parse_surface(text) == f);
    CHECK(ltlf::parse_formula(text) == ltlf::normalise(f));
    CHECK(ltlf::print(ltlf::parse_surface(text)) == text);
  }
}

TEST_CASE("normalisation keeps the meaning and uses only core operators") {
  std::mt19937_64 rng(12);
  const std::vector<std::string> props{"p", "q"};
  std::function<bool(const formula&)> core = [&](const formula& f) {
    if (!ltlf::is_core(f.kind())) return false;
    for (std::size_t i = 0; i < f.child_count(); ++i) {
      if (!core(f.child(i))) return false;
    }
    return true;
  };
  for (int n = 0; n < 1000; ++n) {
    const formula f = test::random_formula(rng, props, 4);
    const formula g = ltlf::normalise(f);
    CHECK(core(g));
    const auto tr = test::random_trace(rng, props, 6);
    for (std::size_t t = 0; t < tr.size(); ++t) {
      CHECK(oracle::naive_eval(f, tr, t) == oracle::naive_eval(g, tr, t));
    }
  }
}

TEST_CASE("memoised evaluation agrees with direct recursion") {
  std::mt19937_64 rng(13);
  const std::vector<std::string> props{"p", "q", "r"};
  for (int n = 0; n < 1000; ++n) {
    const formula f = test::random_formula(rng, props, 4);
    const auto tr = test::random_trace(rng, props, 6);
    ltlf::trace_evaluator ev(tr);
    for (std::size_t t = 0; t < tr.size(); ++t) {
      CAPTURE(ltlf::print(f));
      CHECK(ev.eval_at(f, t) == oracle::naive_eval(f, tr, t));
    }
  }
}

TEST_CASE("negate cancels a leading negation") {
  const formula p = formula::atom("p");
  CHECK(ltlf::negate(p) == formula::negation(p));
  CHECK(ltlf::negate(formula::negation(p)) == p);
}
