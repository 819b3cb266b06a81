// One line per acceptance criterion; exit status 1 when any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "mvresp/oracle.hpp"
#include "support.hpp"

using namespace mvresp;
using test::col_of;
using test::row_of;
using test::show;

namespace {

// Pinned limits.
constexpr double table_seconds = 1.0;
constexpr double fuzz_seconds = 300.0;
constexpr std::size_t fuzz_instances = 100;
constexpr std::uint64_t fuzz_seed = 1;
constexpr int ltlf_cases = 10'000;
constexpr std::size_t ltlf_depth = 4;
constexpr std::size_t trace_length = 5;
constexpr int order_bases = 5;
constexpr int order_subsets = 1'000;
constexpr int order_triples = 200'000;

struct check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t) {
  return std::chrono::duration<double>(clock_type::now() - t).count();
}

bool report(int n, const std::string& name, const check& c, const std::string& extra = "") {
  const bool ok = c.failures.empty();
  std::cout << (ok ? "PASS" : "FAIL") << " " << n << " " << name;
  if (!extra.empty()) std::cout << " (" << extra << ")";
  std::cout << "\n";
  for (const auto& f : c.failures) std::cout << "     " << f << "\n";
  return ok;
}

std::set<std::string> nonempty_passive(const loaded_scenario& s) {
  const agent_analysis a(s.system, 0);
  std::set<std::string> out;
  const auto r = row_of(s, a, "sA");
  const auto c = col_of(s, a, "sB");
  for (const auto& x : passive_attributions(a, r, c)) {
    if (!x.outcome.empty()) out.insert(show(x.outcome, a));
  }
  return out;
}

void timed(check& c, const std::string& table, const std::function<void(check&)>& body) {
  const auto start = clock_type::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, table + ": " + e.what());
  }
  const double t = seconds_since(start);
  c.expect(t < table_seconds, table + " took " + std::to_string(t) + " s");
}

bool tables() {
  check c;
  timed(c, "table 1", [](check& c) {
    using S = std::set<std::string>;
    c.expect(nonempty_passive(test::fixture("table1a")) == S{"{-w1}"}, "table 1a");
    c.expect(nonempty_passive(test::fixture("table1b")) == S{"{-w1}", "{-w2}"}, "table 1b");
    c.expect(nonempty_passive(test::fixture("table1c")) == S{"{-w1}", "{-w2}", "{-w1, -w2}"}, "table 1c");
  });
  timed(c, "table 3", [](check& c) {
    const auto s = test::fixture("table3");
    const agent_analysis a(s.system, 0);
    for (const auto* label : {"sA", "sA'"}) {
      const auto r = row_of(s, a, label);
      const auto p = anticipate(a, r, responsibility_kind::passive);
      c.expect(show(p.worst, a) == "{-w1, -w2}" && p.score == score_vector{-2},
               std::string("table 3 passive ") + label);
      c.expect(anticipate(a, r, responsibility_kind::inexcusable).worst.empty(),
               std::string("table 3 inexcusable ") + label);
      // Passive attribution despite a weak excuse.
      c.expect(weak_excuse(a, r, p.opponent, p.accuser).has_value(), std::string("table 3 acceptance ") + label);
    }
  });
  timed(c, "table 4", [](check& c) {
    const auto s = test::fixture("table4");
    const agent_analysis a(s.system, 0);
    auto r = [&](const char* l) { return row_of(s, a, l); };
    auto k = [&](const char* l) { return col_of(s, a, l); };
    c.expect(!strong_excuse(a, r("sA'"), k("sB"), r("sA")), "table 4 sA' over sA");
    c.expect(!strong_excuse(a, r("sA''"), k("sB'"), r("sA'")), "table 4 sA'' over sA'");
    c.expect(!strong_excuse(a, r("sA"), k("sB''"), r("sA''")), "table 4 sA over sA''");
    const auto cycle = strong_preference_cycle(a);
    c.expect(cycle && cycle->size() == 3, "table 4 cycle");
  });
  timed(c, "table 5", [](check& c) {
    const auto s = test::fixture("table5");
    const agent_analysis a(s.system, 0);
    const auto sA = row_of(s, a, "sA");
    const auto sA1 = row_of(s, a, "sA'");
    bool strict = is_weakly_dominated_by(a, sA1, sA);
    for (std::size_t k = 0; k < a.opponent_count(); ++k) strict = strict && a.score(sA1, k) < a.score(sA, k);
    c.expect(strict, "table 5 strict dominance");
    c.expect(show(naive_union_diagnostic(a, sA), a) == "{-w3, -w4, -w5}", "table 5 union of sA");
    c.expect(show(naive_union_diagnostic(a, sA1), a) == "{-w4, -w5}", "table 5 union of sA'");
  });
  timed(c, "table 6", [](check& c) {
    const auto s = test::fixture("table6");
    const agent_analysis a(s.system, 0);
    const auto sA = row_of(s, a, "sA");
    const auto sA1 = row_of(s, a, "sA'");
    c.expect(is_weakly_dominated_by(a, sA1, sA) && !is_weakly_dominated_by(a, sA, sA1), "table 6 dominance");
    const auto l = liable(a, sA1, col_of(s, a, "sB'"), ltlf::parse_formula("!F p1"));
    c.expect(l.liable && l.via == sA, "table 6 liability");
    c.expect(recommend(a) == std::vector<std::size_t>{sA}, "table 6 recommend");
  });
  return report(1, "table goldens", c);
}

bool theorems() {
  check c;
  const unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto start = clock_type::now();
  const auto summary = oracle::fuzz(fuzz_instances, oracle::instance_caps{}, fuzz_seed, jobs);
  const double t = seconds_since(start);
  c.expect(summary.passed() == fuzz_instances,
           std::to_string(summary.passed()) + " of " + std::to_string(fuzz_instances) + " instances passed, " +
               std::to_string(summary.skipped()) + " skipped");
  for (const auto& r : summary.reports) {
    for (const auto& cl : r.claims) {
      if (!cl.passed) c.expect(false, r.instance + ": " + cl.name + ": " + cl.detail);
    }
  }
  c.expect(t < fuzz_seconds, "took " + std::to_string(t) + " s");
  std::ostringstream extra;
  extra << fuzz_instances << " instances, seed " << fuzz_seed << ", " << static_cast<int>(t) << " s";
  return report(2, "theorem suite", c, extra.str());
}

bool evaluator() {
  check c;
  std::mt19937_64 rng(3);
  const std::vector<std::string> props{"p", "q", "r"};
  int mismatches = 0;
  for (int n = 0; n < ltlf_cases; ++n) {
    const auto f = test::random_formula(rng, props, ltlf_depth);
    const auto tr = test::random_trace(rng, props, trace_length);
    ltlf::trace_evaluator ev(tr);
    const auto core = ltlf::normalise(f);
    for (std::size_t t = 0; t < tr.size(); ++t) {
      if (ev.eval_at(core, t) != oracle::naive_eval(f, tr, t)) {
        if (++mismatches <= 3) c.expect(false, "mismatch on " + ltlf::print(f));
      }
    }
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
  return report(3, "LTLf evaluator", c, std::to_string(ltlf_cases) + " cases");
}

bool order_axioms() {
  check c;
  std::mt19937_64 rng(4);
  long violations = 0;
  for (int b = 0; b < order_bases; ++b) {
    value_base vb;
    std::size_t next = 1;
    for (std::size_t l = 0, levels = 1 + rng() % 3; l < levels; ++l) {
      std::vector<value> level;
      for (std::size_t k = 0, size = 1 + rng() % 4; k < size; ++k) {
        value v;
        v.name = "w" + std::to_string(next++);
        v.surface = ltlf::parse_surface("F " + v.name);
        v.formula = ltlf::normalise(v.surface);
        level.push_back(v);
      }
      vb.add_level(level);
    }
    std::vector<outcome_set> sets(order_subsets, outcome_set(vb.size()));
    for (auto& x : sets) {
      for (value_id v = 0; v < vb.size(); ++v) x.set(v, static_cast<polarity>(static_cast<int>(rng() % 3) - 1));
    }
    for (const auto& x : sets) {
      if (!leq(x, x, vb) || strictly_less(x, x, vb)) ++violations;
      for (const auto& y : sets) {
        if (!leq(x, y, vb) && !leq(y, x, vb)) ++violations;
        if (strictly_less(x, y, vb) && strictly_less(y, x, vb)) ++violations;
      }
    }
    for (int n = 0; n < order_triples; ++n) {
      const auto& x = sets[rng() % sets.size()];
      const auto& y = sets[rng() % sets.size()];
      const auto& z = sets[rng() % sets.size()];
      if (leq(x, y, vb) && leq(y, z, vb) && !leq(x, z, vb)) ++violations;
    }
  }
  c.expect(violations == 0, std::to_string(violations) + " violations");
  return report(4, "order axioms", c,
                std::to_string(order_bases) + " value bases x " + std::to_string(order_subsets) + " subsets");
}

bool determinism() {
  check c;
  auto fx = [](const char* n) { return test::fixture_path(n); };
  const std::vector<std::vector<std::string>> commands{
      {"validate", "--scenario", fx("shopping_centre")},
      {"play", "--scenario", fx("shopping_centre"), "--joint", "Anna=adaptive,Ben=obstruct"},
      {"attribute", "--scenario", fx("table3"), "--agent", "A", "--joint", "A=sA,B=sB'"},
      {"attribute", "--scenario", fx("table6"), "--agent", "A", "--joint", "A=sA',B=sB'", "--kind", "inexcusable",
       "--liable", "w1"},
      {"anticipate", "--scenario", fx("table4"), "--agent", "A", "--strategy", "sA", "--all-witnesses"},
      {"dominance", "--scenario", fx("table5"), "--agent", "A"},
      {"regret", "--scenario", fx("regret_explanation"), "--agent", "A"},
      {"recommend", "--scenario", fx("shopping_centre"), "--agent", "Anna", "--jobs", "4"},
      {"explain", "--scenario", fx("regret_explanation"), "--agent", "A", "--strategy", "s"},
      {"fuzz", "-n", "20", "--seed", "17", "--jobs", "4"},
      {"fuzz", "--scenario", fx("table4")},
  };
  for (auto args : commands) {
    args.insert(args.end(), {"--format", "json"});
    std::string first;
    for (int round = 0; round < 2; ++round) {
      std::ostringstream out, err;
      const int code = cli::run(args, out, err);
      std::string line = args[0];
      for (std::size_t k = 1; k < args.size(); ++k) line += " " + args[k];
      c.expect(code == cli::ok, line + " exited " + std::to_string(code) + ": " + err.str());
      if (round == 0) first = out.str();
      else c.expect(out.str() == first, line + " differs between runs");
    }
  }
  return report(5, "determinism", c, std::to_string(commands.size()) + " commands");
}

} // namespace

int main() {
  bool ok = true;
  ok = tables() && ok;
  ok = theorems() && ok;
  ok = evaluator() && ok;
  ok = order_axioms() && ok;
  ok = determinism() && ok;
  return ok ? 0 : 1;
}
