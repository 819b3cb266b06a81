#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvresp/error.hpp"
#include "mvresp/oracle.hpp"
#include "support.hpp"

using namespace mvresp;
using test::col_of;
using test::row_of;

namespace {

mas grid(std::size_t agents, std::size_t actions, std::size_t horizon) {
  oracle::instance_caps caps;
  caps.agents = agents;
  caps.actions = actions;
  caps.horizon = horizon;
  return oracle::random_mas(5, caps);
}

std::vector<std::string> labels(const loaded_scenario& s, const agent_analysis& a, const std::vector<std::size_t>& rows) {
  std::vector<std::string> out;
  for (std::size_t r : rows) out.push_back(strategy_label(s, a.strategy(r)));
  return out;
}

using names = std::vector<std::string>;

} // namespace

TEST_CASE("strategy counts") {
  CHECK(enumerate_strategies(test::fixture("table3").system, 0).size() == 2);
  const auto t4 = test::fixture("table4");
  CHECK(enumerate_strategies(t4.system, 0).size() == 3);
  CHECK(enumerate_strategies(t4.system, 1).size() == 3);
  CHECK(enumerate_strategies(grid(2, 2, 2), 0).size() == 8);
  CHECK(strategy_count(grid(2, 2, 2), 1) == 8);
  CHECK_THROWS_AS(enumerate_strategies(grid(2, 2, 2), 0, 7), cap_exceeded);
}

TEST_CASE("availability limits the rows") {
  CHECK(enumerate_strategies(test::fixture("table1a").system, 0).size() == 2);
  CHECK(enumerate_strategies(test::fixture("table1b").system, 0).size() == 3);
  CHECK(enumerate_strategies(test::fixture("table1c").system, 0).size() == 4);
}

TEST_CASE("joint enumeration") {
  const auto t5 = test::fixture("table5");
  const std::vector<agent_id> b{1};
  CHECK(enumerate_joint(t5.system, b).size() == 3);
  const auto none = enumerate_joint(t5.system, std::vector<agent_id>{});
  REQUIRE(none.size() == 1);
  CHECK(none[0].trees().empty());
  const mas three = grid(3, 2, 1);
  const std::vector<agent_id> others{0, 2};
  const auto js = enumerate_joint(three, others);
  REQUIRE(js.size() == 4);
  CHECK(js[1].of(0).choices == std::vector<action_id>{0});
  CHECK(js[1].of(2).choices == std::vector<action_id>{1});
}

TEST_CASE("index round trip") {
  const mas d = grid(2, 2, 2);
  const decision_tree tree(d, 0);
  for (std::uint64_t n = 0; n < strategy_count(d, 0); ++n) {
    CHECK(strategy_index(d, tree, strategy_at(d, tree, n)) == n);
  }
}

TEST_CASE("weak dominance") {
  const auto t6 = test::fixture("table6");
  const agent_analysis a(t6.system, 0);
  const auto sA = row_of(t6, a, "sA");
  const auto sA1 = row_of(t6, a, "sA'");
  CHECK(is_weakly_dominated_by(a, sA1, sA));
  CHECK_FALSE(is_weakly_dominated_by(a, sA, sA1));
  CHECK(is_weakly_dominated_by(a, sA, sA));

  const auto t5 = test::fixture("table5");
  const agent_analysis b(t5.system, 0);
  CHECK(is_weakly_dominated_by(b, row_of(t5, b, "sA'"), row_of(t5, b, "sA")));
  for (std::size_t c = 0; c < b.opponent_count(); ++c) {
    CHECK(b.score(row_of(t5, b, "sA'"), c) < b.score(row_of(t5, b, "sA"), c));
  }
}

TEST_CASE("non-dominated strategies") {
  const auto t5 = test::fixture("table5");
  const agent_analysis a(t5.system, 0);
  CHECK(non_dominated(a, row_of(t5, a, "sA")));
  CHECK_FALSE(non_dominated(a, row_of(t5, a, "sA'")));

  const auto t3 = test::fixture("table3");
  const agent_analysis b(t3.system, 0);
  CHECK(non_dominated_set(b).size() == 2);

  const auto t1 = test::fixture("table1c");
  const agent_analysis ben(t1.system, 1);
  CHECK(non_dominated_set(ben) == std::vector<std::size_t>{0});
}

TEST_CASE("anticipated regret") {
  const auto t3 = test::fixture("table3");
  const agent_analysis a(t3.system, 0);
  const auto r = anticipated_regret(a, row_of(t3, a, "sA"));
  CHECK(test::show(r.regret, a) == "{-w1, -w2}");
  CHECK(r.opponent == col_of(t3, a, "sB'"));
  CHECK(r.alternative == row_of(t3, a, "sA'"));

  const auto t6 = test::fixture("table6");
  const agent_analysis b(t6.system, 0);
  CHECK(anticipated_regret(b, row_of(t6, b, "sA")).regret.empty());
  CHECK(test::show(anticipated_regret(b, row_of(t6, b, "sA'")).regret, b) == "{-w1}");

  // A dictator reaching the optimum everywhere regrets nothing.
  const auto t1 = test::fixture("table1c");
  const agent_analysis c(t1.system, 0);
  CHECK(anticipated_regret(c, row_of(t1, c, "sA'''")).regret.empty());
}

TEST_CASE("regret with compensation") {
  const auto s = test::fixture("regret_explanation");
  const agent_analysis a(s.system, 0);
  const auto mine = anticipated_regret(a, row_of(s, a, "s"));
  const auto theirs = anticipated_regret(a, row_of(s, a, "s'"));
  CHECK(format_outcome(mine.regret, s.system.values) == "{L1: -w1; L2: +w2}");
  CHECK(mine.score == score_vector{-1, 1});
  CHECK(format_outcome(theirs.regret, s.system.values) == "{L1: -w1}");
  CHECK(theirs.score == score_vector{-1, 0});
}

TEST_CASE("regret-minimising sets") {
  const auto t6 = test::fixture("table6");
  const agent_analysis a(t6.system, 0);
  CHECK(labels(t6, a, regret_minimising_set(a)) == names{"sA"});
  const auto t3 = test::fixture("table3");
  const agent_analysis b(t3.system, 0);
  CHECK(labels(t3, b, regret_minimising_set(b)) == names{"sA", "sA'"});
  const auto t1 = test::fixture("table1c");
  const agent_analysis ben(t1.system, 1);
  CHECK(labels(t1, ben, regret_minimising_set(ben)) == names{"sB"});
}

TEST_CASE("all witnesses of the worst regret") {
  const auto t3 = test::fixture("table3");
  const agent_analysis a(t3.system, 0);
  const auto r = anticipated_regret(a, row_of(t3, a, "sA"), true);
  REQUIRE(r.ties.size() == 1);
  CHECK(r.ties[0].alternative == row_of(t3, a, "sA'"));
}

TEST_CASE("fast regret agrees with exhaustive search") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const mas d = oracle::random_mas(seed);
    for (agent_id i = 0; i < d.system.agent_count(); ++i) {
      const agent_analysis a(d, i);
      for (std::size_t r = 0; r < a.strategy_count(); ++r) {
        const auto fast = anticipated_regret(a, r);
        std::optional<score_vector> worst;
        std::pair<std::size_t, std::size_t> at;
        for (std::size_t c = 0; c < a.opponent_count(); ++c) {
          for (std::size_t alt = 0; alt < a.strategy_count(); ++alt) {
            const auto sc = score(a.outcome(r, c).minus(a.outcome(alt, c)), a.values());
            if (!worst || sc < *worst) {
              worst = sc;
              at = {c, alt};
            }
          }
        }
        CHECK(fast.score == *worst);
        CHECK(std::make_pair(fast.opponent, fast.alternative) == at);
      }
    }
  }
}

TEST_CASE("parallel analysis matches sequential") {
  const mas d = oracle::random_mas(3);
  analysis_options four;
  four.jobs = 4;
  const agent_analysis seq(d, 0);
  const agent_analysis par(d, 0, four);
  for (std::size_t r = 0; r < seq.strategy_count(); ++r) {
    for (std::size_t c = 0; c < seq.opponent_count(); ++c) CHECK(seq.outcome(r, c) == par.outcome(r, c));
  }
}

TEST_CASE("deduplication does not change results") {
  const auto s = test::fixture("shopping_centre");
  analysis_options dedupe;
  dedupe.dedupe = true;
  dedupe.jobs = 2;
  const agent_analysis a(s.system, 1, dedupe);
  const agent_analysis b(s.system, 1);
  CHECK(regret_minimising_set(a) == regret_minimising_set(b));
  CHECK(a.representative(a.strategy_count() - 1) <= a.strategy_count() - 1);
}

TEST_CASE("profile cap") {
  analysis_options tight;
  tight.profile_cap = 10;
  CHECK_THROWS_AS(agent_analysis(grid(2, 2, 2), 0, tight), cap_exceeded);
}

TEST_CASE("locating a profile") {
  const auto t4 = test::fixture("table4");
  const agent_analysis a(t4.system, 0);
  const joint_strategy js({*resolve_strategy(t4, 0, "sA''"), *resolve_strategy(t4, 1, "sB'")});
  const auto [row, col] = a.locate(js);
  CHECK(row == row_of(t4, a, "sA''"));
  CHECK(col == col_of(t4, a, "sB'"));
  CHECK(a.profile(row, col) == js);
}
