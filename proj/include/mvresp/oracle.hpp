#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mvresp/ltlf.hpp"
#include "mvresp/system.hpp"
#include "mvresp/values.hpp"

namespace mvresp::oracle {

/// Bounds for generated instances. Agents, actions and horizon are used
/// exactly; the other counts are drawn between 1 and the bound.
struct instance_caps {
  std::size_t agents = 2;
  std::size_t propositions = 3;
  std::size_t actions = 2;
  std::size_t horizon = 2;
  std::size_t depth = 2;
  std::size_t values_per_level = 2;
  std::size_t levels = 2;
  std::uint64_t strategy_ceiling = 4096;
  /// Arbitrary formulas up to `depth` instead of the F/G/X/U template pool.
  bool pure_random = false;
};

/// Throws precondition_error naming the first invalid field.
void validate(const instance_caps& caps);

/// Deterministic in (seed, caps). Full transition table, no duplicate or
/// syntactically complementary values.
mas random_mas(std::uint64_t seed, const instance_caps& caps = {});

/// Recursion straight from the satisfaction clauses, derived operators included.
bool naive_eval(const ltlf::formula& f, std::span<const state> trace, std::size_t t);

/// Signed values as (value id, +1 | -1).
using literal_set = std::set<std::pair<value_id, int>>;

std::vector<int> naive_score(const literal_set& x, const value_base& vb);
/// First level with different scores decides; all equal means equivalent.
bool naive_leq(const literal_set& x, const literal_set& y, const value_base& vb);
literal_set set_minus(const literal_set& x, const literal_set& y);
literal_set to_literal_set(const outcome_set& x);

struct check_options {
  unsigned jobs = 1;
  /// Let attributions strictly better than the empty set through the excuse
  /// test unconditionally. Liability then stops matching inexcusable membership.
  bool vacuous_positive = false;
};

struct claim_result {
  std::string name;
  bool passed = true;
  std::uint64_t checks = 0;
  std::string detail;
  /// Scenario document plus a `claims` annex locating the first failure.
  nlohmann::json counterexample;
};

struct check_report {
  std::string instance;
  bool skipped = false;
  std::string skip_reason;
  std::vector<claim_result> claims;
  /// Some agent has a cycle in the "no strong excuse" preference.
  bool strong_cycle = false;

  bool passed() const;
  const claim_result* find(const std::string& claim) const;
  nlohmann::json to_json() const;
};

/// Brute-force check of every theorem and property on one system, for every
/// agent. Uses plays, satisfied sets and set differences only, and compares
/// what it finds with the library's answers.
check_report check_instance(const mas& d, const std::string& instance = "instance", const check_options& options = {});

struct fuzz_summary {
  std::uint64_t seed = 0;
  instance_caps caps;
  std::vector<check_report> reports;

  std::size_t passed() const;
  std::size_t failed() const;
  std::size_t skipped() const;
  nlohmann::json to_json() const;
};

/// Instance seeds are drawn in order from a generator seeded with `seed`.
/// Reports keep that order whatever `jobs` is.
fuzz_summary fuzz(std::size_t n, const instance_caps& caps, std::uint64_t seed, unsigned jobs = 1,
                  const check_options& options = {});

nlohmann::json caps_to_json(const instance_caps& caps);

} // namespace mvresp::oracle
