#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvresp/history.hpp"
#include "mvresp/ltlf.hpp"

namespace mvresp {

using value_id = std::size_t;

struct value {
  std::string name;
  /// As written (derived operators kept), used for display and serialisation.
  ltlf::formula surface;
  /// Normalised core form, used for evaluation and consistency checks.
  ltlf::formula formula;

  bool operator==(const value& o) const { return name == o.name && surface == o.surface; }
};

/// Prioritised value base (level 0 is the most important). Value ids number the
/// values level by level in declaration order.
class value_base {
public:
  value_base() = default;

  /// Appends a new, least important level.
  void add_level(std::vector<value> level);

  std::size_t level_count() const noexcept { return levels_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  const value& at(value_id id) const { return values_.at(id); }
  const std::vector<value>& values() const noexcept { return values_; }
  const std::vector<value_id>& level(std::size_t n) const { return levels_.at(n); }
  std::size_t level_of(value_id id) const { return level_of_.at(id); }
  std::optional<value_id> find(const std::string& name) const;

  bool operator==(const value_base&) const = default;

private:
  std::vector<value> values_;
  std::vector<std::vector<value_id>> levels_;
  std::vector<std::size_t> level_of_;
};

enum class polarity : std::int8_t { absent = 0, satisfied = 1, violated = -1 };

struct literal {
  value_id value;
  polarity sign;

  bool operator==(const literal&) const = default;
};

/// A subset of the signed values: each value appears satisfied, violated or not
/// at all. Literals iterate in value-id order, i.e. by level then declaration.
class outcome_set {
public:
  outcome_set() = default;
  explicit outcome_set(std::size_t value_count) : signs_(value_count, polarity::absent) {}

  std::size_t value_count() const noexcept { return signs_.size(); }
  polarity sign(value_id v) const { return signs_.at(v); }
  void set(value_id v, polarity p) { signs_.at(v) = p; }
  bool contains(literal l) const { return l.sign != polarity::absent && sign(l.value) == l.sign; }
  bool empty() const noexcept;
  std::size_t size() const noexcept;
  std::vector<literal> literals() const;

  /// Literals of `*this` not present in `other`.
  outcome_set minus(const outcome_set& other) const;

  auto operator<=>(const outcome_set&) const = default;

private:
  std::vector<polarity> signs_;
};

/// Per level: satisfied minus violated.
using score_vector = std::vector<int>;

outcome_set satset(const history& h, const value_base& vb);
score_vector score(const outcome_set& x, const value_base& vb);

/// x ⪯ y: lexicographic comparison of score vectors, first level decides.
bool leq(const outcome_set& x, const outcome_set& y, const value_base& vb);
bool strictly_less(const outcome_set& x, const outcome_set& y, const value_base& vb);
bool equivalent(const outcome_set& x, const outcome_set& y, const value_base& vb);

/// Order on score vectors alone (same semantics as `leq`).
inline bool score_leq(const score_vector& a, const score_vector& b) { return !(b < a); }

/// satset(h1) \ satset(h2)
outcome_set relative_regret(const history& h1, const history& h2, const value_base& vb);

/// e.g. "{-w1, -w2}"; with several levels "{L1: -w1; L2: +w2}".
std::string format_outcome(const outcome_set& x, const value_base& vb);
std::string format_score(const score_vector& s);

} // namespace mvresp
