#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mvresp/system.hpp"

namespace mvresp {

enum class warning_kind {
  duplicate,            // same normalised formula twice
  negation_pair,        // one value is syntactically the negation of another
  model_negation,       // complementary on every history of this system
  model_check_skipped,  // too many histories to enumerate
};

struct value_warning {
  warning_kind kind;
  value_id first = 0;
  value_id second = 0;
  std::string message;
};

std::string to_string(warning_kind k);

/// Consistency diagnostics for the value base. The semantic part is relative to
/// the system: it enumerates every joint-action sequence up to the horizon.
std::vector<value_warning> check_value_base(const mas& d, std::uint64_t history_cap = 1'000'000);

/// Every history of the system (one per joint-action sequence).
std::vector<history> all_histories(const mas& d, std::uint64_t history_cap = 1'000'000);

} // namespace mvresp
