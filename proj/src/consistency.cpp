#include "mvresp/consistency.hpp"

#include "mvresp/error.hpp"

namespace mvresp {

std::string to_string(warning_kind k) {
  switch (k) {
  case warning_kind::duplicate: return "duplicate";
  case warning_kind::negation_pair: return "negation-pair";
  case warning_kind::model_negation: return "model-negation";
  case warning_kind::model_check_skipped: return "model-check-skipped";
  }
  return "unknown";
}

std::vector<history> all_histories(const mas& d, std::uint64_t history_cap) {
  const auto js = joint_actions(d.system);
  std::uint64_t count = 1;
  for (std::size_t t = 0; t < d.horizon; ++t) {
    count *= js.size();
    if (count > history_cap) {
      throw cap_exceeded("more than " + std::to_string(history_cap) + " histories");
    }
  }
  std::vector<history> out;
  out.reserve(static_cast<std::size_t>(count));
  history h;
  h.states.push_back(d.initial);
  auto extend = [&](auto&& self) -> void {
    if (h.horizon() == d.horizon) {
      out.push_back(h);
      return;
    }
    for (const auto& j : js) {
      h.states.push_back(successor(d.system, h.states.back(), j));
      h.actions.push_back(j);
      self(self);
      h.states.pop_back();
      h.actions.pop_back();
    }
  };
  extend(extend);
  return out;
}

std::vector<value_warning> check_value_base(const mas& d, std::uint64_t history_cap) {
  const value_base& vb = d.values;
  std::vector<value_warning> out;
  std::vector<std::vector<bool>> flagged(vb.size(), std::vector<bool>(vb.size(), false));
  for (value_id a = 0; a < vb.size(); ++a) {
    for (value_id b = a + 1; b < vb.size(); ++b) {
      const auto& fa = vb.at(a).formula;
      const auto& fb = vb.at(b).formula;
      if (fa == fb) {
        out.push_back({warning_kind::duplicate, a, b,
                       "values '" + vb.at(a).name + "' and '" + vb.at(b).name + "' are the same formula"});
        flagged[a][b] = true;
      } else if (fa == ltlf::negate(fb)) {
        out.push_back({warning_kind::negation_pair, a, b,
                       "value '" + vb.at(b).name + "' is the negation of '" + vb.at(a).name + "'"});
        flagged[a][b] = true;
      }
    }
  }

  std::vector<history> hs;
  try {
    hs = all_histories(d, history_cap);
  } catch (const cap_exceeded& e) {
    out.push_back({warning_kind::model_check_skipped, 0, 0, e.what()});
    return out;
  }
  std::vector<outcome_set> sats;
  sats.reserve(hs.size());
  for (const auto& h : hs) {
    sats.push_back(satset(h, vb));
  }
  for (value_id a = 0; a < vb.size(); ++a) {
    for (value_id b = a + 1; b < vb.size(); ++b) {
      if (flagged[a][b]) {
        continue;
      }
      bool complementary = true;
      for (const auto& x : sats) {
        if (x.sign(a) == x.sign(b)) {
          complementary = false;
          break;
        }
      }
      if (complementary) {
        out.push_back({warning_kind::model_negation, a, b,
                       "values '" + vb.at(a).name + "' and '" + vb.at(b).name +
                           "' are complementary on every history of this system"});
      }
    }
  }
  return out;
}

} // namespace mvresp
