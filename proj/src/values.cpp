#include "mvresp/values.hpp"

#include <sstream>

#include "mvresp/error.hpp"

namespace mvresp {

void value_base::add_level(std::vector<value> level) {
  std::vector<value_id> ids;
  for (auto& v : level) {
    if (find(v.name)) {
      throw scenario_error("duplicate value name '" + v.name + "'");
    }
    ids.push_back(values_.size());
    level_of_.push_back(levels_.size());
    values_.push_back(std::move(v));
  }
  levels_.push_back(std::move(ids));
}

std::optional<value_id> value_base::find(const std::string& name) const {
  for (value_id i = 0; i < values_.size(); ++i) {
    if (values_[i].name == name) {
      return i;
    }
  }
  return std::nullopt;
}

bool outcome_set::empty() const noexcept { return size() == 0; }

std::size_t outcome_set::size() const noexcept {
  std::size_t n = 0;
  for (auto s : signs_) {
    n += s != polarity::absent;
  }
  return n;
}

std::vector<literal> outcome_set::literals() const {
  std::vector<literal> out;
  for (value_id v = 0; v < signs_.size(); ++v) {
    if (signs_[v] != polarity::absent) {
      out.push_back({v, signs_[v]});
    }
  }
  return out;
}

outcome_set outcome_set::minus(const outcome_set& other) const {
  if (other.value_count() != value_count()) {
    throw precondition_error("outcome sets over different value bases");
  }
  outcome_set out(value_count());
  for (value_id v = 0; v < signs_.size(); ++v) {
    if (signs_[v] != other.signs_[v]) {
      out.signs_[v] = signs_[v];
    }
  }
  return out;
}

outcome_set satset(const history& h, const value_base& vb) {
  ltlf::trace_evaluator ev(h.states);
  outcome_set out(vb.size());
  for (value_id v = 0; v < vb.size(); ++v) {
    out.set(v, ev.eval_at(vb.at(v).formula, 0) ? polarity::satisfied : polarity::violated);
  }
  return out;
}

score_vector score(const outcome_set& x, const value_base& vb) {
  if (x.value_count() != vb.size()) {
    throw precondition_error("outcome set does not belong to this value base");
  }
  score_vector s(vb.level_count(), 0);
  for (value_id v = 0; v < vb.size(); ++v) {
    s[vb.level_of(v)] += static_cast<int>(x.sign(v));
  }
  return s;
}

bool leq(const outcome_set& x, const outcome_set& y, const value_base& vb) {
  return score_leq(score(x, vb), score(y, vb));
}

bool strictly_less(const outcome_set& x, const outcome_set& y, const value_base& vb) {
  return score(x, vb) < score(y, vb);
}

bool equivalent(const outcome_set& x, const outcome_set& y, const value_base& vb) {
  return score(x, vb) == score(y, vb);
}

outcome_set relative_regret(const history& h1, const history& h2, const value_base& vb) {
  return satset(h1, vb).minus(satset(h2, vb));
}

std::string format_outcome(const outcome_set& x, const value_base& vb) {
  std::ostringstream os;
  os << '{';
  if (vb.level_count() <= 1) {
    bool first = true;
    for (const auto& l : x.literals()) {
      os << (first ? "" : ", ") << (l.sign == polarity::satisfied ? '+' : '-') << vb.at(l.value).name;
      first = false;
    }
  } else {
    bool first_level = true;
    for (std::size_t n = 0; n < vb.level_count(); ++n) {
      bool first = true;
      for (value_id v : vb.level(n)) {
        if (x.sign(v) == polarity::absent) {
          continue;
        }
        if (first) {
          os << (first_level ? "" : "; ") << 'L' << (n + 1) << ": ";
          first_level = false;
        } else {
          os << ", ";
        }
        os << (x.sign(v) == polarity::satisfied ? '+' : '-') << vb.at(v).name;
        first = false;
      }
    }
  }
  os << '}';
  return os.str();
}

std::string format_score(const score_vector& s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << (i ? ", " : "") << s[i];
  }
  os << ')';
  return os.str();
}

} // namespace mvresp
