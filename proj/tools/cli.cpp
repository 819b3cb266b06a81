#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "mvresp/error.hpp"
#include "mvresp/oracle.hpp"
#include "mvresp/responsibility.hpp"
#include "mvresp/scenario_io.hpp"
#include "mvresp/strategy.hpp"

namespace mvresp::cli {

namespace {

using nlohmann::json;

struct usage_error : error {
  using error::error;
};

struct options {
  std::string scenario;
  std::string agent;
  std::string strategy;
  std::string joint;
  std::string kind = "passive";
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  std::string caps;
  unsigned jobs = 1;
  bool all_witnesses = false;
  std::string liable_value;
  std::string liable_formula;
  std::size_t count = 10;
  bool pure_random = false;
};

bool structured(const options& o) { return o.format == "json"; }

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

json outcome_json(const outcome_set& x, const value_base& vb) {
  json levels = json::array();
  for (std::size_t n = 0; n < vb.level_count(); ++n) {
    json level = json::array();
    for (value_id v : vb.level(n)) {
      if (x.sign(v) == polarity::satisfied) level.push_back("+" + vb.at(v).name);
      if (x.sign(v) == polarity::violated) level.push_back("-" + vb.at(v).name);
    }
    levels.push_back(std::move(level));
  }
  return levels;
}

class context {
public:
  explicit context(const options& o) : o_(o), s_(load_document_file(o.scenario)) {}

  const loaded_scenario& scenario() const { return s_; }
  const mas& system() const { return s_.system; }
  const value_base& values() const { return s_.system.values; }

  agent_id agent() const {
    if (o_.agent.empty()) {
      if (system().system.agent_count() == 1) return 0;
      throw usage_error("--agent is required");
    }
    return resolve_agent(o_.agent);
  }

  agent_id resolve_agent(const std::string& name) const {
    const auto a = system().system.find_agent(name);
    if (!a) throw usage_error("unknown agent '" + name + "'");
    return *a;
  }

  strategy_tree strategy(agent_id a, const std::string& selector) const {
    if (selector.empty()) throw usage_error("--strategy is required");
    auto t = resolve_strategy(s_, a, selector);
    if (!t) {
      throw usage_error("no strategy '" + selector + "' for agent '" + system().system.agents[a] + "'");
    }
    return *t;
  }

  joint_strategy joint() const {
    if (o_.joint.empty()) throw usage_error("--joint is required");
    std::vector<strategy_tree> trees;
    std::stringstream in(o_.joint);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw usage_error("--joint entries look like AGENT=STRATEGY");
      trees.push_back(strategy(resolve_agent(item.substr(0, eq)), item.substr(eq + 1)));
    }
    try {
      joint_strategy js(std::move(trees));
      if (js.coalition().size() != system().system.agent_count()) {
        throw usage_error("--joint must give a strategy for every agent");
      }
      return js;
    } catch (const precondition_error& e) {
      throw usage_error(e.what());
    }
  }

  std::string label(const strategy_tree& t) const { return strategy_label(s_, t); }

  std::string opponents_label(const joint_strategy& js) const {
    std::string out;
    for (const auto& t : js.trees()) {
      if (!out.empty()) out += ",";
      out += system().system.agents[t.owner] + "=" + label(t);
    }
    return out.empty() ? "(none)" : out;
  }

  analysis_options analysis() const {
    analysis_options a;
    a.jobs = o_.jobs;
    return a;
  }

private:
  const options& o_;
  loaded_scenario s_;
};

responsibility_kind kind_of(const options& o) {
  auto k = parse_responsibility_kind(o.kind);
  if (!k) throw usage_error("--kind must be passive or inexcusable");
  return *k;
}

std::string text_outcome(const outcome_set& x, const value_base& vb) {
  return format_outcome(x, vb) + " score " + format_score(score(x, vb));
}

// ---------------------------------------------------------------------------

int cmd_validate(const options& o, std::ostream& out) {
  const context ctx(o);
  const mas& d = ctx.system();
  if (structured(o)) {
    json doc;
    doc["ok"] = true;
    doc["name"] = ctx.scenario().name;
    doc["agents"] = d.system.agents;
    doc["horizon"] = d.horizon;
    json levels = json::array();
    for (std::size_t n = 0; n < d.values.level_count(); ++n) {
      json level = json::array();
      for (value_id v : d.values.level(n)) level.push_back(d.values.at(v).name);
      levels.push_back(level);
    }
    doc["values"] = levels;
    json strategies = json::object();
    for (const auto& s : ctx.scenario().strategies) strategies[s.name] = d.system.agents[s.tree.owner];
    doc["strategies"] = strategies;
    json warnings = json::array();
    for (const auto& w : ctx.scenario().warnings) {
      warnings.push_back({{"kind", to_string(w.kind)}, {"message", w.message}});
    }
    doc["warnings"] = warnings;
    emit(out, doc);
    return ok;
  }
  out << "OK " << ctx.scenario().name << ": " << d.system.agent_count() << " agents, " << d.values.size()
      << " values in " << d.values.level_count() << " level" << (d.values.level_count() == 1 ? "" : "s")
      << ", horizon " << d.horizon << '\n';
  for (const auto& w : ctx.scenario().warnings) out << "warning [" << to_string(w.kind) << "]: " << w.message << '\n';
  return ok;
}

int cmd_play(const options& o, std::ostream& out) {
  const context ctx(o);
  const mas& d = ctx.system();
  const history h = play(ctx.joint(), d);
  const outcome_set x = satset(h, d.values);
  if (structured(o)) {
    json states = json::array();
    for (const auto& s : h.states) states.push_back(std::vector<std::string>(s.begin(), s.end()));
    json actions = json::array();
    for (const auto& j : h.actions) {
      json step = json::object();
      for (agent_id a = 0; a < j.size(); ++a) step[d.system.agents[a]] = d.system.actions[j[a]];
      actions.push_back(step);
    }
    emit(out, {{"states", states}, {"actions", actions}, {"outcome", outcome_json(x, d.values)},
               {"score", score(x, d.values)}});
    return ok;
  }
  out << "history of length " << h.horizon() << '\n';
  out << "  s0 " << format_state(h.states[0]) << '\n';
  for (std::size_t t = 0; t < h.actions.size(); ++t) {
    out << "  " << format_joint_action(d.system, h.actions[t]) << " -> s" << t + 1 << ' '
        << format_state(h.states[t + 1]) << '\n';
  }
  out << "satisfied " << text_outcome(x, d.values) << '\n';
  return ok;
}

int cmd_attribute(const options& o, std::ostream& out) {
  const context ctx(o);
  const joint_strategy js = ctx.joint();
  const agent_id i = ctx.agent();
  const responsibility_kind kind = kind_of(o);
  const agent_analysis a(ctx.system(), i, ctx.analysis());
  const auto [row, col] = a.locate(js);
  const value_base& vb = ctx.values();
  const auto list = kind == responsibility_kind::passive ? passive_attributions(a, row, col)
                                                         : inexcusable_attributions(a, row, col);
  const score_vector zero(vb.level_count(), 0);

  json entries = json::array();
  std::ostringstream text;
  text << "agent " << ctx.system().system.agents[i] << " at " << ctx.opponents_label(js) << ", " << to_string(kind)
       << " attributions\n";
  for (const auto& x : list) {
    json e{{"outcome", outcome_json(x.outcome, vb)}, {"score", x.score}, {"via", ctx.label(a.strategy(x.via))}};
    text << "  " << text_outcome(x.outcome, vb) << " via " << ctx.label(a.strategy(x.via));
    if (score_leq(x.score, zero)) {
      const auto weak = weak_excuse(a, row, col, x.via);
      const auto strong = strong_excuse(a, row, col, x.via);
      auto witness = [&](const std::optional<excuse>& e) -> json {
        return e ? json(ctx.opponents_label(a.opponents(e->witness))) : json(nullptr);
      };
      e["weak_excuse"] = witness(weak);
      e["strong_excuse"] = witness(strong);
      text << "; weak excuse " << (weak ? ctx.opponents_label(a.opponents(weak->witness)) : "none")
           << "; strong excuse " << (strong ? ctx.opponents_label(a.opponents(strong->witness)) : "none");
    }
    text << '\n';
    entries.push_back(std::move(e));
  }
  text << "  (a strong excuse needs a gain strictly better than {} and at least as good as the loss)\n";

  json doc{{"agent", ctx.system().system.agents[i]},
           {"kind", to_string(kind)},
           {"profile", ctx.opponents_label(js)},
           {"attributions", entries},
           {"strong_excuse_reading", "gain > {} and loss <= gain"}};

  if (!o.liable_value.empty() || !o.liable_formula.empty()) {
    ltlf::formula w;
    std::string what;
    if (!o.liable_value.empty()) {
      const auto v = vb.find(o.liable_value);
      if (!v) throw usage_error("unknown value '" + o.liable_value + "'");
      w = ltlf::negate(vb.at(*v).formula);
      what = "not " + o.liable_value;
    } else {
      w = ltlf::parse_formula(o.liable_formula);
      what = o.liable_formula;
    }
    const liability l = liable(a, row, col, w);
    json lj{{"for", what}, {"liable", l.liable}};
    lj["via"] = l.via ? json(ctx.label(a.strategy(*l.via))) : json(nullptr);
    doc["liability"] = lj;
    text << "liability for " << what << ": "
         << (l.liable ? "liable via " + ctx.label(a.strategy(*l.via)) : std::string("not liable")) << '\n';
  }
  if (structured(o)) {
    emit(out, doc);
  } else {
    out << text.str();
  }
  return ok;
}

int cmd_anticipate(const options& o, std::ostream& out) {
  const context ctx(o);
  const agent_id i = ctx.agent();
  const responsibility_kind kind = kind_of(o);
  const agent_analysis a(ctx.system(), i, ctx.analysis());
  const std::size_t row = a.index_of(ctx.strategy(i, o.strategy));
  const anticipation r = anticipate(a, row, kind, o.all_witnesses);
  const value_base& vb = ctx.values();
  if (structured(o)) {
    json doc{{"agent", ctx.system().system.agents[i]},
             {"strategy", ctx.label(a.strategy(row))},
             {"kind", to_string(kind)},
             {"worst", outcome_json(r.worst, vb)},
             {"score", r.score},
             {"opponents", ctx.opponents_label(a.opponents(r.opponent))},
             {"accuser", ctx.label(a.strategy(r.accuser))}};
    if (o.all_witnesses) {
      json ties = json::array();
      for (const auto& t : r.ties) {
        ties.push_back({{"outcome", outcome_json(t.outcome, vb)},
                        {"opponents", ctx.opponents_label(a.opponents(t.context_col))},
                        {"accuser", ctx.label(a.strategy(t.via))}});
      }
      doc["ties"] = ties;
    }
    emit(out, doc);
    return ok;
  }
  out << "anticipated " << to_string(kind) << " responsibility of " << ctx.label(a.strategy(row)) << ": "
      << text_outcome(r.worst, vb) << '\n';
  out << "  worst case against " << ctx.opponents_label(a.opponents(r.opponent)) << ", accused via "
      << ctx.label(a.strategy(r.accuser)) << '\n';
  for (const auto& t : r.ties) {
    out << "  tie: " << format_outcome(t.outcome, vb) << " against " << ctx.opponents_label(a.opponents(t.context_col))
        << " via " << ctx.label(a.strategy(t.via)) << '\n';
  }
  return ok;
}

std::vector<std::size_t> selected_rows(const context& ctx, const agent_analysis& a, const options& o) {
  if (!o.strategy.empty()) return {a.index_of(ctx.strategy(a.agent(), o.strategy))};
  std::vector<std::size_t> rows(a.strategy_count());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
  return rows;
}

std::optional<std::size_t> strict_dominator(const agent_analysis& a, std::size_t s) {
  for (std::size_t t = 0; t < a.strategy_count(); ++t) {
    if (is_weakly_dominated_by(a, s, t) && !is_weakly_dominated_by(a, t, s)) return t;
  }
  return std::nullopt;
}

int cmd_dominance(const options& o, std::ostream& out) {
  const context ctx(o);
  const agent_id i = ctx.agent();
  const agent_analysis a(ctx.system(), i, ctx.analysis());
  json rows = json::array();
  for (std::size_t r : selected_rows(ctx, a, o)) {
    const auto by = strict_dominator(a, r);
    json e{{"strategy", ctx.label(a.strategy(r))}, {"non_dominated", !by.has_value()}};
    e["dominated_by"] = by ? json(ctx.label(a.strategy(*by))) : json(nullptr);
    rows.push_back(e);
    if (!structured(o)) {
      out << ctx.label(a.strategy(r)) << ": "
          << (by ? "dominated by " + ctx.label(a.strategy(*by)) : std::string("non-dominated")) << '\n';
    }
  }
  if (structured(o)) emit(out, {{"agent", ctx.system().system.agents[i]}, {"strategies", rows}});
  return ok;
}

int cmd_regret(const options& o, std::ostream& out) {
  const context ctx(o);
  const agent_id i = ctx.agent();
  const agent_analysis a(ctx.system(), i, ctx.analysis());
  const value_base& vb = ctx.values();
  json rows = json::array();
  for (std::size_t r : selected_rows(ctx, a, o)) {
    const auto res = anticipated_regret(a, r, o.all_witnesses);
    json e{{"strategy", ctx.label(a.strategy(r))},
           {"regret", outcome_json(res.regret, vb)},
           {"score", res.score},
           {"opponents", ctx.opponents_label(a.opponents(res.opponent))},
           {"alternative", ctx.label(a.strategy(res.alternative))}};
    if (!structured(o)) {
      out << ctx.label(a.strategy(r)) << ": " << text_outcome(res.regret, vb) << " against "
          << ctx.opponents_label(a.opponents(res.opponent)) << " compared with " << ctx.label(a.strategy(res.alternative))
          << '\n';
    }
    if (o.all_witnesses) {
      json ties = json::array();
      for (const auto& t : res.ties) {
        ties.push_back({{"regret", outcome_json(t.regret, vb)},
                        {"opponents", ctx.opponents_label(a.opponents(t.opponent))},
                        {"alternative", ctx.label(a.strategy(t.alternative))}});
        if (!structured(o)) {
          out << "  tie: " << format_outcome(t.regret, vb) << " against " << ctx.opponents_label(a.opponents(t.opponent))
              << " compared with " << ctx.label(a.strategy(t.alternative)) << '\n';
        }
      }
      e["ties"] = ties;
    }
    rows.push_back(e);
  }
  json minimising = json::array();
  for (std::size_t r : regret_minimising_set(a)) minimising.push_back(ctx.label(a.strategy(r)));
  if (structured(o)) {
    emit(out, {{"agent", ctx.system().system.agents[i]}, {"strategies", rows}, {"regret_minimising", minimising}});
  } else {
    out << "regret-minimising:";
    for (const auto& m : minimising) out << ' ' << m.get<std::string>();
    out << '\n';
  }
  return ok;
}

int cmd_recommend(const options& o, std::ostream& out, std::ostream& err) {
  const context ctx(o);
  const agent_id i = ctx.agent();
  const agent_analysis a(ctx.system(), i, ctx.analysis());
  auto labels = [&](const std::vector<std::size_t>& rows) {
    json l = json::array();
    for (std::size_t r : rows) l.push_back(ctx.label(a.strategy(r)));
    return l;
  };
  const json doc{{"agent", ctx.system().system.agents[i]},
                 {"regret_minimising", labels(regret_minimising_set(a))},
                 {"non_dominated", labels(non_dominated_set(a))},
                 {"passive_minimising", labels(responsibility_minimising_set(a, responsibility_kind::passive))},
                 {"inexcusable_minimising", labels(responsibility_minimising_set(a, responsibility_kind::inexcusable))},
                 {"recommended", labels(recommend(a))}};
  if (structured(o)) {
    emit(out, doc);
  } else {
    for (const char* key :
         {"regret_minimising", "non_dominated", "passive_minimising", "inexcusable_minimising", "recommended"}) {
      out << key << ':';
      for (const auto& l : doc[key]) out << ' ' << l.get<std::string>();
      out << '\n';
    }
  }
  if (doc["recommended"].empty()) {
    err << "error: no strategy is both regret-minimising and non-dominated\n";
    return theorem_failure;
  }
  return ok;
}

oracle::instance_caps parse_caps(const std::string& text, bool pure_random) {
  oracle::instance_caps caps;
  caps.pure_random = pure_random;
  std::stringstream in(text);
  std::string item;
  const std::map<std::string, std::size_t*> fields = {
      {"agents", &caps.agents},          {"propositions", &caps.propositions},
      {"actions", &caps.actions},        {"horizon", &caps.horizon},
      {"depth", &caps.depth},            {"values_per_level", &caps.values_per_level},
      {"levels", &caps.levels},
  };
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw usage_error("--caps entries look like NAME=NUMBER");
    const std::string key = item.substr(0, eq);
    std::uint64_t value = 0;
    try {
      std::size_t used = 0;
      value = std::stoull(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw usage_error("--caps value for '" + key + "' is not a number");
    }
    if (key == "strategy_ceiling") {
      caps.strategy_ceiling = value;
    } else if (auto it = fields.find(key); it != fields.end()) {
      *it->second = static_cast<std::size_t>(value);
    } else {
      throw usage_error("unknown cap '" + key + "'");
    }
  }
  try {
    oracle::validate(caps);
  } catch (const precondition_error& e) {
    throw usage_error(e.what());
  }
  return caps;
}

void print_claims(std::ostream& out, const json& claims) {
  for (const auto& [name, c] : claims.items()) {
    out << "  " << name << ": " << c["passed"].get<std::uint64_t>() << " passed, " << c["failed"].get<std::uint64_t>()
        << " failed, " << c["checks"].get<std::uint64_t>() << " checks\n";
  }
}

int cmd_fuzz(const options& o, std::ostream& out) {
  if (!o.scenario.empty()) {
    const loaded_scenario s = load_document_file(o.scenario);
    oracle::check_options co;
    co.jobs = o.jobs;
    const oracle::check_report r = oracle::check_instance(s.system, s.name, co);
    if (structured(o)) {
      emit(out, r.to_json());
    } else {
      out << "check " << s.name << ": " << (r.skipped ? "skipped (" + r.skip_reason + ")" : r.passed() ? "pass" : "FAIL")
          << '\n';
      for (const auto& c : r.claims) {
        out << "  " << c.name << ": " << (c.passed ? "pass" : "FAIL") << " (" << c.checks << " checks)";
        if (!c.passed) out << ' ' << c.detail;
        out << '\n';
      }
      out << "  strong-excuse cycle: " << (r.strong_cycle ? "yes" : "no") << '\n';
    }
    return r.skipped ? usage : r.passed() ? ok : theorem_failure;
  }
  if (o.count == 0) throw usage_error("--count must be at least 1");
  if (structured(o) && !o.seed) throw usage_error("--seed is required with --format json");
  const auto caps = parse_caps(o.caps, o.pure_random);
  const auto summary = oracle::fuzz(o.count, caps, o.seed.value_or(0), o.jobs);
  const json doc = summary.to_json();
  if (structured(o)) {
    emit(out, doc);
  } else {
    out << "fuzz: " << summary.reports.size() << " instances, seed " << summary.seed << '\n';
    out << "passed " << summary.passed() << ", failed " << summary.failed() << ", skipped " << summary.skipped()
        << ", strong-excuse cycles " << doc["strong_cycles"].get<std::uint64_t>() << '\n';
    print_claims(out, doc["claims"]);
    for (const auto& r : summary.reports) {
      if (r.skipped || r.passed()) continue;
      for (const auto& c : r.claims) {
        if (!c.passed) out << "FAIL " << r.instance << ' ' << c.name << ": " << c.detail << '\n';
      }
    }
  }
  return summary.failed() == 0 ? ok : theorem_failure;
}

std::string names_of(const outcome_set& x, polarity p, const value_base& vb) {
  std::string out;
  for (const auto& l : x.literals()) {
    if (l.sign != p) continue;
    if (!out.empty()) out += ", ";
    out += vb.at(l.value).name;
  }
  return out;
}

outcome_set only(const outcome_set& x, polarity p) {
  outcome_set out(x.value_count());
  for (const auto& l : x.literals()) {
    if (l.sign == p) out.set(l.value, p);
  }
  return out;
}

int cmd_explain(const options& o, std::ostream& out) {
  const context ctx(o);
  const agent_id i = ctx.agent();
  const agent_analysis a(ctx.system(), i, ctx.analysis());
  const value_base& vb = ctx.values();
  const std::size_t row = a.index_of(ctx.strategy(i, o.strategy));
  const std::string me = ctx.label(a.strategy(row));
  const auto mine = anticipated_regret(a, row);

  std::vector<std::string> sentences;
  json rivals = json::array();
  const outcome_set my_bad = only(mine.regret, polarity::violated);
  if (my_bad.empty()) {
    sentences.push_back(me + " has no avoidable violations: it does as well as any alternative against every strategy "
                             "of the others");
  } else {
    sentences.push_back("in the worst case " + me + " risks the avoidable violation of " +
                        names_of(mine.regret, polarity::violated, vb) + " (against " +
                        ctx.opponents_label(a.opponents(mine.opponent)) + ", compared with " +
                        ctx.label(a.strategy(mine.alternative)) + ")");
  }

  // Rivals: every strategy in small games, otherwise the regret-minimising ones.
  std::vector<std::size_t> rival_rows;
  if (a.strategy_count() <= 16) {
    for (std::size_t r = 0; r < a.strategy_count(); ++r) rival_rows.push_back(r);
  } else {
    rival_rows = regret_minimising_set(a);
  }
  const auto dominator = strict_dominator(a, row);
  if (dominator && std::find(rival_rows.begin(), rival_rows.end(), *dominator) == rival_rows.end()) {
    rival_rows.push_back(*dominator);
  }
  for (std::size_t r : rival_rows) {
    if (r == row) continue;
    const std::string other = ctx.label(a.strategy(r));
    const auto theirs = anticipated_regret(a, r);
    const outcome_set their_bad = only(theirs.regret, polarity::violated);
    outcome_set shared(vb.size());
    for (const auto& l : my_bad.literals()) {
      if (their_bad.contains(l)) shared.set(l.value, l.sign);
    }
    const outcome_set mine_only = my_bad.minus(their_bad);
    const outcome_set theirs_only = their_bad.minus(my_bad);
    const std::string my_gain = names_of(mine.regret, polarity::satisfied, vb);
    const std::string their_gain = names_of(theirs.regret, polarity::satisfied, vb);

    std::string s = "anticipated regret of " + me + " is " + text_outcome(mine.regret, vb) + ", of " + other + " is " +
                    text_outcome(theirs.regret, vb);
    if (!shared.empty()) {
      s += "; both " + me + " and " + other + " risk the avoidable violation of " +
           names_of(shared, polarity::violated, vb) + " in the worst case";
    }
    if (!mine_only.empty()) s += "; only " + me + " risks " + names_of(mine_only, polarity::violated, vb);
    if (!theirs_only.empty()) s += "; only " + other + " risks " + names_of(theirs_only, polarity::violated, vb);
    if (!my_gain.empty()) s += "; " + me + " at least has the compensation of satisfying " + my_gain;
    if (!their_gain.empty()) s += "; " + other + " at least has the compensation of satisfying " + their_gain;
    const std::string verdict = theirs.score < mine.score   ? me + " is preferred"
                                : mine.score < theirs.score ? other + " is preferred"
                                                            : "neither is preferred";
    s += "; " + verdict;
    sentences.push_back(s);
    rivals.push_back({{"strategy", other},
                      {"regret", outcome_json(theirs.regret, vb)},
                      {"score", theirs.score},
                      {"shared_violations", outcome_json(shared, vb)},
                      {"preferred", verdict}});
  }
  if (dominator) {
    std::size_t witness = 0;
    for (std::size_t c = 0; c < a.opponent_count(); ++c) {
      if (a.score(row, c) < a.score(*dominator, c)) {
        witness = c;
        break;
      }
    }
    sentences.push_back(ctx.label(a.strategy(*dominator)) + " dominates " + me +
                        ": it does at least as well against every strategy of the others and strictly better against " +
                        ctx.opponents_label(a.opponents(witness)));
  } else {
    sentences.push_back(me + " is not dominated");
  }

  if (structured(o)) {
    json doc{{"agent", ctx.system().system.agents[i]},
             {"strategy", me},
             {"regret", outcome_json(mine.regret, vb)},
             {"score", mine.score},
             {"rivals", rivals},
             {"sentences", sentences}};
    doc["dominated_by"] = dominator ? json(ctx.label(a.strategy(*dominator))) : json(nullptr);
    emit(out, doc);
  } else {
    for (const auto& s : sentences) out << s << '\n';
  }
  return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Responsibility attribution and anticipation for multi-value agents", "mvresp"};
  app.require_subcommand(1);
  options o;

  auto add_common = [&](CLI::App* sub, bool needs_scenario) {
    auto* s = sub->add_option("--scenario", o.scenario, "Scenario or matrix document");
    if (needs_scenario) s->required()->check(CLI::ExistingFile);
    sub->add_option("--format", o.format, "Output mode")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_agent = [&](CLI::App* sub) { sub->add_option("--agent", o.agent, "Agent name"); };
  auto add_strategy = [&](CLI::App* sub) {
    sub->add_option("--strategy", o.strategy, "Strategy name or #index");
  };
  auto add_kind = [&](CLI::App* sub) {
    sub->add_option("--kind", o.kind, "Responsibility kind")->check(CLI::IsMember({"passive", "inexcusable"}));
  };

  auto* validate = app.add_subcommand("validate", "Load a document and list diagnostics");
  add_common(validate, true);

  auto* play_cmd = app.add_subcommand("play", "Show the history of a joint strategy");
  add_common(play_cmd, true);
  play_cmd->add_option("--joint", o.joint, "AGENT=STRATEGY,...")->required();

  auto* attribute = app.add_subcommand("attribute", "Responsibility attributions in one play");
  add_common(attribute, true);
  add_agent(attribute);
  add_kind(attribute);
  attribute->add_option("--joint", o.joint, "AGENT=STRATEGY,...")->required();
  auto* lv = attribute->add_option("--liable", o.liable_value, "Liability for violating this value");
  attribute->add_option("--liable-formula", o.liable_formula, "Liability for this formula")->excludes(lv);

  auto* anticipate_cmd = app.add_subcommand("anticipate", "Worst responsibility a strategy risks");
  add_common(anticipate_cmd, true);
  add_agent(anticipate_cmd);
  add_strategy(anticipate_cmd);
  add_kind(anticipate_cmd);
  anticipate_cmd->add_flag("--all-witnesses", o.all_witnesses, "List every witness of the worst class");

  auto* dominance = app.add_subcommand("dominance", "Weak dominance between strategies");
  add_common(dominance, true);
  add_agent(dominance);
  add_strategy(dominance);

  auto* regret = app.add_subcommand("regret", "Anticipated regret");
  add_common(regret, true);
  add_agent(regret);
  add_strategy(regret);
  regret->add_flag("--all-witnesses", o.all_witnesses, "List every witness of the worst class");

  auto* recommend_cmd = app.add_subcommand("recommend", "Strategies minimising both kinds of responsibility");
  add_common(recommend_cmd, true);
  add_agent(recommend_cmd);

  auto* fuzz_cmd = app.add_subcommand("fuzz", "Check the theorems on random systems");
  add_common(fuzz_cmd, false);
  fuzz_cmd->add_option("-n,--count", o.count, "Number of instances");
  fuzz_cmd->add_option("--seed", o.seed, "Master seed");
  fuzz_cmd->add_option("--caps", o.caps, "NAME=NUMBER,... (agents, propositions, actions, horizon, depth, "
                                         "values_per_level, levels, strategy_ceiling)");
  fuzz_cmd->add_flag("--pure-random", o.pure_random, "Arbitrary formulas instead of templates");

  auto* explain = app.add_subcommand("explain", "Symbolic comparison of a strategy with its rivals");
  add_common(explain, true);
  add_agent(explain);
  add_strategy(explain);

  std::vector<const char*> argv{"mvresp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (*validate) return cmd_validate(o, out);
    if (*play_cmd) return cmd_play(o, out);
    if (*attribute) return cmd_attribute(o, out);
    if (*anticipate_cmd) return cmd_anticipate(o, out);
    if (*dominance) return cmd_dominance(o, out);
    if (*regret) return cmd_regret(o, out);
    if (*recommend_cmd) return cmd_recommend(o, out, err);
    if (*fuzz_cmd) return cmd_fuzz(o, out);
    if (*explain) return cmd_explain(o, out);
  } catch (const mvresp::error& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return internal;
  }
  return usage;
}

} // namespace mvresp::cli
