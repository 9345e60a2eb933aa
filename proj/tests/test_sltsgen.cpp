#include <map>
#include <set>
#include <tuple>

#include "doctest.h"
#include "eventb/wpcalc.hpp"
#include "support.hpp"

using namespace eventb;

namespace {

using Triple = std::tuple<std::string, std::string, std::string>;

struct Expected {
  bool d_true = true;  // guard holds on every valuation of the source
  bool a_true = true;  // every enabled valuation can reach the target
};

// Transitions recomputed by enumerating valuations and executing events,
// restricted to states reachable in the resulting graph.
std::map<Triple, Expected> brute_force(const MachineModel& m) {
  const auto& vars = m.signature.variables();
  auto states = build_states(m);
  auto all = testing::all_states(m);
  std::map<Triple, Expected> found;
  auto holds = [&](const Term& p, const State& s) { return evaluate(p, to_valuation(s, vars)); };
  for (const auto& src : states) {
    std::vector<std::pair<std::string, const Subst*>> events;
    if (src.initial) {
      events.push_back({kInitEvent, &m.initialisation});
    } else {
      for (const auto& e : m.events) events.push_back({e.name, &e.body});
    }
    for (const auto& [name, body] : events) {
      for (const auto& tgt : states) {
        if (tgt.initial) continue;
        Expected x;
        bool any = false;
        for (const auto& s : all) {
          if (!holds(src.interpretation, s)) continue;
          auto next = execute(*body, s, vars);
          if (next.empty()) {
            x.d_true = false;
            continue;
          }
          bool reach = false;
          for (const auto& n : next) reach = reach || holds(tgt.interpretation, n);
          any = any || reach;
          x.a_true = x.a_true && reach;
        }
        if (any) found[{src.id, name, tgt.id}] = x;
      }
    }
  }
  std::set<std::string> reached{kInitState};
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [t, x] : found) {
      if (reached.contains(std::get<0>(t)) && reached.insert(std::get<2>(t)).second) grew = true;
    }
  }
  std::map<Triple, Expected> out;
  for (const auto& [t, x] : found) {
    if (reached.contains(std::get<0>(t))) out[t] = x;
  }
  return out;
}

std::string label_of(const Slts& s, const std::string& src, const std::string& ev, const std::string& tgt) {
  const auto* a = s.find_state_by_name(src);
  const auto* b = s.find_state_by_name(tgt);
  if (!a || !b) return "missing-state";
  const auto* t = s.find_transition(a->id, ev, b->id);
  return t ? t->label().substr(0, t->label().size() - ev.size()) : "none";
}

}  // namespace

TEST_CASE("Demoney SLTS at full budget") {
  auto m = testing::machine("demoney.mch");
  Slts s = generate(m);
  REQUIRE(s.states.size() == 3);
  CHECK(s.states[1].name == "Error=FALSE");
  CHECK(s.states[2].name == "Error=TRUE");
  CHECK(s.minimal);
  CHECK(is_minimal(s));
  CHECK(s.transitions.size() == 13);
  for (const auto& t : s.transitions) CHECK(t.d_is_true());

  CHECK(label_of(s, "Init", kInitEvent, "Error=FALSE") == "[][]");
  CHECK(label_of(s, "Error=TRUE", "GetData", "Error=FALSE") == "[][]");
  CHECK(label_of(s, "Error=TRUE", "GetData", "Error=TRUE") == "none");
  CHECK(label_of(s, "Error=FALSE", "GetData", "Error=TRUE") == "[][G]");
  CHECK(label_of(s, "Error=FALSE", "Reset", "Error=FALSE") == "[][]");
  CHECK(label_of(s, "Error=TRUE", "Reset", "Error=FALSE") == "[][]");
  CHECK(label_of(s, "Error=FALSE", "Reset", "Error=TRUE") == "none");
  CHECK(label_of(s, "Error=TRUE", "Reset", "Error=TRUE") == "none");
  CHECK(label_of(s, "Error=FALSE", "CompleteTransaction", "Error=TRUE") == "[][G]");
  CHECK(label_of(s, "Error=TRUE", "CompleteTransaction", "Error=TRUE") == "[][]");

  const auto* get = s.find_transition("E1", "GetData", "E2");
  REQUIRE(get);
  CHECK(get->a_provenance == AProvenance::ReachByProof);
  Verdict same = decide({"eq",
                         Term::implies(s.states[1].interpretation,
                                       Term::equiv(get->a, parse_predicate("EngagedTrans = TRUE", m.signature))),
                         PoKind::Validity, m.signature.variables()},
                        1000);
  CHECK(same.outcome == Outcome::Valid);
  CHECK(s.pos.size() == 48);
  CHECK(s.warnings.empty());
}

TEST_CASE("stored transitions match brute-force enumeration on every fixture") {
  for (const auto& m : testing::corpus()) {
    CAPTURE(m.name);
    Slts s = generate(m);
    auto expected = brute_force(m);
    std::map<Triple, const SltsTransition*> got;
    for (const auto& t : s.transitions) got[{t.source, t.event, t.target}] = &t;
    CHECK(got.size() == expected.size());
    for (const auto& [key, x] : expected) {
      CAPTURE(std::get<0>(key) + " " + std::get<1>(key) + " " + std::get<2>(key));
      auto it = got.find(key);
      REQUIRE(it != got.end());
      CHECK(it->second->d_is_true() == x.d_true);
      CHECK(it->second->a_is_true() == x.a_true);
      CHECK(it->second->d_provenance != DProvenance::GuardByDefault);
      CHECK(it->second->a_provenance != AProvenance::ReachByDefault);
    }
    CHECK(s.minimal);
  }
}

TEST_CASE("computed D and A are exact on their source states") {
  for (const auto& m : testing::corpus()) {
    const auto& vars = m.signature.variables();
    Slts s = generate(m);
    for (const auto& t : s.transitions) {
      if (t.source == kInitState) continue;
      const Event* e = m.find_event(t.event);
      const auto& src = *s.find_state(t.source);
      const auto& tgt = *s.find_state(t.target);
      for (const auto& st : testing::all_states(m)) {
        Valuation v = to_valuation(st, vars);
        if (!evaluate(src.interpretation, v)) continue;
        auto next = execute(e->body, st, vars);
        CHECK(evaluate(t.d, v) == !next.empty());
        if (next.empty()) continue;
        bool reach = false;
        for (const auto& n : next) reach = reach || evaluate(tgt.interpretation, to_valuation(n, vars));
        CAPTURE(t.event);
        CHECK(evaluate(t.a, v) == reach);
      }
    }
  }
}

TEST_CASE("budget 1 keeps every transition by default") {
  auto m = testing::machine("demoney.mch");
  GenOptions o;
  o.budget = 1;
  Slts s = generate(m, o);
  CHECK(!s.minimal);
  CHECK(!is_minimal(s));
  for (const auto& t : s.transitions) {
    CAPTURE(t.source + " " + t.event + " " + t.target);
    CHECK((t.d_provenance == DProvenance::GuardByDefault || t.a_provenance == AProvenance::ReachByDefault));
    CHECK(!t.d.is_false());
    CHECK(!t.a.is_false());
  }
  for (const auto& p : s.pos) CHECK(p.outcome == Outcome::Unknown);
  Slts full = generate(m);
  for (const auto& t : full.transitions) CHECK(s.find_transition(t.source, t.event, t.target) != nullptr);
}

TEST_CASE("strict mode decides the satisfiability obligations") {
  auto m = testing::machine("kinds.mch");
  GenOptions o;
  o.mode = GenMode::Strict;
  Slts strict = generate(m, o);
  Slts plain = generate(m);
  CHECK(strict.transitions.size() == plain.transitions.size());
  bool po3 = false;
  bool po6 = false;
  for (const auto& p : strict.pos) {
    po3 = po3 || p.id.ends_with(":po3");
    po6 = po6 || p.id.ends_with(":po6");
  }
  CHECK(po3);
  CHECK(po6);
  for (const auto& p : plain.pos) CHECK(!p.id.ends_with(":po3"));
}

TEST_CASE("assumed verdicts change provenance") {
  auto m = testing::machine("demoney.mch");
  GenOptions o;
  o.budget = 1;
  o.assumptions.add("Demoney:tr:E1:GetData:E1:po1", Outcome::Valid);
  o.assumptions.add("Demoney:tr:E1:GetData:E1:po4", Outcome::Valid);
  o.assumptions.add("Demoney:tr:E2:GetData:E2:po1", Outcome::Valid);
  o.assumptions.add("Demoney:tr:E2:GetData:E2:po5", Outcome::Valid);
  Slts s = generate(m, o);
  const auto* t = s.find_transition("E1", "GetData", "E1");
  REQUIRE(t);
  CHECK(t->d_provenance == DProvenance::Assumed);
  CHECK(t->a_provenance == AProvenance::Assumed);
  CHECK(t->label() == "[][]GetData");
  CHECK(!s.find_transition("E2", "GetData", "E2"));
  std::string ledger = ledger_text(s);
  CHECK(ledger.find("Demoney:tr:E1:GetData:E1:po1 validity VALID assumed\n") != std::string::npos);
  CHECK(ledger.find("Demoney:complete validity UNKNOWN budget\n") != std::string::npos);
}

TEST_CASE("completeness obligation") {
  CHECK(check_completeness(testing::machine("demoney.mch")).outcome == Outcome::Valid);
  CHECK(check_completeness(concrete_view(testing::refinement("demoney_r1.ref"))).outcome == Outcome::Valid);
  auto m = parse_machine(
      "MACHINE Gap\nVARIABLES x\nINVARIANT x : 0..2\nASSERTIONS x = 0 or x = 1\nINITIALISATION x := 0\n"
      "EVENTS up = SELECT x < 2 THEN x := x + 1 END\nEND");
  Verdict v = check_completeness(m);
  CHECK(v.outcome == Outcome::Invalid);
  CHECK(v.witness->to_string(m.signature) == "x=2");
  CHECK_THROWS_AS(generate(m), Error);
  GenOptions o;
  o.force = true;
  Slts s = generate(m, o);
  CHECK(!s.warnings.empty());
  CHECK(s.outgoing("E2", "up").empty());
}

TEST_CASE("unreached states are reported and dropped unless kept") {
  auto m = parse_machine(
      "MACHINE Two\nVARIABLES x\nINVARIANT x : BOOL\nASSERTIONS x = FALSE or x = TRUE\nINITIALISATION x := FALSE\n"
      "EVENTS stay = skip\nEND");
  Slts s = generate(m);
  CHECK(s.states.size() == 2);
  CHECK(s.unreached == std::vector<std::string>{"E2"});
  CHECK(!s.warnings.empty());
  GenOptions o;
  o.keep_all_states = true;
  Slts all = generate(m, o);
  CHECK(all.states.size() == 3);
  CHECK(all.outgoing("E2", "stay").empty());
}

TEST_CASE("states are named after their predicates") {
  auto states = build_states(testing::machine("kinds.mch"));
  REQUIRE(states.size() == 3);
  CHECK(states[0].id == "Init");
  CHECK(states[0].initial);
  CHECK(states[1].id == "E1");
  CHECK(states[1].name == "n=0");
  CHECK(states[2].name == "n>0");
  auto m = parse_machine("MACHINE E\nVARIABLES x\nINVARIANT x : BOOL\nINITIALISATION x := TRUE\nEND");
  CHECK_THROWS_AS(build_states(m), Error);
}

TEST_CASE("provenance names round trip") {
  for (auto p : {DProvenance::ProvedTrue, DProvenance::GuardByProof, DProvenance::GuardByDefault,
                 DProvenance::Assumed}) {
    CHECK(parse_d_provenance(to_string(p)) == p);
  }
  for (auto p : {AProvenance::ProvedTrue, AProvenance::ReachByProof, AProvenance::ReachByDefault,
                 AProvenance::Assumed}) {
    CHECK(parse_a_provenance(to_string(p)) == p);
  }
  CHECK(!parse_d_provenance("Sometimes"));
}
