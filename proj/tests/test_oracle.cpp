#include <set>

#include "doctest.h"
#include "eventb/wpcalc.hpp"
#include "support.hpp"

using namespace eventb;

namespace {

std::size_t geometric(std::size_t base, std::size_t depth) {
  std::size_t total = 0;
  std::size_t level = 1;
  for (std::size_t d = 0; d <= depth; ++d) {
    total += level;
    level *= base;
  }
  return total;
}

bool events_always_enabled(const MachineModel& m) {
  for (const auto& e : m.events) {
    for (const auto& s : testing::all_states(m)) {
      if (execute(e.body, s, m.signature.variables()).empty()) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("initial states") {
  auto d = testing::machine("demoney.mch");
  CHECK(initial_states(d) == std::vector<State>{{0, 0}});
  auto k = testing::machine("kinds.mch");
  CHECK(initial_states(k).size() == 3);
}

TEST_CASE("trace counts match the closed form when every event is always enabled") {
  auto d = testing::machine("demoney.mch");
  REQUIRE(events_always_enabled(d));
  CHECK(enumerate_traces(d, 5).size() == geometric(4, 5));
  auto r1 = concrete_view(testing::refinement("demoney_r1.ref"));
  REQUIRE(events_always_enabled(r1));
  CHECK(enumerate_traces(r1, 4).size() == geometric(4, 4));
  // Lamp alternates SwitchOn and SwitchOff: one trace per length.
  CHECK(enumerate_traces(testing::machine("lamp.mch"), 6).size() == 7);
}

TEST_CASE("Demoney and Demoney_R1 traces equal their paths") {
  auto d = testing::machine("demoney.mch");
  EqualityReport a = check_trace_path_equality(d, generate(d), 5);
  CHECK(a.equal);
  CHECK(a.traces == 1365);
  CHECK(a.paths == 1365);
  auto r = testing::refinement("demoney_r1.ref");
  EqualityReport b = check_trace_path_equality(concrete_view(r), generate_projected(r), 4);
  CHECK(b.equal);
  CHECK(b.traces == 341);
}

TEST_CASE("trace and path equality on the whole corpus") {
  for (const auto& m : testing::corpus()) {
    CAPTURE(m.name);
    EqualityReport rep = check_trace_path_equality(m, generate(m), 3);
    CHECK(rep.equal);
  }
}

TEST_CASE("traces and paths are prefix closed and witnessed") {
  for (const auto& m : testing::corpus()) {
    const auto& vars = m.signature.variables();
    Slts s = generate(m);
    auto traces = enumerate_traces(m, 3);
    std::set<std::vector<std::string>> seen;
    for (const auto& t : traces) seen.insert(t.events);
    for (const auto& t : traces) {
      CHECK(t.events.front() == kInitEvent);
      CHECK(t.witness.size() == t.events.size());
      auto prefix = t.events;
      if (prefix.size() > 1) {
        prefix.pop_back();
        CHECK(seen.contains(prefix));
      }
      for (std::size_t i = 1; i < t.events.size(); ++i) {
        auto next = execute(m.find_event(t.events[i])->body, t.witness[i - 1], vars);
        CHECK(std::find(next.begin(), next.end(), t.witness[i]) != next.end());
      }
    }
    auto paths = enumerate_paths(s, m, 3);
    std::set<std::vector<std::string>> pseen;
    for (const auto& p : paths) pseen.insert(p.events);
    for (const auto& p : paths) {
      REQUIRE(p.states.size() == p.events.size() + 1);
      CHECK(p.states.front() == kInitState);
      auto prefix = p.events;
      if (prefix.size() > 1) {
        prefix.pop_back();
        CHECK(pseen.contains(prefix));
      }
      for (std::size_t i = 0; i < p.witness.size(); ++i) {
        Valuation v = to_valuation(p.witness[i], vars);
        CHECK(evaluate(s.find_state(p.states[i + 1])->interpretation, v));
        CHECK(s.find_transition(p.states[i], p.events[i], p.states[i + 1]) != nullptr);
      }
    }
  }
}

TEST_CASE("deleting any Lamp transition breaks equality") {
  auto m = testing::machine("lamp.mch");
  Slts s = generate(m);
  for (std::size_t i = 0; i < s.transitions.size(); ++i) {
    Slts mutant = s;
    mutant.transitions.erase(mutant.transitions.begin() + static_cast<std::ptrdiff_t>(i));
    EqualityReport rep = check_trace_path_equality(m, mutant, 3);
    CHECK(!rep.equal);
    REQUIRE(rep.divergence);
    CHECK(rep.divergence_is_trace);
  }
}

TEST_CASE("an extra transition shows up as a path without trace") {
  auto m = testing::machine("lamp.mch");
  Slts s = generate(m);
  SltsTransition bogus = s.transitions.back();
  bogus.event = "SwitchOn";
  bogus.target = bogus.source == "E1" ? "E2" : "E1";
  bogus.source = bogus.target == "E1" ? "E2" : "E1";
  s.transitions.push_back(bogus);
  // Relational crossing still forbids it: the guard of SwitchOn fails in on=TRUE.
  CHECK(check_trace_path_equality(m, s, 3).equal);
  Slts loose = s;
  for (auto& t : loose.transitions) t.d = Term::truth(true);
  CHECK(check_trace_path_equality(m, loose, 3).equal);
}

TEST_CASE("budget-starved SLTS over-approximates traces") {
  auto m = testing::machine("demoney.mch");
  GenOptions o;
  o.budget = 1;
  CHECK(traces_included_in_paths(m, generate(m, o), 4));
  auto r = testing::refinement("demoney_r1.ref");
  CHECK(traces_included_in_paths(concrete_view(r), generate_projected(r, o), 3));
}

TEST_CASE("event sequences print dotted") {
  CHECK(join_events({"INITIALISATION", "Reset", "GetData"}) == "INITIALISATION.Reset.GetData");
  CHECK(join_events({}).empty());
}
