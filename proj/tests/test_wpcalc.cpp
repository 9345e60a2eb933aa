#include <set>

#include "doctest.h"
#include "eventb/wpcalc.hpp"
#include "support.hpp"

using namespace eventb;

namespace {

struct Case {
  std::string where;
  Subst body;
};

std::vector<Case> substitutions(const MachineModel& m) {
  std::vector<Case> out{{m.name + ".INITIALISATION", m.initialisation}};
  for (const auto& e : m.events) out.push_back({m.name + "." + e.name, e.body});
  return out;
}

std::vector<Term> postconditions(const MachineModel& m, std::mt19937& rng) {
  std::vector<Term> out = m.assertions;
  out.push_back(m.invariant);
  out.push_back(Term::truth(true));
  out.push_back(Term::truth(false));
  for (int i = 0; i < 12; ++i) out.push_back(testing::random_predicate(rng, m.signature, 3));
  return out;
}

}  // namespace

TEST_CASE("wp, conjugate wp and fis agree with relational execution on the whole corpus") {
  std::mt19937 rng(20240611);
  std::size_t checked = 0;
  for (const auto& m : testing::corpus()) {
    const auto& vars = m.signature.variables();
    auto states = testing::all_states(m);
    auto posts = postconditions(m, rng);
    for (const auto& c : substitutions(m)) {
      Term feasible = fis(c.body);
      std::vector<Term> w;
      std::vector<Term> cw;
      std::vector<Term> dual;
      for (const auto& r : posts) {
        w.push_back(wp(c.body, r));
        cw.push_back(conjugate_wp(c.body, r));
        dual.push_back(Term::negate(wp(c.body, Term::negate(r))));
      }
      for (const auto& s : states) {
        Valuation v = to_valuation(s, vars);
        auto next = execute(c.body, s, vars);
        CAPTURE(c.where);
        CAPTURE(v.to_string(m.signature));
        CHECK(evaluate(feasible, v) == !next.empty());
        for (std::size_t k = 0; k < posts.size(); ++k) {
          bool all = true;
          bool some = false;
          for (const auto& x : next) {
            bool holds = evaluate(posts[k], to_valuation(x, vars));
            all = all && holds;
            some = some || holds;
          }
          CAPTURE(to_text(posts[k]));
          CHECK(evaluate(w[k], v) == all);
          CHECK(evaluate(cw[k], v) == some);
          CHECK(evaluate(dual[k], v) == some);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 5000);
}

TEST_CASE("before-after predicate relates exactly the executions") {
  for (const auto& m : testing::corpus()) {
    const auto& vars = m.signature.variables();
    auto states = testing::all_states(m);
    for (const auto& c : substitutions(m)) {
      Term rel = prd(c.body, vars);
      for (const auto& s : states) {
        auto next = execute(c.body, s, vars);
        std::set<State> reached(next.begin(), next.end());
        for (const auto& t : states) {
          Valuation v = to_valuation(s, vars);
          for (std::size_t i = 0; i < vars.size(); ++i) v.push(VarKey{vars[i].name, true}, vars[i].type, t[i]);
          CAPTURE(c.where);
          CHECK(evaluate(rel, v) == reached.contains(t));
        }
      }
    }
  }
}

TEST_CASE("event normalization preserves behaviour") {
  for (const auto& m : testing::corpus()) {
    const auto& vars = m.signature.variables();
    for (const auto& e : m.events) {
      auto n = normalize_event(e.body);
      for (const auto& s : testing::all_states(m)) {
        auto whole = execute(e.body, s, vars);
        std::vector<State> split;
        if (evaluate(n.guard, to_valuation(s, vars))) split = execute(n.action, s, vars);
        CAPTURE(e.name);
        CHECK(whole == split);
      }
    }
  }
}

TEST_CASE("hand-computed transformer results") {
  auto lamp = testing::machine("lamp.mch");
  const auto& sig = lamp.signature;
  const Subst& on = lamp.find_event("SwitchOn")->body;
  CHECK(wp(on, parse_predicate("on = TRUE", sig)).is_true());
  CHECK(to_text(fis(on)) == "on=FALSE");
  CHECK(to_text(normalize_event(on).guard) == "on=FALSE");
  CHECK(to_text(conjugate_wp(on, parse_predicate("on = FALSE", sig))) == "false");

  auto d = testing::machine("demoney.mch");
  const Subst& get = d.find_event("GetData")->body;
  CHECK(fis(get).is_true());
  CHECK(to_text(conjugate_wp(get, parse_predicate("Error = TRUE", d.signature))) == "EngagedTrans=TRUE");
  CHECK(wp(get, parse_predicate("EngagedTrans = FALSE", d.signature)).is_true());
}

TEST_CASE("infeasible and miraculous substitutions") {
  auto k = testing::machine("kinds.mch");
  const Subst& stuck = k.find_event("Stuck")->body;
  for (const auto& s : testing::all_states(k)) {
    Valuation v = to_valuation(s, k.signature.variables());
    CHECK(!evaluate(fis(stuck), v));
    CHECK(evaluate(wp(stuck, Term::truth(false)), v));
  }
}
