#pragma once

#include <random>
#include <string>
#include <variant>
#include <vector>

#include "eventb/oracle.hpp"
#include "eventb/parser.hpp"
#include "eventb/printer.hpp"
#include "eventb/refinement.hpp"

namespace testing {

inline std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

inline eventb::MachineModel machine(const std::string& name) {
  return std::get<eventb::MachineModel>(eventb::load_component(fixture(name)));
}

inline eventb::RefinementModel refinement(const std::string& name) {
  return std::get<eventb::RefinementModel>(eventb::load_component(fixture(name)));
}

inline const std::vector<std::string>& machine_fixtures() {
  static const std::vector<std::string> names{"demoney.mch", "lamp.mch", "kinds.mch"};
  return names;
}

inline const std::vector<std::string>& refinement_fixtures() {
  static const std::vector<std::string> names{"demoney_r1.ref", "demoney_id.ref", "lamp_broken.ref", "lamp_dim.ref",
                                              "lamp_id.ref"};
  return names;
}

/// Every machine of the corpus, refinements seen through their concrete view.
inline std::vector<eventb::MachineModel> corpus() {
  std::vector<eventb::MachineModel> out;
  for (const auto& n : machine_fixtures()) out.push_back(machine(n));
  for (const auto& n : refinement_fixtures()) out.push_back(eventb::concrete_view(refinement(n)));
  return out;
}

/// Random quantifier-free predicate over `vars`: literals `x = v`, `x /= v`
/// combined with &, or, not.
inline eventb::Term random_predicate(std::mt19937& rng, const eventb::Signature& sig, int depth) {
  using eventb::Term;
  const auto& vars = sig.variables();
  std::uniform_int_distribution<int> pick(0, 5);
  int k = depth <= 0 ? 0 : pick(rng);
  if (k <= 1) {
    const auto& x = vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)];
    auto values = eventb::domain_values(x.domain);
    auto v = values[std::uniform_int_distribution<std::size_t>(0, values.size() - 1)(rng)];
    Term lit = eventb::parse_predicate(x.name + " = " + sig.value_name(v, x.type), sig);
    return k == 0 ? lit : Term::negate(lit);
  }
  if (k == 2) return Term::negate(random_predicate(rng, sig, depth - 1));
  if (k == 3) return Term::disj({random_predicate(rng, sig, depth - 1), random_predicate(rng, sig, depth - 1)});
  return Term::conj({random_predicate(rng, sig, depth - 1), random_predicate(rng, sig, depth - 1)});
}

inline std::vector<eventb::State> all_states(const eventb::MachineModel& m) {
  return eventb::invariant_states(eventb::Term::truth(true), m.signature.variables());
}

}  // namespace testing
