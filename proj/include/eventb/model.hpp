#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eventb/substitution.hpp"
#include "eventb/term.hpp"

namespace eventb {

struct SetDecl {
  std::string name;
  std::vector<std::string> elements;
};

struct VarDecl {
  std::string name;
  Type type;
  Term domain;  // finite set term: BOOL, an enumerated set, an interval or an extension

  Term as_term(bool primed = false) const { return Term::var(name, type, domain, primed); }
};

/// Sets and state variables visible to a component, in declaration order.
class Signature {
 public:
  void add_set(SetDecl set);
  void add_variable(VarDecl var);

  const std::vector<SetDecl>& sets() const { return sets_; }
  const std::vector<VarDecl>& variables() const { return variables_; }

  const SetDecl* find_set(const std::string& name) const;
  const VarDecl* find_variable(const std::string& name) const;
  /// Set declaring `element`, with the element's index.
  std::optional<std::pair<const SetDecl*, Value>> find_element(const std::string& element) const;

  Term set_term(const std::string& name) const;
  /// Human-readable name of `v` under type `t`.
  std::string value_name(Value v, const Type& t) const;

 private:
  std::vector<SetDecl> sets_;
  std::vector<VarDecl> variables_;
};

struct Event {
  std::string name;
  Subst body;
};

struct MachineModel {
  std::string name;
  Signature signature;
  Term invariant = Term::truth(true);
  std::vector<Term> assertions;  // ordered state predicates P_1..P_n
  Subst initialisation;
  std::vector<Event> events;

  const Event* find_event(const std::string& name) const;
};

/// One `abstract <=> (sub_1 or ... or sub_k)` conjunct of a refinement's
/// ASSERTIONS clause. `abstract_predicate` ranges over abstract variables;
/// `substates` index into the refinement's assertion list.
struct DecompositionSpec {
  Term abstract_predicate;
  std::vector<std::size_t> substates;
};

/// A refinement with its abstraction inlined.
///
/// `concrete.signature` holds the concrete variables and every visible set;
/// `concrete.invariant` is the refinement invariant J as written, which also
/// mentions abstract variables. Abstract variables whose names clash with a
/// concrete one are renamed `abs_<name>` and `abs_<name> = <name>` is added
/// to J.
struct RefinementModel {
  MachineModel concrete;
  MachineModel abstraction;
  std::optional<Term> variant;
  std::vector<std::string> new_events;
  std::vector<DecompositionSpec> decompositions;
  std::vector<std::pair<std::string, std::string>> renamed;  // original -> renamed abstract variable

  const std::string& name() const { return concrete.name; }
  const std::string& refines() const { return abstraction.name; }
  const Term& gluing() const { return concrete.invariant; }
};

std::set<std::string> interface_of(const MachineModel& m);

/// Concrete variables followed by abstract variables.
std::vector<VarDecl> joint_variables(const RefinementModel& r);

/// Invariant of the refinement over concrete variables only:
/// exists abstract variables . (I_abstract & J).
Term concrete_invariant(const RefinementModel& r);

/// The refinement seen as a stand-alone machine over its concrete
/// variables, with `concrete_invariant` as invariant and the declared
/// substates as assertions.
MachineModel concrete_view(const RefinementModel& r);

/// Wraps `body` in existential quantifiers over `vars` (innermost last).
Term exists_over(const std::vector<VarDecl>& vars, Term body);
Term forall_over(const std::vector<VarDecl>& vars, Term body);

}  // namespace eventb
