#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eventb/sltsgen.hpp"

namespace eventb {

/// Quantifier-free disjunction of cubes over `vars` equivalent to `p`, where
/// `p` may mention no other free variable. Computed by enumerating the
/// valuation space; nullopt when it exceeds `budget`.
std::optional<Term> dnf_by_enumeration(const Term& p, const std::vector<VarDecl>& vars, const Signature& sig,
                                       std::uint64_t budget);

struct ProjectedState {
  SymbolicState state;
  std::string abstract_state;  // name of the projected abstract state
  bool eliminated = false;     // unsatisfiable under the concrete invariant
  Verdict verdict;             // equivalence of `state.predicate` and the quantified form
};

/// Proj_L(E^S): the abstract state's interpretation pushed through the
/// gluing invariant and existentially closed over the abstract variables.
/// `abstract_state` must be expressed over the refinement's (possibly
/// renamed) abstract variables.
ProjectedState project_state(const SymbolicState& abstract_state, const RefinementModel& r,
                             const GenOptions& opts = {});

struct Decomposition {
  std::string super_state;
  Term abstract_predicate;
  std::vector<std::string> substates;  // state ids E<k> of the concrete view
  Verdict verdict;
};

/// Checks every ASSERTIONS equivalence: the union of the substates equals
/// the projection of the abstract predicate.
std::vector<Decomposition> check_decompositions(const RefinementModel& r, const GenOptions& opts = {});

/// Projected SLTS of the refinement: the declared substates, grouped under
/// their super-states. Throws Error{Semantic} when a decomposition is
/// Invalid.
Slts generate_projected(const RefinementModel& r, const GenOptions& opts = {});

struct LemmaEntry {
  std::string source;  // concrete state id
  std::string event;
  std::string target;
  std::string abstract_source;  // abstract state id
  std::string abstract_target;
  PoRecord po;
};

/// I(E^S) & J & I(E^R) & D' => D for every projected transition labelled by
/// an abstract event. D is false when the abstract transition is absent.
/// `abstract_slts` must be generated from `r.abstraction`.
std::vector<LemmaEntry> check_projection_lemma(const Slts& abstract_slts, const Slts& projected,
                                               const RefinementModel& r, const GenOptions& opts = {});

/// Initialisation, event, new-event, variant and liveness obligations.
/// Throws Error{Semantic} when new events exist without a variant.
std::vector<PoRecord> gen_refinement_pos(const RefinementModel& r, const GenOptions& opts = {});

/// Abstract predicate over the refinement's abstract variables, printed
/// with the names as written in the abstraction.
std::string abstract_name(const RefinementModel& r, const Term& abstract_predicate);

}  // namespace eventb
