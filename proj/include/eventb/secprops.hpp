#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eventb/model.hpp"
#include "eventb/sltsgen.hpp"

namespace eventb {

enum class PropertyKind { Enabled, AlwaysEnabled, Crossable, AlwaysCrossable };

std::string to_string(PropertyKind k);
bool has_target(PropertyKind k);

/// One (possibly negated) predicate application on a single event.
struct PropertyAtom {
  bool negated = false;
  PropertyKind kind = PropertyKind::Enabled;
  Term p1;
  std::string event;
  std::optional<Term> p2;

  std::string to_text() const;
};

/// Conjunction of atoms; `* except ...` selectors are expanded per event.
struct PropertyFormula {
  std::string label;
  std::string text;  // as written
  std::vector<PropertyAtom> atoms;
};

/// One formula per non-empty line:
///   [label:] [NOT] KIND p1 selector [-> p2] [&& ...]
/// p1/p2 are INV, true, false or a parenthesized predicate; the selector is
/// an event name or `*` optionally followed by `except E1 E2 ...`.
std::vector<PropertyFormula> parse_properties(const std::string& text, const Signature& sig, const Term& invariant,
                                              const std::vector<std::string>& events);

enum class Truth { True, False, Inconclusive };
enum class Method { Semantic, Syntactic };

std::string to_string(Truth t);

struct AtomResult {
  Truth truth = Truth::Inconclusive;
  std::set<int> cases;         // lemma cases used (syntactic)
  bool minimal_lemma = false;  // a case of the minimal-SLTS lemmas was needed
  std::vector<std::string> justification;
  std::string reason;  // why the result is inconclusive
};

struct CheckResult {
  Truth truth = Truth::Inconclusive;
  Method method = Method::Semantic;
  std::set<int> cases;
  bool minimal_lemma = false;
  std::vector<AtomResult> atoms;
  std::vector<std::string> justification;
  std::vector<std::string> warnings;

  /// `case 5 (minimal)`, `cases 5,6`, or `semantic`.
  std::string citation() const;
};

/// Decides the defining formulas of the predicates, relativized to the
/// invariant of `m`.
CheckResult check_semantic(const PropertyFormula& f, const MachineModel& m, std::uint64_t budget);

/// Uses only the states and transitions of `s` plus state-union recognition.
CheckResult check_syntactic(const PropertyFormula& f, const Slts& s, std::uint64_t budget);

/// The states of `s` whose interpretations union to `p` under the
/// invariant, or nullopt when `p` is not recognized as such a union.
std::optional<std::vector<std::string>> recognize_union(const Term& p, const Slts& s, std::uint64_t budget);

enum class Position { P1, P2 };

struct WeakenResult {
  PropertyAtom atom;
  PoRecord po;
};

/// Replaces p1 or p2 of `atom` by `replacement` following the implication
/// rules of the four predicates; the needed implication (relative to the
/// invariant) must be prover-Valid, else Error{Semantic}.
WeakenResult weaken(const PropertyAtom& atom, Position pos, const Term& replacement, const Signature& sig,
                    const Term& invariant, std::uint64_t budget);

/// AlwaysEnabled(INV, ev) for every event.
std::vector<PropertyFormula> reactivity_schema(const MachineModel& m);
/// AlwaysCrossable(INV, ev, not P) for every event but `begin`.
std::vector<PropertyFormula> unicity_schema(const MachineModel& m, const Term& p, const std::string& begin);

}  // namespace eventb
