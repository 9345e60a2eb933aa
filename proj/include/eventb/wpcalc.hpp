#pragma once

#include <vector>

#include "eventb/model.hpp"

namespace eventb {

/// Weakest precondition [s]r, simplified.
Term wp(const Subst& s, const Term& r);

/// Feasibility: not [s]false.
Term fis(const Subst& s);

/// Conjugate weakest precondition <s>r = not [s] not r, computed directly
/// in its dual form so that results stay readable.
Term conjugate_wp(const Subst& s, const Term& r);

/// Before-after predicate over `vars` and their primed copies.
Term prd(const Subst& s, const std::vector<VarDecl>& vars);

struct NormalizedEvent {
  Term guard;
  Subst action;
};

/// Splits an event body into guard and action (e = G => T). A top-level
/// single-branch SELECT contributes its guard and is removed from the action.
NormalizedEvent normalize_event(const Subst& body);

}  // namespace eventb
