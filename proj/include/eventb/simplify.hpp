#pragma once

#include "eventb/term.hpp"

namespace eventb {

/// Light-weight rewriting: constant folding, flattening of `&`/`or`,
/// removal of duplicate and complementary literals, double negation, and
/// folding of quantifiers whose body no longer mentions the bound variable.
/// The result is equivalent to the input on every valuation.
Term simplify(const Term& t);

/// True when the finite set term denotes at least one element. Only decides
/// closed sets; returns false when unsure.
bool known_nonempty(const Term& set);

}  // namespace eventb
