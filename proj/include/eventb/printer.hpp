#pragma once

#include <string>

#include "eventb/model.hpp"

namespace eventb {

/// Human style renders primed variables as `x'`; Machine style as `x$1`,
/// which the lexer reads back.
enum class PrintStyle { Human, Machine };

std::string to_text(const Term& t, PrintStyle style = PrintStyle::Human);
std::string to_text(const Subst& s, PrintStyle style = PrintStyle::Human);

/// Full component source in the accepted grammar.
std::string to_source(const MachineModel& m);
std::string to_source(const RefinementModel& r);

/// Collapses runs of whitespace into single spaces and trims.
std::string normalize_whitespace(const std::string& s);

}  // namespace eventb
