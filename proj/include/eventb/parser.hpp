#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "eventb/model.hpp"

namespace eventb {

using Component = std::variant<MachineModel, RefinementModel>;

/// Maps the name in a REFINES clause to the abstraction's source text.
using SourceResolver = std::function<std::optional<std::string>(const std::string& machine_name)>;

/// Parses and type-checks a MACHINE or REFINEMENT. Refinements need a
/// resolver for their abstraction.
Component parse_component(const std::string& source, const SourceResolver& resolver = {});

MachineModel parse_machine(const std::string& source);
RefinementModel parse_refinement(const std::string& source, const std::string& abstraction_source);

/// Reads a component from disk. The abstraction of a refinement is looked up
/// as `<Name>.mch` (or its lower-case spelling) next to the file unless
/// `abstraction_path` is given.
Component load_component(const std::filesystem::path& path,
                         const std::optional<std::filesystem::path>& abstraction_path = std::nullopt);

std::string read_file(const std::filesystem::path& path);

/// Parses a stand-alone predicate over the variables of `sig`. When `inv` is
/// given, the identifier `INV` denotes it. Primed variables are accepted in
/// both `x'` and `x$1` spellings.
Term parse_predicate(const std::string& text, const Signature& sig, const Term* inv = nullptr);

}  // namespace eventb
