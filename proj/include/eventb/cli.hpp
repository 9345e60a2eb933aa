#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "eventb/sltsgen.hpp"

namespace eventb::cli {

enum class Command { Gen, GenRef, Check, Pos, Oracle };

enum class CheckMethods { Both, Syntactic, Semantic };

struct RunConfig {
  Command command = Command::Gen;
  std::string input;
  std::optional<std::string> abstraction;
  GenMode mode = GenMode::Default;
  std::uint64_t budget = 1'000'000;
  std::optional<std::string> assumptions;
  std::optional<std::string> properties;
  CheckMethods methods = CheckMethods::Both;
  std::optional<std::string> output;
  std::optional<std::string> dot;
  bool verbose_labels = false;
  std::size_t depth = 4;
  bool force = false;
  bool keep_all_states = false;
};

enum ExitCode : int { kOk = 0, kFalse = 1, kInconclusive = 2, kInputError = 3 };

/// Results go to `out`, warnings and errors to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace eventb::cli
