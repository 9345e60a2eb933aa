#pragma once

#include <string>

#include "eventb/sltsgen.hpp"

namespace eventb {

enum class LabelStyle { Compact, Verbose };

struct RenderOptions {
  bool show_provenance = false;  // second label line with the D and A predicates
  bool cluster_hierarchy = true;
  LabelStyle style = LabelStyle::Compact;
};

/// Graphviz digraph. Nodes are named after the state predicates; the
/// initial state is a point node; super-states become clusters.
std::string to_dot(const Slts& s, const RenderOptions& opts = {});

inline constexpr int kDumpVersion = 1;

/// JSON dump documented in docs/dump-schema.md. Keys are sorted.
std::string to_structured(const Slts& s);

/// Inverse of to_structured. Throws Error{Syntax} on malformed dumps and
/// Error{Semantic} on an unsupported version.
Slts load_structured(const std::string& text);

}  // namespace eventb
