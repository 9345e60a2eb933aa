#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eventb/model.hpp"
#include "eventb/prover.hpp"
#include "eventb/sltsgen.hpp"

namespace eventb {

/// Values of the machine variables in declaration order.
using State = std::vector<Value>;

Valuation to_valuation(const State& s, const std::vector<VarDecl>& vars);
State to_state(const Valuation& v, const std::vector<VarDecl>& vars);

/// All valuations of `vars` satisfying `invariant`.
std::vector<State> invariant_states(const Term& invariant, const std::vector<VarDecl>& vars);

/// Relational execution: every outcome of `s` from `from`. Empty when `s`
/// is infeasible there. Sorted and duplicate-free.
std::vector<State> execute(const Subst& s, const State& from, const std::vector<VarDecl>& vars);

/// Outcomes of event `e` (guard included) from `v`.
std::vector<Valuation> successors(const Valuation& v, const Event& e, const MachineModel& m);

/// Outcomes of the initialisation, whatever the before-values.
std::vector<State> initial_states(const MachineModel& m);

struct ConcreteTrace {
  std::vector<std::string> events;  // starts with INITIALISATION
  std::vector<State> witness;       // x_0 .. x_{n+1}
};

struct ConcretePath {
  std::vector<std::string> events;
  std::vector<std::string> states;  // state ids, starting with Init
  std::vector<State> witness;
};

/// One trace per distinct event sequence with at most `max_len` events after
/// the initialisation, in breadth-first then lexicographic order.
std::vector<ConcreteTrace> enumerate_traces(const MachineModel& m, std::size_t max_len);

/// One path per distinct event sequence, built from legal transition
/// crossings. `m` supplies the actions and the invariant the valuations
/// range over.
std::vector<ConcretePath> enumerate_paths(const Slts& s, const MachineModel& m, std::size_t max_len);

struct EqualityReport {
  bool equal = true;
  std::size_t traces = 0;
  std::size_t paths = 0;
  /// First event sequence present on one side only.
  std::optional<std::vector<std::string>> divergence;
  bool divergence_is_trace = false;  // true: a trace without path
};

EqualityReport check_trace_path_equality(const MachineModel& m, const Slts& s, std::size_t max_len);

/// Every trace sequence is a path sequence.
bool traces_included_in_paths(const MachineModel& m, const Slts& s, std::size_t max_len);

std::string join_events(const std::vector<std::string>& events);

}  // namespace eventb
