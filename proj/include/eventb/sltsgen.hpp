#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eventb/model.hpp"
#include "eventb/prover.hpp"

namespace eventb {

inline constexpr const char* kInitEvent = "INITIALISATION";
inline constexpr const char* kInitState = "Init";

enum class DProvenance { ProvedTrue, GuardByProof, GuardByDefault, Assumed };
enum class AProvenance { ProvedTrue, ReachByProof, ReachByDefault, Assumed };

std::string to_string(DProvenance p);
std::string to_string(AProvenance p);
std::optional<DProvenance> parse_d_provenance(const std::string& s);
std::optional<AProvenance> parse_a_provenance(const std::string& s);

struct SymbolicState {
  std::string id;    // Init, E1, E2, ...
  std::string name;  // whitespace-normalized predicate text; "Init" for the initial state
  Term predicate;    // P_i (true for Init)
  Term interpretation;
  bool initial = false;
  std::vector<std::string> super_states;  // names of enclosing hierarchical states
};

struct SltsTransition {
  std::string source;  // state ids
  std::string target;
  std::string event;
  Term d;
  Term a;
  DProvenance d_provenance = DProvenance::ProvedTrue;
  AProvenance a_provenance = AProvenance::ProvedTrue;

  /// Compact label `[d][a]Event`.
  std::string label() const;
  bool d_is_true() const;
  bool a_is_true() const;
};

struct PoRecord {
  std::string id;
  PoKind kind = PoKind::Validity;
  Outcome outcome = Outcome::Unknown;
  bool assumed = false;
  std::string witness;  // rendered valuation, empty when absent

  /// `proved`, `assumed` or `budget`.
  std::string provenance() const;
};

struct SuperState {
  std::string name;
  Term predicate;
  std::vector<std::string> substates;  // state ids
  Outcome verdict = Outcome::Unknown;
};

struct Slts {
  std::string machine;
  Signature signature;
  Term invariant;
  std::vector<std::string> events;
  std::vector<SymbolicState> states;  // states[0] is the initial state
  std::vector<SltsTransition> transitions;
  std::vector<SuperState> super_states;
  std::vector<std::string> unreached;  // declared state ids never reached
  bool minimal = true;
  std::vector<PoRecord> pos;
  std::vector<std::string> warnings;

  const SymbolicState* find_state(const std::string& id) const;
  const SymbolicState* find_state_by_name(const std::string& name) const;
  const SltsTransition* find_transition(const std::string& source, const std::string& event,
                                        const std::string& target) const;
  /// Transitions leaving `source` labelled `event`.
  std::vector<const SltsTransition*> outgoing(const std::string& source, const std::string& event) const;
};

enum class GenMode { Default, Strict };

struct GenOptions {
  GenMode mode = GenMode::Default;
  std::uint64_t budget = 1'000'000;
  AssumptionTable assumptions;
  bool force = false;           // continue when the completeness PO is Invalid
  bool keep_all_states = false;  // keep declared but unreached states
};

/// Init followed by one state per assertion predicate. Throws on an empty
/// assertion list.
std::vector<SymbolicState> build_states(const MachineModel& m);

/// Validity PO I => P_1 or ... or P_n.
ProofObligation completeness_po(const MachineModel& m);
Verdict check_completeness(const MachineModel& m, const GenOptions& opts = {});

using Classification = std::optional<SltsTransition>;

/// Decides the POs of one (E, e, F) triple. `e` is null for the
/// initialisation pseudo-event. Decided POs are appended to `ledger` when
/// given. Returns nullopt when the transition is eliminated.
Classification classify_transition(const MachineModel& m, const SymbolicState& source, const Event* e,
                                   const SymbolicState& target, const GenOptions& opts,
                                   std::vector<PoRecord>* ledger = nullptr);

/// Worklist generation from the initial state. Throws Error{Semantic} when
/// the completeness PO is Invalid and `opts.force` is not set.
Slts generate(const MachineModel& m, const GenOptions& opts = {});

/// No transition carries a ByDefault provenance.
bool is_minimal(const Slts& s);

/// `<id> <kind> <outcome> <provenance>` lines.
std::string ledger_text(const Slts& s);

PoRecord record(const Verdict& v, PoKind kind, const Signature& sig);

}  // namespace eventb
