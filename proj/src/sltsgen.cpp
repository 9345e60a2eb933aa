#include "eventb/sltsgen.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "eventb/printer.hpp"
#include "eventb/simplify.hpp"
#include "eventb/wpcalc.hpp"

namespace eventb {

std::string to_string(DProvenance p) {
  switch (p) {
    case DProvenance::ProvedTrue:
      return "ProvedTrue";
    case DProvenance::GuardByProof:
      return "GuardByProof";
    case DProvenance::GuardByDefault:
      return "GuardByDefault";
    case DProvenance::Assumed:
      return "Assumed";
  }
  return "?";
}

std::string to_string(AProvenance p) {
  switch (p) {
    case AProvenance::ProvedTrue:
      return "ProvedTrue";
    case AProvenance::ReachByProof:
      return "ReachByProof";
    case AProvenance::ReachByDefault:
      return "ReachByDefault";
    case AProvenance::Assumed:
      return "Assumed";
  }
  return "?";
}

std::optional<DProvenance> parse_d_provenance(const std::string& s) {
  for (auto p : {DProvenance::ProvedTrue, DProvenance::GuardByProof, DProvenance::GuardByDefault,
                 DProvenance::Assumed}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

std::optional<AProvenance> parse_a_provenance(const std::string& s) {
  for (auto p : {AProvenance::ProvedTrue, AProvenance::ReachByProof, AProvenance::ReachByDefault,
                 AProvenance::Assumed}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

bool SltsTransition::d_is_true() const {
  if (d_provenance == DProvenance::ProvedTrue) return true;
  return d_provenance == DProvenance::Assumed && d.is_true();
}

bool SltsTransition::a_is_true() const {
  if (a_provenance == AProvenance::ProvedTrue) return true;
  return a_provenance == AProvenance::Assumed && a.is_true();
}

std::string SltsTransition::label() const {
  return std::string("[") + (d_is_true() ? "" : "G") + "][" + (a_is_true() ? "" : "G") + "]" + event;
}

std::string PoRecord::provenance() const {
  if (assumed) return "assumed";
  return outcome == Outcome::Unknown ? "budget" : "proved";
}

const SymbolicState* Slts::find_state(const std::string& id) const {
  for (const auto& s : states) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const SymbolicState* Slts::find_state_by_name(const std::string& name) const {
  for (const auto& s : states) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const SltsTransition* Slts::find_transition(const std::string& source, const std::string& event,
                                            const std::string& target) const {
  for (const auto& t : transitions) {
    if (t.source == source && t.event == event && t.target == target) return &t;
  }
  return nullptr;
}

std::vector<const SltsTransition*> Slts::outgoing(const std::string& source, const std::string& event) const {
  std::vector<const SltsTransition*> out;
  for (const auto& t : transitions) {
    if (t.source == source && t.event == event) out.push_back(&t);
  }
  return out;
}

PoRecord record(const Verdict& v, PoKind kind, const Signature& sig) {
  PoRecord r;
  r.id = v.id;
  r.kind = kind;
  r.outcome = v.outcome;
  r.assumed = v.assumed;
  if (v.witness) r.witness = v.witness->to_string(sig);
  return r;
}

std::vector<SymbolicState> build_states(const MachineModel& m) {
  if (m.assertions.empty()) {
    throw Error(Error::Kind::Semantic, "machine " + m.name + " has no state predicates (empty ASSERTIONS)");
  }
  std::vector<SymbolicState> out;
  out.push_back({kInitState, kInitState, Term::truth(true), Term::truth(true), true, {}});
  std::set<std::string> names{kInitState};
  for (std::size_t i = 0; i < m.assertions.size(); ++i) {
    SymbolicState s;
    s.id = "E" + std::to_string(i + 1);
    s.name = normalize_whitespace(to_text(m.assertions[i]));
    if (!names.insert(s.name).second) s.name += " [" + s.id + "]";
    s.predicate = m.assertions[i];
    s.interpretation = Term::conj({m.assertions[i], m.invariant});
    out.push_back(std::move(s));
  }
  return out;
}

ProofObligation completeness_po(const MachineModel& m) {
  return {m.name + ":complete", Term::implies(m.invariant, Term::disj(m.assertions)), PoKind::Validity,
          m.signature.variables()};
}

Verdict check_completeness(const MachineModel& m, const GenOptions& opts) {
  return decide(completeness_po(m), opts.budget, opts.assumptions);
}

namespace {

struct Decider {
  const MachineModel& m;
  const GenOptions& opts;
  std::vector<PoRecord>* ledger;

  Verdict operator()(std::string id, Term formula, PoKind kind) const {
    ProofObligation po{std::move(id), std::move(formula), kind, m.signature.variables()};
    Verdict v = decide(po, opts.budget, opts.assumptions);
    if (ledger) ledger->push_back(record(v, kind, m.signature));
    return v;
  }
};

bool decided(const Verdict& v) { return v.outcome != Outcome::Unknown; }

}  // namespace

Classification classify_transition(const MachineModel& m, const SymbolicState& source, const Event* e,
                                   const SymbolicState& target, const GenOptions& opts,
                                   std::vector<PoRecord>* ledger) {
  Decider po{m, opts, ledger};
  std::string event = e ? e->name : kInitEvent;
  std::string prefix = m.name + ":tr:" + source.id + ":" + event + ":" + target.id + ":po";
  Term guard = Term::truth(true);
  Subst action = m.initialisation;
  if (e) {
    NormalizedEvent ne = normalize_event(e->body);
    guard = ne.guard;
    action = ne.action;
  }
  const Term& ie = source.interpretation;

  SltsTransition t;
  t.source = source.id;
  t.target = target.id;
  t.event = event;
  if (!e) {
    t.d = Term::truth(true);
    t.d_provenance = DProvenance::ProvedTrue;
  } else {
    Verdict v1 = po(prefix + "1", Term::implies(ie, guard), PoKind::Validity);
    if (v1.outcome == Outcome::Valid) {
      t.d = Term::truth(true);
      t.d_provenance = v1.assumed ? DProvenance::Assumed : DProvenance::ProvedTrue;
    } else {
      Verdict v2 = po(prefix + "2", Term::implies(ie, Term::negate(guard)), PoKind::Validity);
      if (v2.outcome == Outcome::Valid) return std::nullopt;
      if (guard.is_false()) return std::nullopt;
      t.d = guard;
      bool by_proof = decided(v1) && decided(v2);
      bool assumed = v1.assumed || v2.assumed;
      if (opts.mode == GenMode::Strict) {
        Verdict v3 = po(prefix + "3", Term::conj({ie, guard}), PoKind::Satisfiability);
        if (v3.outcome == Outcome::Invalid) return std::nullopt;
        if (v3.outcome == Outcome::Valid) {
          by_proof = true;
          assumed = v3.assumed;
        }
      }
      if (!by_proof) {
        t.d_provenance = DProvenance::GuardByDefault;
      } else {
        t.d_provenance = assumed ? DProvenance::Assumed : DProvenance::GuardByProof;
      }
    }
  }

  Term hyp = Term::conj({ie, guard});
  Term reach = conjugate_wp(action, target.interpretation);
  Verdict v4 = po(prefix + "4", Term::implies(hyp, reach), PoKind::Validity);
  if (v4.outcome == Outcome::Valid) {
    t.a = Term::truth(true);
    t.a_provenance = v4.assumed ? AProvenance::Assumed : AProvenance::ProvedTrue;
    return t;
  }
  Verdict v5 = po(prefix + "5", Term::implies(hyp, wp(action, Term::negate(target.interpretation))),
                  PoKind::Validity);
  if (v5.outcome == Outcome::Valid || reach.is_false()) return std::nullopt;
  t.a = reach;
  bool by_proof = decided(v4) && decided(v5);
  bool assumed = v4.assumed || v5.assumed;
  if (opts.mode == GenMode::Strict) {
    Verdict v6 = po(prefix + "6", Term::conj({hyp, reach}), PoKind::Satisfiability);
    if (v6.outcome == Outcome::Invalid) return std::nullopt;
    if (v6.outcome == Outcome::Valid) {
      by_proof = true;
      assumed = v6.assumed;
    }
  }
  if (!by_proof) {
    t.a_provenance = AProvenance::ReachByDefault;
  } else {
    t.a_provenance = assumed ? AProvenance::Assumed : AProvenance::ReachByProof;
  }
  return t;
}

bool is_minimal(const Slts& s) {
  return std::none_of(s.transitions.begin(), s.transitions.end(), [](const SltsTransition& t) {
    return t.d_provenance == DProvenance::GuardByDefault || t.a_provenance == AProvenance::ReachByDefault;
  });
}

Slts generate(const MachineModel& m, const GenOptions& opts) {
  std::vector<SymbolicState> states = build_states(m);
  Slts out;
  out.machine = m.name;
  out.signature = m.signature;
  out.invariant = m.invariant;
  for (const auto& e : m.events) out.events.push_back(e.name);

  Verdict complete = check_completeness(m, opts);
  out.pos.push_back(record(complete, PoKind::Validity, m.signature));
  if (complete.outcome == Outcome::Invalid) {
    std::string msg = "completeness PO " + complete.id + " is invalid";
    if (complete.witness) msg += " (witness " + complete.witness->to_string(m.signature) + ")";
    if (!opts.force) throw Error(Error::Kind::Semantic, msg);
    out.warnings.push_back(msg + "; continuing because generation was forced");
  } else if (complete.outcome == Outcome::Unknown) {
    out.warnings.push_back("completeness PO " + complete.id + " was not discharged within the budget");
  }

  const auto& vars = m.signature.variables();
  for (std::size_t i = 1; i < states.size(); ++i) {
    ProofObligation sat{m.name + ":sat:" + states[i].id, states[i].interpretation, PoKind::Satisfiability, vars};
    Verdict v = decide(sat, opts.budget, opts.assumptions);
    out.pos.push_back(record(v, PoKind::Satisfiability, m.signature));
  }
  for (std::size_t i = 1; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      ProofObligation ov{m.name + ":overlap:" + states[i].id + ":" + states[j].id,
                         Term::conj({states[i].interpretation, states[j].interpretation}),
                         PoKind::Satisfiability, vars};
      Verdict v = decide(ov, opts.budget, opts.assumptions);
      out.pos.push_back(record(v, PoKind::Satisfiability, m.signature));
      if (v.outcome == Outcome::Valid) {
        out.warnings.push_back("states " + states[i].name + " and " + states[j].name + " overlap");
      }
    }
  }

  std::vector<bool> visited(states.size(), false);
  std::deque<std::size_t> work{0};
  visited[0] = true;
  while (!work.empty()) {
    std::size_t k = work.front();
    work.pop_front();
    const SymbolicState& src = states[k];
    std::vector<const Event*> events;
    if (src.initial) {
      events.push_back(nullptr);
    } else {
      for (const auto& e : m.events) events.push_back(&e);
    }
    for (const Event* e : events) {
      for (std::size_t f = 1; f < states.size(); ++f) {
        auto t = classify_transition(m, src, e, states[f], opts, &out.pos);
        if (!t) continue;
        out.transitions.push_back(std::move(*t));
        if (!visited[f]) {
          visited[f] = true;
          work.push_back(f);
        }
      }
    }
  }

  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!visited[i]) {
      out.unreached.push_back(states[i].id);
      out.warnings.push_back("state " + states[i].name + " is not reached");
    }
    if (visited[i] || opts.keep_all_states) out.states.push_back(states[i]);
  }
  std::map<std::string, std::string> name_of;
  for (const auto& s : states) name_of[s.id] = s.name;
  std::stable_sort(out.transitions.begin(), out.transitions.end(),
                   [&](const SltsTransition& a, const SltsTransition& b) {
                     return std::tie(name_of[a.source], a.event, name_of[a.target]) <
                            std::tie(name_of[b.source], b.event, name_of[b.target]);
                   });
  out.minimal = is_minimal(out);
  return out;
}

std::string ledger_text(const Slts& s) {
  std::ostringstream os;
  for (const auto& p : s.pos) {
    os << p.id << ' ' << to_string(p.kind) << ' ' << to_string(p.outcome) << ' ' << p.provenance() << '\n';
  }
  return os.str();
}

}  // namespace eventb
