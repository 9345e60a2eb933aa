#include "eventb/secprops.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "eventb/parser.hpp"
#include "eventb/printer.hpp"
#include "eventb/wpcalc.hpp"

namespace eventb {

std::string to_string(PropertyKind k) {
  switch (k) {
    case PropertyKind::Enabled:
      return "Enabled";
    case PropertyKind::AlwaysEnabled:
      return "AlwaysEnabled";
    case PropertyKind::Crossable:
      return "Crossable";
    case PropertyKind::AlwaysCrossable:
      return "AlwaysCrossable";
  }
  return "?";
}

bool has_target(PropertyKind k) { return k == PropertyKind::Crossable || k == PropertyKind::AlwaysCrossable; }

std::string to_string(Truth t) {
  switch (t) {
    case Truth::True:
      return "TRUE";
    case Truth::False:
      return "FALSE";
    case Truth::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

std::string PropertyAtom::to_text() const {
  std::string out = negated ? "not " : "";
  out += to_string(kind) + "(" + eventb::to_text(p1) + ", " + event;
  if (p2) out += ", " + eventb::to_text(*p2);
  return out + ")";
}

std::string CheckResult::citation() const {
  if (method == Method::Semantic) return "semantic";
  if (truth == Truth::Inconclusive) return "none";
  if (cases.empty()) return "vacuous";
  std::string out = cases.size() == 1 ? "case " : "cases ";
  bool first = true;
  for (int c : cases) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(c);
  }
  if (minimal_lemma) out += " (minimal)";
  return out;
}

// ---- property files -------------------------------------------------------

namespace {

class LineScanner {
 public:
  LineScanner(std::string text, int line) : text_(std::move(text)), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool peek(const std::string& s) {
    skip_space();
    return text_.compare(pos_, s.size(), s) == 0;
  }
  bool accept(const std::string& s) {
    if (!peek(s)) return false;
    pos_ += s.size();
    return true;
  }
  std::string word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return text_.substr(start, pos_ - start);
  }
  // Parenthesized text including the parentheses, or a bare word.
  std::string operand() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      std::size_t start = pos_;
      int depth = 0;
      for (; pos_ < text_.size(); ++pos_) {
        if (text_[pos_] == '(') ++depth;
        if (text_[pos_] == ')' && --depth == 0) {
          ++pos_;
          return text_.substr(start, pos_ - start);
        }
      }
      fail("unbalanced parenthesis");
    }
    std::string w = word();
    if (w.empty()) fail("expected INV, true, false or a parenthesized predicate");
    return w;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Error::Kind::Syntax, msg, line_, static_cast<int>(pos_) + 1);
  }

 private:
  std::string text_;
  int line_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_conjuncts(const std::string& line) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '(') ++depth;
    if (line[i] == ')') --depth;
    if (depth == 0 && line.compare(i, 2, "&&") == 0) {
      out.push_back(line.substr(start, i - start));
      start = i + 2;
      ++i;
    }
  }
  out.push_back(line.substr(start));
  return out;
}

std::optional<PropertyKind> parse_kind(std::string w) {
  std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::toupper(c); });
  if (w == "ENABLED") return PropertyKind::Enabled;
  if (w == "ALWAYSENABLED") return PropertyKind::AlwaysEnabled;
  if (w == "CROSSABLE") return PropertyKind::Crossable;
  if (w == "ALWAYSCROSSABLE") return PropertyKind::AlwaysCrossable;
  return std::nullopt;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

}  // namespace

std::vector<PropertyFormula> parse_properties(const std::string& text, const Signature& sig, const Term& invariant,
                                              const std::vector<std::string>& events) {
  std::vector<PropertyFormula> out;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line.rfind("//", 0) == 0) continue;
    PropertyFormula f;
    f.text = line;
    // label
    auto colon = line.find(':');
    if (colon != std::string::npos) {
      std::string head = trim(line.substr(0, colon));
      bool ident = !head.empty() && std::all_of(head.begin(), head.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
      });
      if (ident && !parse_kind(head) && head != "NOT") {
        f.label = head;
        line = line.substr(colon + 1);
        f.text = trim(line);
      }
    }
    if (f.label.empty()) f.label = "L" + std::to_string(lineno);
    for (const auto& part : split_conjuncts(line)) {
      LineScanner sc(part, lineno);
      PropertyAtom proto;
      std::string w = sc.word();
      if (w == "NOT" || w == "not") {
        proto.negated = true;
        w = sc.word();
      }
      auto kind = parse_kind(w);
      if (!kind) sc.fail("expected ENABLED, ALWAYSENABLED, CROSSABLE or ALWAYSCROSSABLE, found '" + w + "'");
      proto.kind = *kind;
      proto.p1 = parse_predicate(sc.operand(), sig, &invariant);
      std::vector<std::string> selected;
      if (sc.accept("*")) {
        std::vector<std::string> excluded;
        if (sc.peek("except")) {
          sc.word();
          while (!sc.done() && !sc.peek("->")) {
            std::string ev = sc.word();
            if (ev.empty()) sc.fail("expected an event name");
            if (std::find(events.begin(), events.end(), ev) == events.end()) {
              throw Error(Error::Kind::UnknownIdentifier, "unknown event '" + ev + "'", lineno, 1);
            }
            excluded.push_back(ev);
          }
        }
        for (const auto& ev : events) {
          if (std::find(excluded.begin(), excluded.end(), ev) == excluded.end()) selected.push_back(ev);
        }
      } else {
        std::string ev = sc.word();
        if (ev.empty()) sc.fail("expected an event name or '*'");
        if (std::find(events.begin(), events.end(), ev) == events.end()) {
          throw Error(Error::Kind::UnknownIdentifier, "unknown event '" + ev + "'", lineno, 1);
        }
        selected.push_back(ev);
      }
      if (sc.accept("->")) {
        if (!has_target(proto.kind)) sc.fail(to_string(proto.kind) + " takes no target predicate");
        proto.p2 = parse_predicate(sc.operand(), sig, &invariant);
      } else if (has_target(proto.kind)) {
        sc.fail(to_string(proto.kind) + " needs '-> p2'");
      }
      if (!sc.done()) sc.fail("unexpected trailing text");
      for (const auto& ev : selected) {
        PropertyAtom a = proto;
        a.event = ev;
        f.atoms.push_back(std::move(a));
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

// ---- shared helpers -------------------------------------------------------

namespace {

Truth from_bool(bool b) { return b ? Truth::True : Truth::False; }

Truth negate(Truth t, bool neg) {
  if (!neg || t == Truth::Inconclusive) return t;
  return t == Truth::True ? Truth::False : Truth::True;
}

bool existential(PropertyKind k) { return k == PropertyKind::Enabled || k == PropertyKind::Crossable; }

void combine_atoms(CheckResult& r) {
  bool all_true = true;
  bool any_false = false;
  for (const auto& a : r.atoms) {
    all_true = all_true && a.truth == Truth::True;
    any_false = any_false || a.truth == Truth::False;
    r.cases.insert(a.cases.begin(), a.cases.end());
    r.minimal_lemma = r.minimal_lemma || a.minimal_lemma;
    r.justification.insert(r.justification.end(), a.justification.begin(), a.justification.end());
  }
  r.truth = any_false ? Truth::False : all_true ? Truth::True : Truth::Inconclusive;
}

}  // namespace

// ---- semantic checking ----------------------------------------------------

CheckResult check_semantic(const PropertyFormula& f, const MachineModel& m, std::uint64_t budget) {
  CheckResult r;
  r.method = Method::Semantic;
  const auto& vars = m.signature.variables();
  for (std::size_t k = 0; k < f.atoms.size(); ++k) {
    const PropertyAtom& a = f.atoms[k];
    const Event* e = m.find_event(a.event);
    if (!e) throw Error(Error::Kind::UnknownIdentifier, "unknown event '" + a.event + "'");
    Term inv_p1 = Term::conj({m.invariant, a.p1});
    ProofObligation po;
    po.id = "prop:" + f.label + ":" + std::to_string(k + 1);
    po.vars = vars;
    switch (a.kind) {
      case PropertyKind::Enabled:
        po.kind = PoKind::Satisfiability;
        po.formula = Term::conj({inv_p1, fis(e->body)});
        break;
      case PropertyKind::AlwaysEnabled:
        po.formula = Term::implies(inv_p1, fis(e->body));
        break;
      case PropertyKind::Crossable:
        po.kind = PoKind::Satisfiability;
        po.formula = Term::conj({inv_p1, conjugate_wp(e->body, *a.p2)});
        break;
      case PropertyKind::AlwaysCrossable:
        po.formula = Term::implies(inv_p1, wp(e->body, *a.p2));
        break;
    }
    Verdict v = decide(po, budget);
    AtomResult ar;
    ar.truth = v.outcome == Outcome::Unknown ? Truth::Inconclusive : negate(from_bool(v.outcome == Outcome::Valid), a.negated);
    std::string j = po.id + " " + to_string(v.outcome);
    if (v.witness) j += " witness " + v.witness->to_string(m.signature);
    ar.justification.push_back(j);
    if (v.outcome == Outcome::Unknown) ar.reason = "budget exhausted";
    if (a.kind == PropertyKind::AlwaysEnabled || a.kind == PropertyKind::AlwaysCrossable) {
      ProofObligation en{po.id + ":enabled", Term::conj({inv_p1, fis(e->body)}), PoKind::Satisfiability, vars};
      if (decide(en, budget).outcome == Outcome::Invalid) {
        r.warnings.push_back(a.to_text() + " holds vacuously: " + a.event + " is never enabled from p1");
      }
    }
    r.atoms.push_back(std::move(ar));
  }
  combine_atoms(r);
  r.cases.clear();
  return r;
}

// ---- syntactic checking ---------------------------------------------------

namespace {

std::optional<Outcome> recorded(const Slts& s, const std::string& id) {
  for (const auto& p : s.pos) {
    if (p.id == id && p.outcome != Outcome::Unknown) return p.outcome;
  }
  return std::nullopt;
}

enum class Sat { Yes, No, Unknown };

class SyntacticChecker {
 public:
  SyntacticChecker(const Slts& s, std::uint64_t budget) : s_(s), budget_(budget) {}

  Sat satisfiable(const SymbolicState& q) const {
    auto o = recorded(s_, s_.machine + ":sat:" + q.id);
    if (!o) {
      ProofObligation po{"", q.interpretation, PoKind::Satisfiability, s_.signature.variables()};
      Outcome d = decide(po, budget_).outcome;
      if (d != Outcome::Unknown) o = d;
    }
    if (!o) return Sat::Unknown;
    return *o == Outcome::Valid ? Sat::Yes : Sat::No;
  }

  bool disjoint(const std::string& a, const std::string& b) const {
    if (a == b) return false;
    std::string x = a < b ? a : b;
    std::string y = a < b ? b : a;
    auto o = recorded(s_, s_.machine + ":overlap:" + x + ":" + y);
    if (!o) {
      ProofObligation po{"", Term::conj({s_.find_state(a)->interpretation, s_.find_state(b)->interpretation}),
                         PoKind::Satisfiability, s_.signature.variables()};
      Outcome d = decide(po, budget_).outcome;
      if (d != Outcome::Unknown) o = d;
    }
    return o && *o == Outcome::Invalid;
  }

  AtomResult atom(const PropertyAtom& a) const {
    AtomResult out;
    auto u1 = recognize_union(a.p1, s_, budget_);
    if (!u1) {
      out.reason = "p1 is not a state-predicate union";
      return out;
    }
    std::vector<std::string> u2;
    if (a.p2) {
      auto r2 = recognize_union(*a.p2, s_, budget_);
      if (!r2) {
        out.reason = "p2 is not a state-predicate union";
        return out;
      }
      u2 = *r2;
    }
    bool ex = existential(a.kind);
    std::vector<AtomResult> per_state;
    for (const auto& id : *u1) {
      const SymbolicState& q1 = *s_.find_state(id);
      Sat sat = satisfiable(q1);
      if (sat == Sat::No) continue;
      AtomResult r = per_source(a, q1, u2);
      bool needs_witness = (ex && r.truth == Truth::True) || (!ex && r.truth == Truth::False);
      if (needs_witness && sat == Sat::Unknown) {
        r.truth = Truth::Inconclusive;
        r.reason = "satisfiability of " + q1.name + " is unknown";
      }
      per_state.push_back(std::move(r));
    }
    if (per_state.empty()) {
      out.truth = negate(from_bool(!ex), a.negated);
      out.justification.push_back("p1 covers no satisfiable state");
      return out;
    }
    Truth decisive = ex ? Truth::True : Truth::False;
    Truth other = ex ? Truth::False : Truth::True;
    bool any_decisive = false;
    bool all_other = true;
    for (const auto& r : per_state) {
      any_decisive = any_decisive || r.truth == decisive;
      all_other = all_other && r.truth == other;
    }
    Truth t = any_decisive ? decisive : all_other ? other : Truth::Inconclusive;
    for (const auto& r : per_state) {
      if (t == Truth::Inconclusive || r.truth == t) {
        out.cases.insert(r.cases.begin(), r.cases.end());
        out.minimal_lemma = out.minimal_lemma || r.minimal_lemma;
        out.justification.insert(out.justification.end(), r.justification.begin(), r.justification.end());
      }
      if (t == Truth::Inconclusive && r.truth == Truth::Inconclusive && out.reason.empty()) out.reason = r.reason;
    }
    if (t == Truth::Inconclusive) {
      out.cases.clear();
      out.minimal_lemma = false;
    }
    out.truth = negate(t, a.negated);
    return out;
  }

 private:
  std::string describe(const SltsTransition& t) const {
    return s_.find_state(t.source)->name + " -" + t.label() + "-> " + s_.find_state(t.target)->name;
  }

  static bool d_nonfalse(const SltsTransition& t) { return t.d_provenance != DProvenance::GuardByDefault; }
  static bool a_nonfalse(const SltsTransition& t) { return t.a_provenance != AProvenance::ReachByDefault; }

  AtomResult per_source(const PropertyAtom& a, const SymbolicState& q1, const std::vector<std::string>& u2) const {
    AtomResult r;
    auto ts = s_.outgoing(q1.id, a.event);
    auto in_u2 = [&](const SltsTransition* t) { return std::find(u2.begin(), u2.end(), t->target) != u2.end(); };
    auto cite = [&](int c, bool minimal, Truth truth, const std::string& why) {
      r.truth = truth;
      r.cases.insert(c);
      r.minimal_lemma = r.minimal_lemma || minimal;
      r.justification.push_back(why);
    };
    std::string none = "no " + a.event + " transition leaves " + q1.name;
    switch (a.kind) {
      case PropertyKind::Enabled:
        if (ts.empty()) return cite(2, false, Truth::False, none), r;
        for (auto* t : ts) {
          if (t->d_is_true()) return cite(1, false, Truth::True, describe(*t)), r;
        }
        if (s_.minimal) return cite(1, true, Truth::True, describe(*ts[0])), r;
        r.reason = "guard of " + a.event + " in " + q1.name + " kept by default";
        return r;
      case PropertyKind::AlwaysEnabled:
        if (ts.empty()) return cite(4, false, Truth::False, none), r;
        for (auto* t : ts) {
          if (t->d_is_true()) return cite(3, false, Truth::True, describe(*t)), r;
        }
        if (s_.minimal) return cite(4, true, Truth::False, describe(*ts[0])), r;
        r.reason = "guard of " + a.event + " in " + q1.name + " not proved true";
        return r;
      case PropertyKind::Crossable: {
        std::vector<const SltsTransition*> into;
        for (auto* t : ts) {
          if (in_u2(t)) into.push_back(t);
        }
        if (into.empty()) {
          cite(6, false, Truth::False, none + " into p2");
          if (s_.minimal) cite(5, true, Truth::False, "the SLTS is minimal");
          return r;
        }
        for (auto* t : into) {
          if (t->a_is_true() && d_nonfalse(*t)) return cite(5, false, Truth::True, describe(*t)), r;
        }
        if (s_.minimal) return cite(5, true, Truth::True, describe(*into[0])), r;
        r.reason = "reachability into p2 from " + q1.name + " kept by default";
        return r;
      }
      case PropertyKind::AlwaysCrossable: {
        bool all_in = std::all_of(ts.begin(), ts.end(), in_u2);
        if (all_in) {
          cite(7, false, Truth::True, ts.empty() ? none : "every " + a.event + " transition from " + q1.name + " enters p2");
          for (auto* t : ts) r.justification.push_back(describe(*t));
          return r;
        }
        for (auto* t : ts) {
          if (in_u2(t) || !d_nonfalse(*t) || !a_nonfalse(*t)) continue;
          bool apart = std::all_of(u2.begin(), u2.end(), [&](const std::string& q) { return disjoint(t->target, q); });
          if (apart) return cite(8, false, Truth::False, describe(*t)), r;
        }
        if (s_.minimal && u2.size() == 1) {
          for (auto* t : ts) {
            if (t->target == u2[0] && !t->a_is_true() && d_nonfalse(*t)) {
              return cite(8, true, Truth::False, describe(*t)), r;
            }
          }
        }
        r.reason = a.event + " from " + q1.name + " may leave p2";
        return r;
      }
    }
    return r;
  }

  const Slts& s_;
  std::uint64_t budget_;
};

}  // namespace

std::optional<std::vector<std::string>> recognize_union(const Term& p, const Slts& s, std::uint64_t budget) {
  std::vector<const SymbolicState*> states;
  for (const auto& q : s.states) {
    if (!q.initial) states.push_back(&q);
  }
  std::vector<Term> parts;
  if (p.op() == Op::Or) {
    parts.assign(p.args().begin(), p.args().end());
  } else {
    parts.push_back(p);
  }
  std::vector<std::string> ids;
  for (const auto& part : parts) {
    auto it = std::find_if(states.begin(), states.end(), [&](const SymbolicState* q) { return q->predicate == part; });
    if (it == states.end()) break;
    ids.push_back((*it)->id);
  }
  if (ids.size() == parts.size()) return ids;

  const auto& vars = s.signature.variables();
  ids.clear();
  std::vector<Term> members;
  for (const auto* q : states) {
    auto sat = recorded(s, s.machine + ":sat:" + q->id);
    if (!sat) sat = decide({"", q->interpretation, PoKind::Satisfiability, vars}, budget).outcome;
    if (*sat == Outcome::Invalid) continue;
    ProofObligation inside{"", Term::implies(q->interpretation, p), PoKind::Validity, vars};
    Outcome o = decide(inside, budget).outcome;
    if (o == Outcome::Unknown) return std::nullopt;
    if (o == Outcome::Valid) {
      ids.push_back(q->id);
      members.push_back(q->interpretation);
    }
  }
  ProofObligation covered{"", Term::implies(Term::conj({s.invariant, p}), Term::disj(members)), PoKind::Validity,
                          vars};
  if (decide(covered, budget).outcome != Outcome::Valid) return std::nullopt;
  return ids;
}

CheckResult check_syntactic(const PropertyFormula& f, const Slts& s, std::uint64_t budget) {
  CheckResult r;
  r.method = Method::Syntactic;
  SyntacticChecker checker(s, budget);
  for (const auto& a : f.atoms) {
    if (std::find(s.events.begin(), s.events.end(), a.event) == s.events.end()) {
      throw Error(Error::Kind::UnknownIdentifier, "unknown event '" + a.event + "'");
    }
    r.atoms.push_back(checker.atom(a));
  }
  combine_atoms(r);
  if (r.truth == Truth::Inconclusive) {
    r.cases.clear();
    r.minimal_lemma = false;
    for (const auto& a : r.atoms) {
      if (!a.reason.empty() && std::find(r.warnings.begin(), r.warnings.end(), a.reason) == r.warnings.end()) {
        r.warnings.push_back(a.reason);
      }
    }
  }
  return r;
}

// ---- weakening ------------------------------------------------------------

WeakenResult weaken(const PropertyAtom& atom, Position pos, const Term& replacement, const Signature& sig,
                    const Term& invariant, std::uint64_t budget) {
  if (pos == Position::P2 && !has_target(atom.kind)) {
    throw Error(Error::Kind::Semantic, to_string(atom.kind) + " has no target predicate to weaken");
  }
  const Term& old = pos == Position::P1 ? atom.p1 : *atom.p2;
  // old => new, except for the p1 of the universal predicates.
  bool forward = pos == Position::P2 || existential(atom.kind);
  if (atom.negated) forward = !forward;
  Term lhs = forward ? old : replacement;
  Term rhs = forward ? replacement : old;
  ProofObligation po{"weaken:" + to_string(atom.kind) + ":" + atom.event + (pos == Position::P1 ? ":p1" : ":p2"),
                     Term::implies(Term::conj({invariant, lhs}), rhs), PoKind::Validity, sig.variables()};
  Verdict v = decide(po, budget);
  if (v.outcome != Outcome::Valid) {
    std::string msg = "implication " + to_text(lhs) + " => " + to_text(rhs) + " is " + to_string(v.outcome);
    if (v.witness) msg += " (witness " + v.witness->to_string(sig) + ")";
    throw Error(Error::Kind::Semantic, msg);
  }
  WeakenResult out{atom, record(v, PoKind::Validity, sig)};
  if (pos == Position::P1) {
    out.atom.p1 = replacement;
  } else {
    out.atom.p2 = replacement;
  }
  return out;
}

// ---- schemas --------------------------------------------------------------

std::vector<PropertyFormula> reactivity_schema(const MachineModel& m) {
  std::vector<PropertyFormula> out;
  for (const auto& e : m.events) {
    PropertyAtom a;
    a.kind = PropertyKind::AlwaysEnabled;
    a.p1 = m.invariant;
    a.event = e.name;
    out.push_back({"reactivity:" + e.name, "ALWAYSENABLED INV " + e.name, {a}});
  }
  return out;
}

std::vector<PropertyFormula> unicity_schema(const MachineModel& m, const Term& p, const std::string& begin) {
  if (!m.find_event(begin)) throw Error(Error::Kind::UnknownIdentifier, "unknown event '" + begin + "'");
  std::vector<PropertyFormula> out;
  for (const auto& e : m.events) {
    if (e.name == begin) continue;
    PropertyAtom a;
    a.kind = PropertyKind::AlwaysCrossable;
    a.p1 = m.invariant;
    a.event = e.name;
    a.p2 = Term::negate(p);
    out.push_back({"unicity:" + e.name, "ALWAYSCROSSABLE INV " + e.name + " -> not(" + to_text(p) + ")", {a}});
  }
  return out;
}

}  // namespace eventb
