#include "eventb/printer.hpp"

#include <cctype>
#include <sstream>

namespace eventb {

namespace {

enum Prec : int { kEquiv = 1, kImplies = 2, kOr = 3, kAnd = 4, kRel = 6, kSum = 7, kAtom = 9 };

int precedence(const Term& t) {
  switch (t.op()) {
    case Op::Equiv:
      return kEquiv;
    case Op::Implies:
      return kImplies;
    case Op::Or:
      return kOr;
    case Op::And:
      return kAnd;
    case Op::Eq:
    case Op::Neq:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::In:
      return kRel;
    case Op::Add:
    case Op::Sub:
      return kSum;
    default:
      return kAtom;
  }
}

class TermPrinter {
 public:
  explicit TermPrinter(PrintStyle style) : style_(style) {}

  void print(const Term& t, int min_prec, std::ostream& os) const {
    if (precedence(t) < min_prec) {
      os << '(';
      print(t, 0, os);
      os << ')';
      return;
    }
    switch (t.op()) {
      case Op::True:
        os << "true";
        return;
      case Op::False:
        os << "false";
        return;
      case Op::And:
      case Op::Or: {
        const char* sep = t.op() == Op::And ? " & " : " or ";
        int p = precedence(t);
        bool first = true;
        for (const auto& a : t.args()) {
          if (!first) os << sep;
          first = false;
          print(a, p + 1, os);
        }
        return;
      }
      case Op::Implies:
      case Op::Equiv: {
        int p = precedence(t);
        print(t.arg(0), p + 1, os);
        os << (t.op() == Op::Implies ? " => " : " <=> ");
        print(t.arg(1), p + 1, os);
        return;
      }
      case Op::Not:
        os << "not(";
        print(t.arg(0), 0, os);
        os << ')';
        return;
      case Op::Eq:
      case Op::Neq:
      case Op::Lt:
      case Op::Le:
      case Op::Gt:
      case Op::Ge:
      case Op::In:
        print(t.arg(0), kSum, os);
        os << relation(t.op());
        print(t.arg(1), kSum, os);
        return;
      case Op::Forall:
      case Op::Exists: {
        os << (t.op() == Op::Forall ? '!' : '#') << t.name() << ".(" << t.name() << ':';
        print(t.arg(0), kAtom, os);
        if (t.op() == Op::Forall) {
          os << " => ";
          print(t.arg(1), kImplies + 1, os);
        } else if (!t.arg(1).is_true()) {
          os << " & ";
          print(t.arg(1), kAnd + 1, os);
        }
        os << ')';
        return;
      }
      case Op::Var:
        os << t.name();
        if (t.primed()) os << (style_ == PrintStyle::Human ? "'" : "$1");
        return;
      case Op::Const:
        os << t.name();
        return;
      case Op::Int:
        if (t.value() < 0) {
          os << '(' << t.value() << ')';
        } else {
          os << t.value();
        }
        return;
      case Op::Add:
      case Op::Sub:
        print(t.arg(0), kSum, os);
        os << (t.op() == Op::Add ? " + " : " - ");
        print(t.arg(1), kSum + 1, os);
        return;
      case Op::BoolOf:
        os << "bool(";
        print(t.arg(0), 0, os);
        os << ')';
        return;
      case Op::BoolSet:
      case Op::EnumSet:
        os << t.name();
        return;
      case Op::Interval:
        print(t.arg(0), kAtom, os);
        os << "..";
        print(t.arg(1), kAtom, os);
        return;
      case Op::Extension: {
        os << '{';
        bool first = true;
        for (const auto& a : t.args()) {
          if (!first) os << ", ";
          first = false;
          print(a, 0, os);
        }
        os << '}';
        return;
      }
    }
  }

 private:
  static const char* relation(Op op) {
    switch (op) {
      case Op::Eq:
        return "=";
      case Op::Neq:
        return "/=";
      case Op::Lt:
        return "<";
      case Op::Le:
        return "<=";
      case Op::Gt:
        return ">";
      case Op::Ge:
        return ">=";
      default:
        return ":";
    }
  }

  PrintStyle style_;
};

class SubstPrinter {
 public:
  explicit SubstPrinter(PrintStyle style) : terms_(style) {}

  // `context` is the kind of the enclosing composite, used to keep nested
  // parallel/sequence structure explicit.
  void print(const Subst& s, int indent, std::ostream& os, Subst::Kind context = Subst::Kind::Skip) const {
    using K = Subst::Kind;
    std::string pad(static_cast<std::size_t>(indent), ' ');
    switch (s.kind()) {
      case K::Skip:
        os << "skip";
        return;
      case K::Assign: {
        list(s.targets(), os);
        os << " := ";
        list(s.values(), os);
        return;
      }
      case K::BecomesIn:
        terms_.print(s.targets()[0], kAtom, os);
        os << " :: ";
        terms_.print(s.set(), kAtom, os);
        return;
      case K::Parallel:
      case K::Seq: {
        bool wrap = context == K::Parallel || context == s.kind();
        if (wrap) os << "BEGIN ";
        bool par = s.kind() == K::Parallel;
        bool first = true;
        for (const auto& b : s.branches()) {
          if (!first) {
            if (par) {
              os << " || ";
            } else {
              os << " ;\n" << pad;
            }
          }
          first = false;
          print(b, indent, os, s.kind());
        }
        if (wrap) os << " END";
        return;
      }
      case K::If:
      case K::Select: {
        bool is_if = s.kind() == K::If;
        std::string inner(static_cast<std::size_t>(indent + 2), ' ');
        for (std::size_t i = 0; i < s.conds().size(); ++i) {
          if (i == 0) {
            os << (is_if ? "IF " : "SELECT ");
          } else {
            os << '\n' << pad << (is_if ? "ELSIF " : "WHEN ");
          }
          terms_.print(s.conds()[i], 0, os);
          os << " THEN\n" << inner;
          print(s.branches()[i], indent + 2, os);
        }
        if (s.has_else()) {
          os << '\n' << pad << "ELSE\n" << inner;
          print(s.branches().back(), indent + 2, os);
        }
        os << '\n' << pad << "END";
        return;
      }
      case K::Choice: {
        std::string inner(static_cast<std::size_t>(indent + 2), ' ');
        bool first = true;
        for (const auto& b : s.branches()) {
          os << (first ? "CHOICE\n" : "\n" + pad + "OR\n") << inner;
          first = false;
          print(b, indent + 2, os);
        }
        os << '\n' << pad << "END";
        return;
      }
      case K::Any: {
        std::string inner(static_cast<std::size_t>(indent + 2), ' ');
        os << "ANY ";
        bool first = true;
        for (const auto& v : s.bound()) {
          if (!first) os << ", ";
          first = false;
          os << v.name();
        }
        os << " WHERE ";
        terms_.print(s.where(), 0, os);
        os << " THEN\n" << inner;
        print(s.branches()[0], indent + 2, os);
        os << '\n' << pad << "END";
        return;
      }
    }
  }

 private:
  void list(std::span<const Term> ts, std::ostream& os) const {
    bool first = true;
    for (const auto& t : ts) {
      if (!first) os << ", ";
      first = false;
      terms_.print(t, kSum, os);
    }
  }

  TermPrinter terms_;
};

void print_sets(const Signature& sig, const std::vector<std::string>& names, std::ostream& os) {
  if (names.empty()) return;
  os << "SETS\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const SetDecl* s = sig.find_set(names[i]);
    os << "  " << s->name << " = {";
    for (std::size_t j = 0; j < s->elements.size(); ++j) os << (j ? ", " : "") << s->elements[j];
    os << '}' << (i + 1 < names.size() ? ";\n" : "\n");
  }
}

void print_body(const MachineModel& m, const std::vector<std::string>& set_names, const Term& invariant,
                const std::string& assertions, const std::string& extra, std::ostream& os) {
  print_sets(m.signature, set_names, os);
  if (!m.signature.variables().empty()) {
    os << "VARIABLES\n  ";
    bool first = true;
    for (const auto& v : m.signature.variables()) {
      os << (first ? "" : ", ") << v.name;
      first = false;
    }
    os << '\n';
  }
  os << "INVARIANT\n  " << to_text(invariant) << '\n';
  os << extra;
  if (!assertions.empty()) os << "ASSERTIONS\n  " << assertions << '\n';
  os << "INITIALISATION\n  " << to_text(m.initialisation) << '\n';
  if (!m.events.empty()) {
    os << "EVENTS\n";
    SubstPrinter sp(PrintStyle::Human);
    for (std::size_t i = 0; i < m.events.size(); ++i) {
      os << "  " << m.events[i].name << " =\n    ";
      sp.print(m.events[i].body, 4, os);
      os << (i + 1 < m.events.size() ? ";\n" : "\n");
    }
  }
  os << "END\n";
}

}  // namespace

std::string to_text(const Term& t, PrintStyle style) {
  std::ostringstream os;
  TermPrinter(style).print(t, 0, os);
  return os.str();
}

std::string to_text(const Subst& s, PrintStyle style) {
  std::ostringstream os;
  SubstPrinter(style).print(s, 2, os);
  return os.str();
}

std::string to_source(const MachineModel& m) {
  std::ostringstream os;
  os << "MACHINE " << m.name << '\n';
  std::vector<std::string> sets;
  for (const auto& s : m.signature.sets()) sets.push_back(s.name);
  std::string assertions;
  for (std::size_t i = 0; i < m.assertions.size(); ++i) {
    if (i) assertions += " or ";
    std::ostringstream a;
    TermPrinter(PrintStyle::Human).print(m.assertions[i], kOr + 1, a);
    assertions += a.str();
  }
  print_body(m, sets, m.invariant, assertions, "", os);
  return os.str();
}

std::string to_source(const RefinementModel& r) {
  std::ostringstream os;
  os << "REFINEMENT " << r.concrete.name << '\n' << "REFINES " << r.abstraction.name << '\n';
  std::vector<std::string> sets;
  for (const auto& s : r.concrete.signature.sets()) {
    if (!r.abstraction.signature.find_set(s.name)) sets.push_back(s.name);
  }
  // Print abstract-side names as the user wrote them.
  std::vector<Binding> undo;
  for (const auto& [orig, renamed] : r.renamed) {
    const VarDecl* v = r.abstraction.signature.find_variable(renamed);
    undo.emplace_back(VarKey{renamed, false}, Term::var(orig, v->type, v->domain));
  }
  std::string assertions;
  TermPrinter tp(PrintStyle::Human);
  for (std::size_t i = 0; i < r.decompositions.size(); ++i) {
    const auto& d = r.decompositions[i];
    std::vector<Term> subs;
    for (auto idx : d.substates) subs.push_back(r.concrete.assertions[idx]);
    std::ostringstream a;
    a << '(';
    tp.print(substitute(d.abstract_predicate, undo), kEquiv + 1, a);
    a << " <=> (";
    tp.print(Term::disj(subs), 0, a);
    a << "))";
    if (i) assertions += " & ";
    assertions += a.str();
  }
  std::string extra;
  if (r.variant) extra = "VARIANT\n  " + to_text(*r.variant) + '\n';
  // The written invariant excludes the equalities added for renamed variables.
  Term invariant = r.concrete.invariant;
  if (!r.renamed.empty() && invariant.op() == Op::And) {
    auto args = invariant.args();
    invariant = Term::conj({args.begin(), args.end() - static_cast<std::ptrdiff_t>(r.renamed.size())});
  }
  print_body(r.concrete, sets, invariant, assertions, extra, os);
  return os.str();
}

std::string normalize_whitespace(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
    } else {
      if (space) out += ' ';
      space = false;
      out += c;
    }
  }
  return out;
}

}  // namespace eventb
