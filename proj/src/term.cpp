#include "eventb/term.hpp"

#include <algorithm>
#include <cassert>

namespace eventb {

Error::Error(Kind kind, std::string message, int line, int column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message
                                  : std::move(message)),
      kind_(kind),
      line_(line),
      column_(column) {}

std::string Type::to_string() const {
  switch (kind) {
    case Kind::Bool:
      return "BOOL";
    case Kind::Int:
      return "INTEGER";
    case Kind::Enum:
      return set;
  }
  return "?";
}

bool is_predicate_op(Op op) { return op <= Op::Exists; }

bool is_set_op(Op op) { return op >= Op::BoolSet; }

struct Term::Node {
  Op op;
  std::string name;
  Value value = 0;
  bool primed = false;
  Type type;
  Term domain;
  std::vector<Term> args;
};

namespace {

const std::string kEmpty;
const Type kBoolType = Type::boolean();

}  // namespace

Term Term::truth(bool b) {
  static const Term t{std::make_shared<const Node>(Node{Op::True, {}, 0, false, kBoolType, {}, {}})};
  static const Term f{std::make_shared<const Node>(Node{Op::False, {}, 0, false, kBoolType, {}, {}})};
  return b ? t : f;
}

Term Term::var(std::string name, Type type, Term domain, bool primed) {
  return Term{std::make_shared<const Node>(
      Node{Op::Var, std::move(name), 0, primed, std::move(type), std::move(domain), {}})};
}

Term Term::constant(std::string name, Type type, Value index) {
  return Term{std::make_shared<const Node>(Node{Op::Const, std::move(name), index, false, std::move(type), {}, {}})};
}

Term Term::integer(Value v) {
  return Term{std::make_shared<const Node>(Node{Op::Int, {}, v, false, Type::integer(), {}, {}})};
}

Term Term::bool_set() {
  static const Term s{std::make_shared<const Node>(Node{Op::BoolSet, "BOOL", 2, false, kBoolType, {}, {}})};
  return s;
}

Term Term::enum_set(std::string name, Value cardinality) {
  Type t = Type::enumerated(name);
  return Term{std::make_shared<const Node>(Node{Op::EnumSet, std::move(name), cardinality, false, std::move(t), {}, {}})};
}

Term Term::interval(Term lo, Term hi) {
  return Term{std::make_shared<const Node>(
      Node{Op::Interval, {}, 0, false, Type::integer(), {}, {std::move(lo), std::move(hi)}})};
}

Term Term::extension(std::vector<Term> elements, Type element_type) {
  return Term{std::make_shared<const Node>(
      Node{Op::Extension, {}, 0, false, std::move(element_type), {}, std::move(elements)})};
}

Term Term::make(Op op, std::vector<Term> args) {
  Type t = kBoolType;
  if (op == Op::Add || op == Op::Sub) t = Type::integer();
  return Term{std::make_shared<const Node>(Node{op, {}, 0, false, std::move(t), {}, std::move(args)})};
}

Term Term::quantifier(Op op, std::string bound, Type type, Term set, Term body) {
  assert(op == Op::Forall || op == Op::Exists);
  return Term{std::make_shared<const Node>(
      Node{op, std::move(bound), 0, false, std::move(type), {}, {std::move(set), std::move(body)}})};
}

Term Term::conj(std::vector<Term> parts) {
  if (parts.empty()) return truth(true);
  if (parts.size() == 1) return parts.front();
  return make(Op::And, std::move(parts));
}

Term Term::disj(std::vector<Term> parts) {
  if (parts.empty()) return truth(false);
  if (parts.size() == 1) return parts.front();
  return make(Op::Or, std::move(parts));
}

Term Term::negate(Term t) { return make(Op::Not, {std::move(t)}); }
Term Term::implies(Term a, Term b) { return make(Op::Implies, {std::move(a), std::move(b)}); }
Term Term::equiv(Term a, Term b) { return make(Op::Equiv, {std::move(a), std::move(b)}); }
Term Term::eq(Term a, Term b) { return make(Op::Eq, {std::move(a), std::move(b)}); }
Term Term::member(Term e, Term set) { return make(Op::In, {std::move(e), std::move(set)}); }

Op Term::op() const { return node_->op; }
const std::string& Term::name() const { return node_ ? node_->name : kEmpty; }
Value Term::value() const { return node_->value; }
bool Term::primed() const { return node_->primed; }
const Type& Term::type() const { return node_->type; }
const Term& Term::domain() const { return node_->domain; }
std::span<const Term> Term::args() const { return node_->args; }
const Term& Term::arg(std::size_t i) const { return node_->args.at(i); }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op || x.name != y.name || x.value != y.value || x.primed != y.primed) return false;
  if (x.op == Op::Var || x.op == Op::Extension || x.op == Op::Forall || x.op == Op::Exists) {
    if (!(x.type == y.type)) return false;
  }
  if (x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (x.args[i] != y.args[i]) return false;
  }
  return true;
}

namespace {

void collect_free(const Term& t, std::set<VarKey>& bound, std::set<VarKey>& out) {
  switch (t.op()) {
    case Op::Var:
      if (!bound.contains(t.key())) out.insert(t.key());
      return;
    case Op::Forall:
    case Op::Exists: {
      collect_free(t.arg(0), bound, out);
      VarKey k{t.name(), false};
      bool inserted = bound.insert(k).second;
      collect_free(t.arg(1), bound, out);
      if (inserted) bound.erase(k);
      return;
    }
    default:
      for (const auto& a : t.args()) collect_free(a, bound, out);
  }
}

}  // namespace

std::set<VarKey> free_vars(const Term& t) {
  std::set<VarKey> bound;
  std::set<VarKey> out;
  if (t.valid()) collect_free(t, bound, out);
  return out;
}

bool occurs_free(const Term& t, const VarKey& v) { return free_vars(t).contains(v); }

std::string fresh_name(const std::string& base, const std::set<VarKey>& taken) {
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!taken.contains(VarKey{candidate, false}) && !taken.contains(VarKey{candidate, true})) return candidate;
  }
}

namespace {

Term subst_rec(const Term& t, std::vector<Binding>& bindings) {
  if (bindings.empty()) return t;
  switch (t.op()) {
    case Op::Var: {
      for (auto it = bindings.rbegin(); it != bindings.rend(); ++it) {
        if (it->first == t.key()) return it->second;
      }
      return t;
    }
    case Op::True:
    case Op::False:
    case Op::Const:
    case Op::Int:
    case Op::BoolSet:
    case Op::EnumSet:
      return t;
    case Op::Forall:
    case Op::Exists: {
      Term set = subst_rec(t.arg(0), bindings);
      VarKey bound{t.name(), false};
      // Bindings for the bound name are shadowed inside the body.
      std::vector<Binding> inner;
      inner.reserve(bindings.size());
      for (const auto& b : bindings) {
        if (!(b.first == bound)) inner.push_back(b);
      }
      std::set<VarKey> replacement_vars;
      for (const auto& b : inner) {
        if (occurs_free(t.arg(1), b.first)) {
          auto fv = free_vars(b.second);
          replacement_vars.insert(fv.begin(), fv.end());
        }
      }
      std::string name = t.name();
      if (replacement_vars.contains(bound)) {
        std::set<VarKey> taken = replacement_vars;
        auto body_fv = free_vars(t.arg(1));
        taken.insert(body_fv.begin(), body_fv.end());
        for (const auto& b : inner) taken.insert(b.first);
        name = fresh_name(t.name(), taken);
        inner.emplace_back(bound, Term::var(name, t.type(), t.arg(0)));
      }
      Term body = subst_rec(t.arg(1), inner);
      return Term::quantifier(t.op(), name, t.type(), std::move(set), std::move(body));
    }
    case Op::Extension: {
      std::vector<Term> elems;
      for (const auto& a : t.args()) elems.push_back(subst_rec(a, bindings));
      return Term::extension(std::move(elems), t.type());
    }
    case Op::Interval:
      return Term::interval(subst_rec(t.arg(0), bindings), subst_rec(t.arg(1), bindings));
    default: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(subst_rec(a, bindings));
      return Term::make(t.op(), std::move(args));
    }
  }
}

}  // namespace

Term substitute(const Term& t, std::span<const Binding> bindings) {
  std::vector<Binding> b(bindings.begin(), bindings.end());
  return subst_rec(t, b);
}

Term substitute(const Term& t, const VarKey& v, const Term& e) {
  Binding b{v, e};
  return substitute(t, std::span<const Binding>(&b, 1));
}

Type element_type(const Term& set) {
  switch (set.op()) {
    case Op::BoolSet:
      return Type::boolean();
    case Op::EnumSet:
      return set.type();
    case Op::Interval:
      return Type::integer();
    case Op::Extension:
      return set.type();
    default:
      throw Error(Error::Kind::DomainMismatch, "not a set expression");
  }
}

}  // namespace eventb
