#include "eventb/simplify.hpp"

#include <algorithm>
#include <optional>

namespace eventb {

namespace {

bool is_literal_value(const Term& t) { return t.op() == Op::Const || t.op() == Op::Int; }

Term simplify_relation(Op op, const Term& a, const Term& b);

Term complement(const Term& t) {
  switch (t.op()) {
    case Op::Not:
      return t.arg(0);
    case Op::Eq:
      return simplify_relation(Op::Neq, t.arg(0), t.arg(1));
    case Op::Neq:
      return Term::eq(t.arg(0), t.arg(1));
    case Op::True:
      return Term::truth(false);
    case Op::False:
      return Term::truth(true);
    default:
      return Term::negate(t);
  }
}

bool contains(const std::vector<Term>& v, const Term& t) { return std::find(v.begin(), v.end(), t) != v.end(); }

Term simplify_junction(const Term& t) {
  bool is_and = t.op() == Op::And;
  Op self = t.op();
  std::vector<Term> parts;
  auto push = [&](const Term& p, auto&& rec) -> bool {
    if (p.op() == self) {
      for (const auto& a : p.args()) {
        if (!rec(a, rec)) return false;
      }
      return true;
    }
    if (p.is_true()) return !is_and ? false : true;
    if (p.is_false()) return is_and ? false : true;
    if (contains(parts, p)) return true;
    if (contains(parts, complement(p))) return false;
    parts.push_back(p);
    return true;
  };
  for (const auto& a : t.args()) {
    Term s = simplify(a);
    if (!push(s, push)) return Term::truth(!is_and);
  }
  return is_and ? Term::conj(std::move(parts)) : Term::disj(std::move(parts));
}

std::optional<Value> int_value(const Term& t) {
  if (t.op() == Op::Int) return t.value();
  return std::nullopt;
}

Term simplify_relation(Op op, const Term& a, const Term& b) {
  if (op == Op::Eq || op == Op::Neq) {
    bool eq = op == Op::Eq;
    if (a == b) return Term::truth(eq);
    if (is_literal_value(a) && is_literal_value(b)) return Term::truth((a.value() == b.value()) == eq);
    // bool(P) = TRUE  ~>  P
    for (int side = 0; side < 2; ++side) {
      const Term& x = side ? b : a;
      const Term& y = side ? a : b;
      if (x.op() == Op::BoolOf && y.op() == Op::Const && y.type().kind == Type::Kind::Bool) {
        bool positive = (y.value() == 1) == eq;
        return positive ? x.arg(0) : simplify(complement(x.arg(0)));
      }
    }
    // x /= TRUE  ~>  x = FALSE
    if (!eq) {
      for (int side = 0; side < 2; ++side) {
        const Term& y = side ? a : b;
        if (y.op() == Op::Const && y.type().kind == Type::Kind::Bool) {
          Term flipped = Term::constant(y.value() ? "FALSE" : "TRUE", Type::boolean(), 1 - y.value());
          return side ? Term::eq(flipped, b) : Term::eq(a, flipped);
        }
      }
    }
    return Term::make(op, {a, b});
  }
  auto x = int_value(a);
  auto y = int_value(b);
  if (x && y) {
    switch (op) {
      case Op::Lt:
        return Term::truth(*x < *y);
      case Op::Le:
        return Term::truth(*x <= *y);
      case Op::Gt:
        return Term::truth(*x > *y);
      default:
        return Term::truth(*x >= *y);
    }
  }
  return Term::make(op, {a, b});
}

Term simplify_member(const Term& e, const Term& set) {
  if (e.op() == Op::Var && e.domain() && e.domain() == set) return Term::truth(true);
  if (e.op() == Op::Var && set.op() == Op::BoolSet && e.type().kind == Type::Kind::Bool) return Term::truth(true);
  if (e.op() == Op::Var && set.op() == Op::EnumSet && e.type() == set.type()) return Term::truth(true);
  if (e.op() == Op::BoolOf && set.op() == Op::BoolSet) return Term::truth(true);
  if (e.op() == Op::Const && (set.op() == Op::BoolSet || set.op() == Op::EnumSet)) return Term::truth(true);
  if (set.op() == Op::Extension) {
    std::vector<Term> alts;
    for (const auto& el : set.args()) alts.push_back(simplify_relation(Op::Eq, e, el));
    return simplify(Term::disj(std::move(alts)));
  }
  if (set.op() == Op::Interval) {
    auto v = int_value(e);
    auto lo = int_value(set.arg(0));
    auto hi = int_value(set.arg(1));
    if (v && lo && hi) return Term::truth(*lo <= *v && *v <= *hi);
  }
  return Term::member(e, set);
}

}  // namespace

bool known_nonempty(const Term& set) {
  switch (set.op()) {
    case Op::BoolSet:
      return true;
    case Op::EnumSet:
      return set.value() > 0;
    case Op::Extension:
      return !set.args().empty();
    case Op::Interval: {
      auto lo = int_value(set.arg(0));
      auto hi = int_value(set.arg(1));
      return lo && hi && *lo <= *hi;
    }
    default:
      return false;
  }
}

Term simplify(const Term& t) {
  switch (t.op()) {
    case Op::And:
    case Op::Or:
      return simplify_junction(t);
    case Op::Not: {
      Term a = simplify(t.arg(0));
      if (a.is_true() || a.is_false()) return Term::truth(a.is_false());
      if (a.op() == Op::Not || a.op() == Op::Eq || a.op() == Op::Neq) return complement(a);
      return Term::negate(a);
    }
    case Op::Implies: {
      Term a = simplify(t.arg(0));
      Term b = simplify(t.arg(1));
      if (a.is_true()) return b;
      if (a.is_false() || b.is_true() || a == b) return Term::truth(true);
      if (b.is_false()) return simplify(Term::negate(a));
      return Term::implies(a, b);
    }
    case Op::Equiv: {
      Term a = simplify(t.arg(0));
      Term b = simplify(t.arg(1));
      if (a == b) return Term::truth(true);
      if (a.is_true()) return b;
      if (b.is_true()) return a;
      if (a.is_false()) return simplify(Term::negate(b));
      if (b.is_false()) return simplify(Term::negate(a));
      return Term::equiv(a, b);
    }
    case Op::Eq:
    case Op::Neq:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
      return simplify_relation(t.op(), simplify(t.arg(0)), simplify(t.arg(1)));
    case Op::In:
      return simplify_member(simplify(t.arg(0)), simplify(t.arg(1)));
    case Op::Forall:
    case Op::Exists: {
      Term set = simplify(t.arg(0));
      Term body = simplify(t.arg(1));
      bool forall = t.op() == Op::Forall;
      if (set.op() == Op::Extension && set.args().empty()) return Term::truth(forall);
      if (!occurs_free(body, VarKey{t.name(), false}) && known_nonempty(set)) return body;
      if (body.is_true() && forall) return body;
      if (body.is_false() && !forall) return body;
      return Term::quantifier(t.op(), t.name(), t.type(), set, body);
    }
    case Op::Add:
    case Op::Sub: {
      Term a = simplify(t.arg(0));
      Term b = simplify(t.arg(1));
      auto x = int_value(a);
      auto y = int_value(b);
      if (x && y) return Term::integer(t.op() == Op::Add ? *x + *y : *x - *y);
      return Term::make(t.op(), {a, b});
    }
    case Op::BoolOf: {
      Term a = simplify(t.arg(0));
      if (a.is_true() || a.is_false()) return Term::constant(a.is_true() ? "TRUE" : "FALSE", Type::boolean(), a.is_true() ? 1 : 0);
      return Term::make(Op::BoolOf, {a});
    }
    case Op::Interval:
      return Term::interval(simplify(t.arg(0)), simplify(t.arg(1)));
    case Op::Extension: {
      std::vector<Term> els;
      for (const auto& a : t.args()) els.push_back(simplify(a));
      return Term::extension(std::move(els), t.type());
    }
    default:
      return t;
  }
}

}  // namespace eventb
