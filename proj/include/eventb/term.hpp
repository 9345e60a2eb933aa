#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eventb {

/// Raised for every user-facing failure: malformed input, unknown names,
/// inconsistent files. `line`/`column` are zero when no position applies.
class Error : public std::runtime_error {
 public:
  enum class Kind { Lexical, Syntax, UnknownIdentifier, DomainMismatch, ParallelClash, NonFinite, Semantic, Io };

  Error(Kind kind, std::string message, int line = 0, int column = 0);

  Kind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

using Value = std::int64_t;

/// Carrier type of an expression. Enumerated and BOOL values are element
/// indices in declaration order; integers are themselves.
struct Type {
  enum class Kind : std::uint8_t { Bool, Enum, Int };
  Kind kind = Kind::Bool;
  std::string set;  // enumerated set name when kind == Enum

  static Type boolean() { return {Kind::Bool, {}}; }
  static Type integer() { return {Kind::Int, {}}; }
  static Type enumerated(std::string name) { return {Kind::Enum, std::move(name)}; }

  bool operator==(const Type&) const = default;
  std::string to_string() const;
};

enum class Op : std::uint8_t {
  // predicates
  True,
  False,
  And,
  Or,
  Not,
  Implies,
  Equiv,
  Eq,
  Neq,
  Lt,
  Le,
  Gt,
  Ge,
  In,
  Forall,
  Exists,
  // expressions
  Var,
  Const,
  Int,
  Add,
  Sub,
  BoolOf,
  // set expressions
  BoolSet,
  EnumSet,
  Interval,
  Extension,
};

bool is_predicate_op(Op op);
bool is_set_op(Op op);

/// Identity of a variable occurrence: primed copies live in their own namespace.
struct VarKey {
  std::string name;
  bool primed = false;
  auto operator<=>(const VarKey&) const = default;
};

/// Immutable, structurally shared first-order term. One node type covers
/// predicates, value expressions and finite set expressions.
///
/// Layout per op:
///   Var       name, primed, type, domain() = declared set (may be null)
///   Const     name, type, value = element index
///   Int       value
///   EnumSet   name = set name, value = cardinality, type = element type
///   BoolSet   type = BOOL
///   Interval  args = {lo, hi}
///   Extension args = elements
///   Forall/Exists  name = bound variable, args = {set, body}, type = bound type
///   others    args = operands
class Term {
 public:
  Term() = default;

  static Term truth(bool b);
  static Term var(std::string name, Type type, Term domain = {}, bool primed = false);
  static Term constant(std::string name, Type type, Value index);
  static Term integer(Value v);
  static Term bool_set();
  static Term enum_set(std::string name, Value cardinality);
  static Term interval(Term lo, Term hi);
  static Term extension(std::vector<Term> elements, Type element_type);
  static Term make(Op op, std::vector<Term> args);
  static Term quantifier(Op op, std::string bound, Type type, Term set, Term body);

  static Term conj(std::vector<Term> parts);
  static Term disj(std::vector<Term> parts);
  static Term negate(Term t);
  static Term implies(Term a, Term b);
  static Term equiv(Term a, Term b);
  static Term eq(Term a, Term b);
  static Term member(Term e, Term set);

  bool valid() const { return static_cast<bool>(node_); }
  explicit operator bool() const { return valid(); }

  Op op() const;
  const std::string& name() const;
  Value value() const;
  bool primed() const;
  const Type& type() const;
  const Term& domain() const;
  std::span<const Term> args() const;
  const Term& arg(std::size_t i) const;

  bool is_true() const { return valid() && op() == Op::True; }
  bool is_false() const { return valid() && op() == Op::False; }
  bool is_predicate() const { return is_predicate_op(op()); }
  VarKey key() const { return {name(), primed()}; }

  /// Deep structural equality (declared domains of variables are ignored).
  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

std::set<VarKey> free_vars(const Term& t);
bool occurs_free(const Term& t, const VarKey& v);

/// Simultaneous, capture-avoiding substitution [v1,...,vn := e1,...,en]t.
using Binding = std::pair<VarKey, Term>;
Term substitute(const Term& t, std::span<const Binding> bindings);
Term substitute(const Term& t, const VarKey& v, const Term& e);

/// Returns a name based on `base` that is not in `taken`.
std::string fresh_name(const std::string& base, const std::set<VarKey>& taken);

/// Type of the elements enumerated by a set term.
Type element_type(const Term& set);

}  // namespace eventb
