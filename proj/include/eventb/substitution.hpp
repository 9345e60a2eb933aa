#pragma once

#include <memory>
#include <set>
#include <span>
#include <vector>

#include "eventb/term.hpp"

namespace eventb {

/// Generalized substitution. Immutable and structurally shared like Term.
///
///   Skip
///   Assign     targets := values            (simultaneous, x, y := E, F)
///   BecomesIn  targets[0] :: set
///   Parallel   branches[0] || branches[1] || ...
///   If         IF conds[0] THEN branches[0] ELSIF ... [ELSE branches.back()] END
///   Select     SELECT conds[0] THEN branches[0] WHEN ... [ELSE branches.back()] END
///   Choice     CHOICE branches[0] OR branches[1] ... END
///   Any        ANY bound WHERE cond THEN branches[0] END   (bound vars carry their domains)
///   Seq        branches[0] ; branches[1] ; ...
class Subst {
 public:
  enum class Kind : std::uint8_t { Skip, Assign, BecomesIn, Parallel, If, Select, Choice, Any, Seq };

  Subst() : Subst(skip()) {}

  static Subst skip();
  static Subst assign(std::vector<Term> targets, std::vector<Term> values);
  static Subst becomes_in(Term target, Term set);
  static Subst parallel(std::vector<Subst> branches);
  static Subst if_then(std::vector<Term> conds, std::vector<Subst> branches);
  static Subst select(std::vector<Term> guards, std::vector<Subst> branches);
  static Subst choice(std::vector<Subst> branches);
  static Subst any(std::vector<Term> bound, Term where, Subst body);
  static Subst seq(std::vector<Subst> steps);

  Kind kind() const;
  std::span<const Term> targets() const;
  std::span<const Term> values() const;
  std::span<const Term> conds() const;
  std::span<const Subst> branches() const;
  const Term& set() const;    // BecomesIn
  const Term& where() const;  // Any
  std::span<const Term> bound() const;

  /// True when the last branch of an If/Select is an ELSE branch.
  bool has_else() const { return branches().size() > conds().size(); }

  friend bool operator==(const Subst& a, const Subst& b);

 private:
  struct Node;
  explicit Subst(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// State variables possibly modified by `s` (ANY-bound names excluded).
std::set<VarKey> written_vars(const Subst& s);

/// Free variables read by `s`, including assigned targets' right-hand sides.
std::set<VarKey> read_vars(const Subst& s);

/// Substitutes free occurrences of variables in every expression and
/// condition of `s` (assignment targets are left untouched). Only sound for
/// variables that `s` never writes.
Subst substitute_reads(const Subst& s, std::span<const Binding> bindings);

}  // namespace eventb
