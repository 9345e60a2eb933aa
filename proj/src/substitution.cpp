#include "eventb/substitution.hpp"

namespace eventb {

struct Subst::Node {
  Kind kind = Kind::Skip;
  std::vector<Term> targets;
  std::vector<Term> values;
  std::vector<Term> conds;
  std::vector<Subst> branches;
  std::vector<Term> bound;
  Term set;
  Term where;
};

Subst Subst::skip() {
  static const Subst s{std::make_shared<const Node>(Node{})};
  return s;
}

Subst Subst::assign(std::vector<Term> targets, std::vector<Term> values) {
  Node n;
  n.kind = Kind::Assign;
  n.targets = std::move(targets);
  n.values = std::move(values);
  return Subst{std::make_shared<const Node>(std::move(n))};
}

Subst Subst::becomes_in(Term target, Term set) {
  Node n;
  n.kind = Kind::BecomesIn;
  n.targets = {std::move(target)};
  n.set = std::move(set);
  return Subst{std::make_shared<const Node>(std::move(n))};
}

Subst Subst::parallel(std::vector<Subst> branches) {
  if (branches.size() == 1) return branches.front();
  Node n;
  n.kind = Kind::Parallel;
  n.branches = std::move(branches);
  return Subst{std::make_shared<const Node>(std::move(n))};
}

Subst Subst::if_then(std::vector<Term> conds, std::vector<Subst> branches) {
  Node n;
  n.kind = Kind::If;
  n.conds = std::move(conds);
  n.branches = std::move(branches);
  return Subst{std::make_shared<const Node>(std::move(n))};
}

Subst Subst::select(std::vector<Term> guards, std::vector<Subst> branches) {
  Node n;
  n.kind = Kind::Select;
  n.conds = std::move(guards);
  n.branches = std::move(branches);
  return Subst{std::make_shared<const Node>(std::move(n))};
}

Subst Subst::choice(std::vector<Subst> branches) {
  if (branches.size() == 1) return branches.front();
  Node n;
  n.kind = Kind::Choice;
  n.branches = std::move(branches);
  return Subst{std::make_shared<const Node>(std::move(n))};
}

Subst Subst::any(std::vector<Term> bound, Term where, Subst body) {
  Node n;
  n.kind = Kind::Any;
  n.bound = std::move(bound);
  n.where = std::move(where);
  n.branches = {std::move(body)};
  return Subst{std::make_shared<const Node>(std::move(n))};
}

Subst Subst::seq(std::vector<Subst> steps) {
  if (steps.size() == 1) return steps.front();
  Node n;
  n.kind = Kind::Seq;
  n.branches = std::move(steps);
  return Subst{std::make_shared<const Node>(std::move(n))};
}

Subst::Kind Subst::kind() const { return node_->kind; }
std::span<const Term> Subst::targets() const { return node_->targets; }
std::span<const Term> Subst::values() const { return node_->values; }
std::span<const Term> Subst::conds() const { return node_->conds; }
std::span<const Subst> Subst::branches() const { return node_->branches; }
const Term& Subst::set() const { return node_->set; }
const Term& Subst::where() const { return node_->where; }
std::span<const Term> Subst::bound() const { return node_->bound; }

namespace {

template <class T>
bool same_list(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

bool same_term(const Term& a, const Term& b) {
  if (!a.valid() || !b.valid()) return a.valid() == b.valid();
  return a == b;
}

void collect_written(const Subst& s, std::set<VarKey>& out) {
  for (const auto& t : s.targets()) out.insert(t.key());
  std::set<VarKey> local;
  for (const auto& b : s.branches()) collect_written(b, local);
  for (const auto& v : s.bound()) local.erase(v.key());
  out.insert(local.begin(), local.end());
}

void add_free(const Term& t, std::set<VarKey>& out) {
  if (!t.valid()) return;
  auto fv = free_vars(t);
  out.insert(fv.begin(), fv.end());
}

void collect_read(const Subst& s, std::set<VarKey>& out) {
  std::set<VarKey> local;
  for (const auto& v : s.values()) add_free(v, local);
  for (const auto& c : s.conds()) add_free(c, local);
  add_free(s.set(), local);
  add_free(s.where(), local);
  for (const auto& b : s.branches()) collect_read(b, local);
  for (const auto& v : s.bound()) local.erase(v.key());
  out.insert(local.begin(), local.end());
}

}  // namespace

bool operator==(const Subst& a, const Subst& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && same_list<Term>(x.targets, y.targets) && same_list<Term>(x.values, y.values) &&
         same_list<Term>(x.conds, y.conds) && same_list<Subst>(x.branches, y.branches) &&
         same_list<Term>(x.bound, y.bound) && same_term(x.set, y.set) && same_term(x.where, y.where);
}

std::set<VarKey> written_vars(const Subst& s) {
  std::set<VarKey> out;
  collect_written(s, out);
  return out;
}

std::set<VarKey> read_vars(const Subst& s) {
  std::set<VarKey> out;
  collect_read(s, out);
  return out;
}

Subst substitute_reads(const Subst& s, std::span<const Binding> bindings) {
  auto sub = [&](const Term& t) { return t.valid() ? substitute(t, bindings) : t; };
  auto subs = [&](std::span<const Term> ts) {
    std::vector<Term> out;
    for (const auto& t : ts) out.push_back(sub(t));
    return out;
  };
  auto branches = [&](std::span<const Subst> bs, std::span<const Binding> b) {
    std::vector<Subst> out;
    for (const auto& x : bs) out.push_back(substitute_reads(x, b));
    return out;
  };
  switch (s.kind()) {
    case Subst::Kind::Skip:
      return s;
    case Subst::Kind::Assign:
      return Subst::assign({s.targets().begin(), s.targets().end()}, subs(s.values()));
    case Subst::Kind::BecomesIn:
      return Subst::becomes_in(s.targets()[0], sub(s.set()));
    case Subst::Kind::Parallel:
      return Subst::parallel(branches(s.branches(), bindings));
    case Subst::Kind::If:
      return Subst::if_then(subs(s.conds()), branches(s.branches(), bindings));
    case Subst::Kind::Select:
      return Subst::select(subs(s.conds()), branches(s.branches(), bindings));
    case Subst::Kind::Choice:
      return Subst::choice(branches(s.branches(), bindings));
    case Subst::Kind::Seq:
      return Subst::seq(branches(s.branches(), bindings));
    case Subst::Kind::Any: {
      // ANY-bound names are fresh by construction; drop shadowed bindings.
      std::vector<Binding> inner;
      for (const auto& b : bindings) {
        bool shadowed = false;
        for (const auto& v : s.bound()) shadowed = shadowed || v.key() == b.first;
        if (!shadowed) inner.push_back(b);
      }
      Term where = substitute(s.where(), inner);
      return Subst::any({s.bound().begin(), s.bound().end()}, where, substitute_reads(s.branches()[0], inner));
    }
  }
  return s;
}

}  // namespace eventb
