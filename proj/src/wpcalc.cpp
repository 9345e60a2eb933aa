#include "eventb/wpcalc.hpp"

#include "eventb/simplify.hpp"

namespace eventb {

namespace {

void collect_names(const Subst& s, std::set<VarKey>& out) {
  auto r = read_vars(s);
  auto w = written_vars(s);
  out.insert(r.begin(), r.end());
  out.insert(w.begin(), w.end());
  for (const auto& v : s.bound()) out.insert(v.key());
  for (const auto& b : s.branches()) collect_names(b, out);
}

// Structural predicate transformer. Box mode computes [s]r, diamond mode
// the conjugate <s>r. Fresh names are drawn from a per-call pool so output
// is deterministic.
class Transformer {
 public:
  Transformer(const Subst& s, const Term& r) {
    collect_names(s, taken_);
    auto fv = free_vars(r);
    taken_.insert(fv.begin(), fv.end());
  }

  Term run(const Subst& s, const Term& r, bool diamond) {
    using K = Subst::Kind;
    switch (s.kind()) {
      case K::Skip:
        return r;
      case K::Assign:
        return substitute(r, bindings(s.targets(), s.values()));
      case K::BecomesIn: {
        const Term& x = s.targets()[0];
        Term z = fresh(x.name(), x.type(), s.set());
        Term body = substitute(r, x.key(), z);
        return Term::quantifier(diamond ? Op::Exists : Op::Forall, z.name(), z.type(), s.set(), body);
      }
      case K::If:
      case K::Select: {
        bool is_if = s.kind() == K::If;
        std::vector<Term> parts;
        std::vector<Term> none_before;
        for (std::size_t i = 0; i < s.conds().size(); ++i) {
          std::vector<Term> path = is_if ? none_before : std::vector<Term>{};
          path.push_back(s.conds()[i]);
          parts.push_back(combine(Term::conj(path), run(s.branches()[i], r, diamond), diamond));
          none_before.push_back(Term::negate(s.conds()[i]));
        }
        if (s.has_else() || is_if) {
          Subst otherwise = s.has_else() ? s.branches().back() : Subst::skip();
          parts.push_back(combine(Term::conj(none_before), run(otherwise, r, diamond), diamond));
        }
        return diamond ? Term::disj(std::move(parts)) : Term::conj(std::move(parts));
      }
      case K::Choice: {
        std::vector<Term> parts;
        for (const auto& b : s.branches()) parts.push_back(run(b, r, diamond));
        return diamond ? Term::disj(std::move(parts)) : Term::conj(std::move(parts));
      }
      case K::Any: {
        Subst a = rename_bound(s, free_vars(r));
        Term body = combine(a.where(), run(a.branches()[0], r, diamond), diamond);
        auto bound = a.bound();
        for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
          body = Term::quantifier(diamond ? Op::Exists : Op::Forall, it->name(), it->type(), it->domain(), body);
        }
        return body;
      }
      case K::Seq: {
        Term post = r;
        auto steps = s.branches();
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) post = run(*it, post, diamond);
        return post;
      }
      case K::Parallel:
        return parallel(s, r, diamond);
    }
    return r;
  }

 private:
  static Term combine(const Term& cond, const Term& body, bool diamond) {
    return diamond ? Term::conj({cond, body}) : Term::implies(cond, body);
  }

  static std::vector<Binding> bindings(std::span<const Term> targets, std::span<const Term> values) {
    std::vector<Binding> out;
    for (std::size_t i = 0; i < targets.size(); ++i) out.emplace_back(targets[i].key(), values[i]);
    return out;
  }

  Term fresh(const std::string& base, const Type& type, const Term& domain) {
    std::string name = fresh_name(base, taken_);
    taken_.insert(VarKey{name, false});
    return Term::var(name, type, domain);
  }

  // Renames the bound variables of an ANY that clash with `avoid`.
  Subst rename_bound(const Subst& s, const std::set<VarKey>& avoid) {
    std::vector<Binding> ren;
    std::vector<Term> bound;
    for (const auto& v : s.bound()) {
      if (avoid.contains(v.key())) {
        Term z = fresh(v.name(), v.type(), v.domain());
        ren.emplace_back(v.key(), z);
        bound.push_back(z);
      } else {
        bound.push_back(v);
      }
    }
    if (ren.empty()) return s;
    return Subst::any(std::move(bound), substitute(s.where(), ren), substitute_reads(s.branches()[0], ren));
  }

  Term parallel(const Subst& s, const Term& r, bool diamond) {
    using K = Subst::Kind;
    std::vector<Subst> flat;
    flatten(s, flat);
    for (std::size_t k = 0; k < flat.size(); ++k) {
      const Subst& b = flat[k];
      if (b.kind() == K::Skip || b.kind() == K::Assign || b.kind() == K::Seq) continue;
      std::vector<Subst> rest;
      for (std::size_t j = 0; j < flat.size(); ++j) {
        if (j != k) rest.push_back(flat[j]);
      }
      auto with_rest = [&](const Subst& x) {
        std::vector<Subst> all{x};
        all.insert(all.end(), rest.begin(), rest.end());
        return Subst::parallel(std::move(all));
      };
      switch (b.kind()) {
        case K::If:
        case K::Select: {
          std::vector<Subst> branches;
          for (const auto& x : b.branches()) branches.push_back(with_rest(x));
          std::vector<Term> conds(b.conds().begin(), b.conds().end());
          if (b.kind() == K::If) {
            if (!b.has_else()) branches.push_back(with_rest(Subst::skip()));
            return run(Subst::if_then(std::move(conds), std::move(branches)), r, diamond);
          }
          return run(Subst::select(std::move(conds), std::move(branches)), r, diamond);
        }
        case K::Choice: {
          std::vector<Subst> branches;
          for (const auto& x : b.branches()) branches.push_back(with_rest(x));
          return run(Subst::choice(std::move(branches)), r, diamond);
        }
        case K::Any: {
          std::set<VarKey> avoid = free_vars(r);
          for (const auto& x : rest) collect_names(x, avoid);
          Subst a = rename_bound(b, avoid);
          return run(Subst::any({a.bound().begin(), a.bound().end()}, a.where(), with_rest(a.branches()[0])), r,
                     diamond);
        }
        case K::BecomesIn: {
          const Term& x = b.targets()[0];
          Term z = fresh(x.name(), x.type(), b.set());
          Subst any = Subst::any({z}, Term::truth(true), with_rest(Subst::assign({x}, {z})));
          return run(any, r, diamond);
        }
        default:
          break;
      }
    }
    bool has_seq = false;
    std::vector<Term> targets;
    std::vector<Term> values;
    for (const auto& b : flat) {
      if (b.kind() == K::Seq) has_seq = true;
      if (b.kind() == K::Assign) {
        targets.insert(targets.end(), b.targets().begin(), b.targets().end());
        values.insert(values.end(), b.values().begin(), b.values().end());
      }
    }
    if (!has_seq) return substitute(r, bindings(targets, values));
    return parallel_by_relation(flat, r, diamond);
  }

  // [S1 || ... || Sn]r = !w'.(prd_w1(S1) & ... & prd_wn(Sn) => r[w := w'])
  Term parallel_by_relation(const std::vector<Subst>& branches, const Term& r, bool diamond) {
    std::vector<Term> after;
    std::vector<Binding> to_after;
    std::vector<Term> relations;
    for (const auto& b : branches) {
      std::vector<Term> eqs;
      for (const auto& key : written_vars(b)) {
        Term target = find_target(b, key);
        Term z = fresh(key.name, target.type(), target.domain());
        after.push_back(z);
        to_after.emplace_back(key, z);
        eqs.push_back(Term::eq(target, z));
      }
      relations.push_back(run(b, Term::conj(std::move(eqs)), true));
    }
    Term post = substitute(r, to_after);
    Term body = diamond ? Term::conj({Term::conj(relations), post}) : Term::implies(Term::conj(relations), post);
    for (auto it = after.rbegin(); it != after.rend(); ++it) {
      body = Term::quantifier(diamond ? Op::Exists : Op::Forall, it->name(), it->type(), it->domain(), body);
    }
    return body;
  }

  static Term find_target(const Subst& s, const VarKey& key) {
    for (const auto& t : s.targets()) {
      if (t.key() == key) return t;
    }
    for (const auto& b : s.branches()) {
      Term t = find_target(b, key);
      if (t.valid()) return t;
    }
    return {};
  }

  static void flatten(const Subst& s, std::vector<Subst>& out) {
    if (s.kind() != Subst::Kind::Parallel) {
      out.push_back(s);
      return;
    }
    for (const auto& b : s.branches()) flatten(b, out);
  }

  std::set<VarKey> taken_;
};

Term transform(const Subst& s, const Term& r, bool diamond) {
  Transformer t(s, r);
  return simplify(t.run(s, r, diamond));
}

}  // namespace

Term wp(const Subst& s, const Term& r) { return transform(s, r, false); }

Term fis(const Subst& s) { return simplify(Term::negate(wp(s, Term::truth(false)))); }

Term conjugate_wp(const Subst& s, const Term& r) { return transform(s, r, true); }

Term prd(const Subst& s, const std::vector<VarDecl>& vars) {
  std::vector<Term> eqs;
  for (const auto& v : vars) eqs.push_back(Term::eq(v.as_term(), v.as_term(true)));
  return conjugate_wp(s, Term::conj(std::move(eqs)));
}

NormalizedEvent normalize_event(const Subst& body) {
  Subst action = body;
  if (body.kind() == Subst::Kind::Select && body.conds().size() == 1 && !body.has_else()) action = body.branches()[0];
  return {fis(body), action};
}

}  // namespace eventb
