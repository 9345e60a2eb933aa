#include "eventb/refinement.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "eventb/printer.hpp"
#include "eventb/simplify.hpp"
#include "eventb/wpcalc.hpp"

namespace eventb {

namespace {

Term value_term(Value v, const Type& t, const Signature& sig) {
  switch (t.kind) {
    case Type::Kind::Bool:
      return Term::constant(v ? "TRUE" : "FALSE", Type::boolean(), v);
    case Type::Kind::Enum:
      return Term::constant(sig.value_name(v, t), t, v);
    case Type::Kind::Int:
      break;
  }
  return Term::integer(v);
}

// A cube fixes, for every variable, the set of admitted domain positions.
using Cube = std::vector<std::vector<bool>>;

bool merge_once(std::vector<Cube>& cubes) {
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    for (std::size_t j = i + 1; j < cubes.size(); ++j) {
      std::size_t diff = 0;
      std::size_t at = 0;
      for (std::size_t k = 0; k < cubes[i].size() && diff < 2; ++k) {
        if (cubes[i][k] != cubes[j][k]) {
          ++diff;
          at = k;
        }
      }
      if (diff > 1) continue;
      if (diff == 1) {
        for (std::size_t x = 0; x < cubes[i][at].size(); ++x) {
          cubes[i][at][x] = cubes[i][at][x] || cubes[j][at][x];
        }
      }
      cubes.erase(cubes.begin() + static_cast<std::ptrdiff_t>(j));
      return true;
    }
  }
  return false;
}

Term cube_term(const Cube& c, const std::vector<VarDecl>& vars, const std::vector<std::vector<Value>>& domains,
               const Signature& sig) {
  std::vector<Term> lits;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    std::vector<Value> in;
    std::vector<Value> out;
    for (std::size_t x = 0; x < domains[k].size(); ++x) (c[k][x] ? in : out).push_back(domains[k][x]);
    if (out.empty()) continue;
    Term var = vars[k].as_term();
    if (in.size() == 1) {
      lits.push_back(Term::eq(var, value_term(in[0], vars[k].type, sig)));
    } else if (out.size() == 1) {
      lits.push_back(Term::make(Op::Neq, {var, value_term(out[0], vars[k].type, sig)}));
    } else {
      std::vector<Term> els;
      for (Value v : in) els.push_back(value_term(v, vars[k].type, sig));
      lits.push_back(Term::member(var, Term::extension(std::move(els), vars[k].type)));
    }
  }
  return Term::conj(std::move(lits));
}

Term disjoin_substates(const RefinementModel& r, const std::vector<std::size_t>& idx, const Term& inv) {
  std::vector<Term> parts;
  for (auto i : idx) parts.push_back(Term::conj({r.concrete.assertions[i], inv}));
  return Term::disj(std::move(parts));
}

bool has_quantifier(const Term& t) {
  if (t.op() == Op::Forall || t.op() == Op::Exists) return true;
  return std::any_of(t.args().begin(), t.args().end(), has_quantifier);
}

}  // namespace

std::optional<Term> dnf_by_enumeration(const Term& p, const std::vector<VarDecl>& vars, const Signature& sig,
                                       std::uint64_t budget) {
  if (space_size(vars, budget) > budget) return std::nullopt;
  std::vector<std::vector<Value>> domains;
  for (const auto& v : vars) domains.push_back(domain_values(v.domain));
  std::vector<Cube> cubes;
  std::size_t total = 0;
  for_each_valuation(vars, [&](const Valuation& val) {
    ++total;
    if (!evaluate(p, val)) return true;
    Cube c;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      Value x = *val.get(VarKey{vars[k].name, false});
      std::vector<bool> bits(domains[k].size(), false);
      bits[static_cast<std::size_t>(std::find(domains[k].begin(), domains[k].end(), x) - domains[k].begin())] = true;
      c.push_back(std::move(bits));
    }
    cubes.push_back(std::move(c));
    return true;
  });
  if (cubes.empty()) return Term::truth(false);
  if (cubes.size() == total) return Term::truth(true);
  while (merge_once(cubes)) {
  }
  std::vector<Term> parts;
  for (const auto& c : cubes) parts.push_back(cube_term(c, vars, domains, sig));
  return simplify(Term::disj(std::move(parts)));
}

std::string abstract_name(const RefinementModel& r, const Term& abstract_predicate) {
  std::vector<Binding> undo;
  for (const auto& [orig, renamed] : r.renamed) {
    const VarDecl* v = r.abstraction.signature.find_variable(renamed);
    undo.emplace_back(VarKey{renamed, false}, Term::var(orig, v->type, v->domain));
  }
  return normalize_whitespace(to_text(substitute(abstract_predicate, undo)));
}

ProjectedState project_state(const SymbolicState& abstract_state, const RefinementModel& r, const GenOptions& opts) {
  const auto& cvars = r.concrete.signature.variables();
  Term quantified =
      exists_over(r.abstraction.signature.variables(), Term::conj({r.gluing(), abstract_state.interpretation}));
  ProjectedState out;
  out.abstract_state = abstract_state.name;
  out.state.id = abstract_state.id;
  auto dnf = dnf_by_enumeration(quantified, cvars, r.concrete.signature, opts.budget);
  out.state.predicate = dnf ? *dnf : quantified;
  out.state.interpretation = out.state.predicate;
  out.state.name = normalize_whitespace(to_text(out.state.predicate));
  out.eliminated = dnf && dnf->is_false();
  ProofObligation po{r.name() + ":proj:" + abstract_state.id, Term::equiv(out.state.predicate, quantified),
                     PoKind::Validity, cvars};
  out.verdict = decide(po, opts.budget, opts.assumptions);
  return out;
}

std::vector<Decomposition> check_decompositions(const RefinementModel& r, const GenOptions& opts) {
  const auto& cvars = r.concrete.signature.variables();
  Term inv = concrete_invariant(r);
  std::vector<Decomposition> out;
  for (std::size_t k = 0; k < r.decompositions.size(); ++k) {
    const auto& d = r.decompositions[k];
    Decomposition dec;
    dec.super_state = abstract_name(r, d.abstract_predicate);
    dec.abstract_predicate = d.abstract_predicate;
    for (auto i : d.substates) dec.substates.push_back("E" + std::to_string(i + 1));
    Term projection = exists_over(r.abstraction.signature.variables(),
                                  Term::conj({r.gluing(), r.abstraction.invariant, d.abstract_predicate}));
    ProofObligation po{r.name() + ":decomp:" + std::to_string(k + 1),
                       Term::equiv(disjoin_substates(r, d.substates, inv), projection), PoKind::Validity, cvars};
    dec.verdict = decide(po, opts.budget, opts.assumptions);
    out.push_back(std::move(dec));
  }
  return out;
}

Slts generate_projected(const RefinementModel& r, const GenOptions& opts) {
  auto decs = check_decompositions(r, opts);
  MachineModel m = concrete_view(r);
  const auto& cvars = m.signature.variables();
  // An equivalent quantifier-free invariant keeps state interpretations readable.
  if (auto dnf = dnf_by_enumeration(m.invariant, cvars, m.signature, opts.budget)) m.invariant = *dnf;

  GenOptions gen = opts;
  gen.keep_all_states = true;
  Slts s = generate(m, gen);
  for (const auto& d : decs) {
    s.pos.push_back(record(d.verdict, PoKind::Validity, m.signature));
    if (d.verdict.outcome == Outcome::Invalid) {
      std::string msg = "decomposition of " + d.super_state + " is invalid";
      if (d.verdict.witness) msg += " (witness " + d.verdict.witness->to_string(m.signature) + ")";
      throw Error(Error::Kind::Semantic, msg);
    }
    if (d.verdict.outcome == Outcome::Unknown) {
      s.warnings.push_back("decomposition of " + d.super_state + " was not checked within the budget");
    }
    SuperState sup{d.super_state, d.abstract_predicate, d.substates, d.verdict.outcome};
    for (const auto& id : d.substates) {
      for (auto& st : s.states) {
        if (st.id == id) st.super_states.push_back(d.super_state);
      }
    }
    s.super_states.push_back(std::move(sup));
  }
  for (auto& t : s.transitions) {
    if (t.a.is_true() || !has_quantifier(t.a)) continue;
    if (auto dnf = dnf_by_enumeration(t.a, cvars, m.signature, opts.budget)) t.a = *dnf;
  }

  if (!r.new_events.empty()) {
    const auto& avars = r.abstraction.signature.variables();
    for (std::size_t i = 0; i < decs.size(); ++i) {
      for (std::size_t j = i + 1; j < decs.size(); ++j) {
        ProofObligation ov{r.name() + ":overlap:" + decs[i].super_state + ":" + decs[j].super_state,
                           Term::conj({r.abstraction.invariant, decs[i].abstract_predicate, decs[j].abstract_predicate}),
                           PoKind::Satisfiability, avars};
        if (decide(ov, opts.budget, opts.assumptions).outcome != Outcome::Invalid) {
          s.warnings.push_back("super-states " + decs[i].super_state + " and " + decs[j].super_state +
                               " may overlap; new-event transitions between them are drawn as ordinary transitions");
        }
      }
    }
  }
  return s;
}

std::vector<LemmaEntry> check_projection_lemma(const Slts& abstract_slts, const Slts& projected,
                                               const RefinementModel& r, const GenOptions& opts) {
  auto vars = joint_variables(r);
  auto interface = interface_of(r.abstraction);
  const auto& avars = r.abstraction.signature.variables();

  // super-state name -> matching abstract SLTS state
  std::map<std::string, const SymbolicState*> abstract_of;
  for (const auto& sup : projected.super_states) {
    const SymbolicState* match = nullptr;
    for (const auto& st : abstract_slts.states) {
      if (!st.initial && st.predicate == sup.predicate) match = &st;
    }
    if (!match) {
      for (const auto& st : abstract_slts.states) {
        if (st.initial) continue;
        ProofObligation eq{"", Term::implies(r.abstraction.invariant, Term::equiv(st.predicate, sup.predicate)),
                           PoKind::Validity, avars};
        if (decide(eq, opts.budget).outcome == Outcome::Valid) {
          match = &st;
          break;
        }
      }
    }
    if (match) abstract_of[sup.name] = match;
  }

  std::vector<LemmaEntry> out;
  for (const auto& t : projected.transitions) {
    if (!interface.contains(t.event)) continue;
    const SymbolicState* src = projected.find_state(t.source);
    const SymbolicState* tgt = projected.find_state(t.target);
    for (const auto& ss : src->super_states) {
      auto es = abstract_of.find(ss);
      if (es == abstract_of.end()) continue;
      for (const auto& ts : tgt->super_states) {
        auto fs = abstract_of.find(ts);
        if (fs == abstract_of.end()) continue;
        const SltsTransition* at = abstract_slts.find_transition(es->second->id, t.event, fs->second->id);
        Term d = at ? at->d : Term::truth(false);
        Term hyp = Term::conj({es->second->interpretation, r.gluing(), src->interpretation, t.d});
        LemmaEntry e{t.source, t.event, t.target, es->second->id, fs->second->id, {}};
        ProofObligation po{r.name() + ":lemma:" + t.source + ":" + t.event + ":" + t.target + ":" + e.abstract_source +
                               ":" + e.abstract_target,
                           Term::implies(hyp, d), PoKind::Validity, vars};
        Signature sig = r.concrete.signature;
        for (const auto& v : avars) sig.add_variable(v);
        e.po = record(decide(po, opts.budget, opts.assumptions), PoKind::Validity, sig);
        out.push_back(std::move(e));
      }
    }
  }
  return out;
}

std::vector<PoRecord> gen_refinement_pos(const RefinementModel& r, const GenOptions& opts) {
  if (!r.new_events.empty() && !r.variant) {
    throw Error(Error::Kind::Semantic, "refinement " + r.name() + " introduces new events but declares no VARIANT");
  }
  auto vars = joint_variables(r);
  Signature sig = r.concrete.signature;
  for (const auto& v : r.abstraction.signature.variables()) sig.add_variable(v);
  const Term& j = r.gluing();
  Term ij = Term::conj({r.abstraction.invariant, j});
  std::vector<PoRecord> out;
  auto add = [&](const std::string& suffix, Term formula) {
    ProofObligation po{r.name() + ":ref:" + suffix, std::move(formula), PoKind::Validity, vars};
    out.push_back(record(decide(po, opts.budget, opts.assumptions), PoKind::Validity, sig));
  };

  add("init", wp(r.concrete.initialisation, conjugate_wp(r.abstraction.initialisation, j)));
  for (const auto& ae : r.abstraction.events) {
    const Event* ce = r.concrete.find_event(ae.name);
    add("event:" + ae.name, Term::implies(ij, wp(ce->body, conjugate_wp(ae.body, j))));
  }
  for (const auto& name : r.new_events) {
    add("new:" + name, Term::implies(ij, wp(r.concrete.find_event(name)->body, j)));
  }
  if (!r.new_events.empty()) {
    const Term& v = *r.variant;
    add("variant:nat", Term::implies(ij, Term::make(Op::Ge, {v, Term::integer(0)})));
    std::set<VarKey> taken;
    for (const auto& x : vars) taken.insert(VarKey{x.name, false});
    Term old = Term::var(fresh_name("v", taken), Type::integer());
    for (const auto& name : r.new_events) {
      Term dec = wp(r.concrete.find_event(name)->body, Term::make(Op::Lt, {v, old}));
      add("variant:" + name, Term::implies(ij, substitute(dec, old.key(), v)));
    }
  }
  std::vector<Term> abstract_guards;
  std::vector<Term> concrete_guards;
  for (const auto& e : r.abstraction.events) abstract_guards.push_back(fis(e.body));
  for (const auto& e : r.concrete.events) concrete_guards.push_back(fis(e.body));
  add("liveness", Term::implies(ij, Term::implies(Term::disj(abstract_guards), Term::disj(concrete_guards))));
  return out;
}

}  // namespace eventb
