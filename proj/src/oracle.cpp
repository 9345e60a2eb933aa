#include "eventb/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "eventb/wpcalc.hpp"

namespace eventb {

Valuation to_valuation(const State& s, const std::vector<VarDecl>& vars) {
  Valuation v;
  for (std::size_t i = 0; i < vars.size(); ++i) v.push(VarKey{vars[i].name, false}, vars[i].type, s[i]);
  return v;
}

State to_state(const Valuation& v, const std::vector<VarDecl>& vars) {
  State s;
  for (const auto& x : vars) {
    auto value = v.get(VarKey{x.name, false});
    if (!value) throw Error(Error::Kind::Semantic, "valuation misses variable " + x.name);
    s.push_back(*value);
  }
  return s;
}

std::vector<State> invariant_states(const Term& invariant, const std::vector<VarDecl>& vars) {
  std::vector<State> out;
  for_each_valuation(vars, [&](const Valuation& v) {
    if (evaluate(invariant, v)) out.push_back(to_state(v, vars));
    return true;
  });
  return out;
}

namespace {

void normalize(std::vector<State>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

class Executor {
 public:
  explicit Executor(const std::vector<VarDecl>& vars) : vars_(vars) {}

  std::vector<State> run(const Subst& s, const State& st) {
    using K = Subst::Kind;
    std::vector<State> out;
    switch (s.kind()) {
      case K::Skip:
        out.push_back(st);
        break;
      case K::Assign: {
        Valuation e = env(st);
        State next = st;
        for (std::size_t i = 0; i < s.targets().size(); ++i) {
          next[index(s.targets()[i].name())] = evaluate_expr(s.values()[i], e);
        }
        out.push_back(std::move(next));
        break;
      }
      case K::BecomesIn: {
        std::size_t k = index(s.targets()[0].name());
        for (Value x : domain_values(s.set(), env(st))) {
          State next = st;
          next[k] = x;
          out.push_back(std::move(next));
        }
        break;
      }
      case K::Parallel: {
        std::vector<State> partial{st};
        for (const auto& b : s.branches()) {
          auto results = run(b, st);
          std::vector<std::size_t> written;
          for (const auto& key : written_vars(b)) written.push_back(index(key.name));
          std::vector<State> next;
          for (const auto& p : partial) {
            for (const auto& r : results) {
              State q = p;
              for (auto k : written) q[k] = r[k];
              next.push_back(std::move(q));
            }
          }
          partial = std::move(next);
        }
        out = std::move(partial);
        break;
      }
      case K::Seq: {
        std::vector<State> cur{st};
        for (const auto& b : s.branches()) {
          std::vector<State> next;
          for (const auto& c : cur) {
            auto r = run(b, c);
            next.insert(next.end(), r.begin(), r.end());
          }
          normalize(next);
          cur = std::move(next);
        }
        out = std::move(cur);
        break;
      }
      case K::If: {
        Valuation e = env(st);
        for (std::size_t i = 0; i < s.conds().size(); ++i) {
          if (evaluate(s.conds()[i], e)) return run(s.branches()[i], st);
        }
        if (s.has_else()) return run(s.branches().back(), st);
        out.push_back(st);
        break;
      }
      case K::Select: {
        Valuation e = env(st);
        bool any = false;
        for (std::size_t i = 0; i < s.conds().size(); ++i) {
          if (!evaluate(s.conds()[i], e)) continue;
          any = true;
          auto r = run(s.branches()[i], st);
          out.insert(out.end(), r.begin(), r.end());
        }
        if (!any && s.has_else()) out = run(s.branches().back(), st);
        break;
      }
      case K::Choice:
        for (const auto& b : s.branches()) {
          auto r = run(b, st);
          out.insert(out.end(), r.begin(), r.end());
        }
        break;
      case K::Any:
        bind(s, 0, st, out);
        break;
    }
    normalize(out);
    return out;
  }

 private:
  void bind(const Subst& s, std::size_t k, const State& st, std::vector<State>& out) {
    auto bound = s.bound();
    if (k == bound.size()) {
      if (!evaluate(s.where(), env(st))) return;
      auto r = run(s.branches()[0], st);
      out.insert(out.end(), r.begin(), r.end());
      return;
    }
    const Term& v = bound[k];
    for (Value x : domain_values(v.domain(), env(st))) {
      locals_.push_back({v.key(), v.type(), x});
      bind(s, k + 1, st, out);
      locals_.pop_back();
    }
  }

  Valuation env(const State& st) const {
    Valuation v = to_valuation(st, vars_);
    for (const auto& e : locals_) v.push(e.key, e.type, e.value);
    return v;
  }

  std::size_t index(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].name == name) return i;
    }
    throw Error(Error::Kind::UnknownIdentifier, "assignment to unknown variable " + name);
  }

  const std::vector<VarDecl>& vars_;
  std::vector<Valuation::Entry> locals_;
};

using Sequence = std::vector<std::string>;

bool shorter_first(const Sequence& a, const Sequence& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

std::vector<State> execute(const Subst& s, const State& from, const std::vector<VarDecl>& vars) {
  return Executor(vars).run(s, from);
}

std::vector<Valuation> successors(const Valuation& v, const Event& e, const MachineModel& m) {
  const auto& vars = m.signature.variables();
  std::vector<Valuation> out;
  for (const auto& s : execute(e.body, to_state(v, vars), vars)) out.push_back(to_valuation(s, vars));
  return out;
}

std::vector<State> initial_states(const MachineModel& m) {
  const auto& vars = m.signature.variables();
  std::vector<State> out;
  for_each_valuation(vars, [&](const Valuation& v) {
    auto r = execute(m.initialisation, to_state(v, vars), vars);
    out.insert(out.end(), r.begin(), r.end());
    return true;
  });
  normalize(out);
  return out;
}

std::vector<ConcreteTrace> enumerate_traces(const MachineModel& m, std::size_t max_len) {
  const auto& vars = m.signature.variables();
  // sequence -> reachable final state -> witness
  using Level = std::map<Sequence, std::map<State, std::vector<State>>>;
  Level level;
  for (const auto& s : initial_states(m)) level[{kInitEvent}].emplace(s, std::vector<State>{s});
  std::vector<ConcreteTrace> out;
  for (std::size_t depth = 0;; ++depth) {
    for (const auto& [seq, finals] : level) out.push_back({seq, finals.begin()->second});
    if (depth == max_len) break;
    Level next;
    for (const auto& [seq, finals] : level) {
      for (const auto& e : m.events) {
        Sequence ext = seq;
        ext.push_back(e.name);
        for (const auto& [st, witness] : finals) {
          for (const auto& r : execute(e.body, st, vars)) {
            auto& slot = next[ext];
            if (slot.contains(r)) continue;
            auto w = witness;
            w.push_back(r);
            slot.emplace(r, std::move(w));
          }
        }
      }
    }
    if (next.empty()) break;
    level = std::move(next);
  }
  return out;
}

std::vector<ConcretePath> enumerate_paths(const Slts& s, const MachineModel& m, std::size_t max_len) {
  const auto& vars = m.signature.variables();
  std::map<std::string, Subst> actions{{kInitEvent, m.initialisation}};
  for (const auto& e : m.events) actions.emplace(e.name, normalize_event(e.body).action);
  std::map<std::string, Term> interp;
  for (const auto& st : s.states) interp.emplace(st.id, st.interpretation);
  auto inv_states = invariant_states(m.invariant, vars);
  std::set<State> inv(inv_states.begin(), inv_states.end());

  struct Trail {
    std::vector<std::string> states;
    std::vector<State> values;
  };
  using Key = std::pair<std::string, State>;
  using Level = std::map<Sequence, std::map<Key, Trail>>;

  // Crossings of `t` from x1; appends reached (state, value) pairs.
  auto cross = [&](const SltsTransition& t, const State& x1, auto&& emit) {
    Valuation v1 = to_valuation(x1, vars);
    if (!evaluate(interp.at(t.source), v1) || !evaluate(t.d, v1) || !evaluate(t.a, v1)) return;
    for (const auto& x2 : execute(actions.at(t.event), x1, vars)) {
      if (!inv.contains(x2) || !evaluate(interp.at(t.target), to_valuation(x2, vars))) continue;
      emit(x2);
    }
  };

  Level level;
  for (const auto& t : s.transitions) {
    if (t.source != kInitState) continue;
    for (const auto& x1 : inv_states) {
      cross(t, x1, [&](const State& x2) {
        auto& slot = level[{t.event}];
        Key key{t.target, x2};
        if (!slot.contains(key)) slot.emplace(key, Trail{{kInitState, t.target}, {x2}});
      });
    }
  }
  std::vector<ConcretePath> out;
  for (std::size_t depth = 0;; ++depth) {
    for (const auto& [seq, ends] : level) {
      const Trail& tr = ends.begin()->second;
      out.push_back({seq, tr.states, tr.values});
    }
    if (depth == max_len) break;
    Level next;
    for (const auto& [seq, ends] : level) {
      for (const auto& [key, trail] : ends) {
        for (const auto& t : s.transitions) {
          if (t.source != key.first || t.source == kInitState) continue;
          Sequence ext = seq;
          ext.push_back(t.event);
          cross(t, key.second, [&](const State& x2) {
            auto& slot = next[ext];
            Key k2{t.target, x2};
            if (slot.contains(k2)) return;
            Trail tr2 = trail;
            tr2.states.push_back(t.target);
            tr2.values.push_back(x2);
            slot.emplace(k2, std::move(tr2));
          });
        }
      }
    }
    if (next.empty()) break;
    level = std::move(next);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ConcretePath& a, const ConcretePath& b) { return shorter_first(a.events, b.events); });
  return out;
}

EqualityReport check_trace_path_equality(const MachineModel& m, const Slts& s, std::size_t max_len) {
  std::vector<Sequence> traces;
  for (auto& t : enumerate_traces(m, max_len)) traces.push_back(std::move(t.events));
  std::vector<Sequence> paths;
  for (auto& p : enumerate_paths(s, m, max_len)) paths.push_back(std::move(p.events));
  std::sort(traces.begin(), traces.end(), shorter_first);
  std::sort(paths.begin(), paths.end(), shorter_first);
  EqualityReport r;
  r.traces = traces.size();
  r.paths = paths.size();
  std::vector<Sequence> only_traces;
  std::vector<Sequence> only_paths;
  std::set_difference(traces.begin(), traces.end(), paths.begin(), paths.end(), std::back_inserter(only_traces),
                      shorter_first);
  std::set_difference(paths.begin(), paths.end(), traces.begin(), traces.end(), std::back_inserter(only_paths),
                      shorter_first);
  if (only_traces.empty() && only_paths.empty()) return r;
  r.equal = false;
  if (only_paths.empty() || (!only_traces.empty() && shorter_first(only_traces[0], only_paths[0]))) {
    r.divergence = only_traces[0];
    r.divergence_is_trace = true;
  } else {
    r.divergence = only_paths[0];
  }
  return r;
}

bool traces_included_in_paths(const MachineModel& m, const Slts& s, std::size_t max_len) {
  std::set<Sequence> paths;
  for (auto& p : enumerate_paths(s, m, max_len)) paths.insert(std::move(p.events));
  for (const auto& t : enumerate_traces(m, max_len)) {
    if (!paths.contains(t.events)) return false;
  }
  return true;
}

std::string join_events(const std::vector<std::string>& events) {
  std::string out;
  for (const auto& e : events) {
    if (!out.empty()) out += '.';
    out += e;
  }
  return out;
}

}  // namespace eventb
