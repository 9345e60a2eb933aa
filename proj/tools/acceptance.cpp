#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <variant>

#include "CLI11.hpp"
#include "eventb/oracle.hpp"
#include "eventb/parser.hpp"
#include "eventb/printer.hpp"
#include "eventb/refinement.hpp"
#include "eventb/secprops.hpp"
#include "eventb/wpcalc.hpp"

using namespace eventb;

namespace {

std::string g_fixtures = FIXTURE_DIR;

class Report {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& line) { notes_.push_back(line); }
  bool passed() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

MachineModel machine(const std::string& name) {
  return std::get<MachineModel>(load_component(g_fixtures + "/" + name));
}

RefinementModel refinement(const std::string& name) {
  return std::get<RefinementModel>(load_component(g_fixtures + "/" + name));
}

std::string label_between(const Slts& s, const std::string& src, const std::string& ev, const std::string& tgt) {
  const auto* a = s.find_state_by_name(src);
  const auto* b = s.find_state_by_name(tgt);
  if (!a || !b) return "missing-state";
  const auto* t = s.find_transition(a->id, ev, b->id);
  return t ? t->label() : "none";
}

bool valid(const Term& p, const std::vector<VarDecl>& vars) {
  return decide({"check", p, PoKind::Validity, vars}, 1'000'000).outcome == Outcome::Valid;
}

void demoney_fidelity(Report& r) {
  MachineModel m = machine("demoney.mch");
  Slts s = generate(m);
  const auto& vars = m.signature.variables();
  std::vector<std::string> names;
  for (const auto& st : s.states) names.push_back(st.name);
  r.expect(names == std::vector<std::string>{"Init", "Error=FALSE", "Error=TRUE"}, "states Init, Error=FALSE, Error=TRUE");
  for (const auto& e : m.events) {
    for (const char* src : {"Error=FALSE", "Error=TRUE"}) {
      const auto* st = s.find_state_by_name(src);
      bool enabled = false;
      for (const auto* t : s.outgoing(st->id, e.name)) {
        enabled = true;
        r.expect(t->d_is_true(), e.name + " from " + src + " has D=true");
      }
      r.expect(enabled, e.name + " enabled from " + src);
    }
  }
  r.expect(label_between(s, "Error=TRUE", "GetData", "Error=FALSE") == "[][]GetData",
           "(Error=TRUE, GetData, Error=FALSE) has A=true");
  r.expect(label_between(s, "Error=TRUE", "GetData", "Error=TRUE") == "none", "no (Error=TRUE, GetData, Error=TRUE)");
  const auto* f = s.find_state_by_name("Error=FALSE");
  const auto* t = s.find_state_by_name("Error=TRUE");
  const auto* get = s.find_transition(f->id, "GetData", t->id);
  r.expect(get != nullptr, "(Error=FALSE, GetData, Error=TRUE) exists");
  if (get) {
    Term want = parse_predicate("EngagedTrans = TRUE", m.signature);
    r.expect(valid(Term::implies(f->interpretation, Term::equiv(get->a, want)), vars),
             "A of (Error=FALSE, GetData, Error=TRUE) is EngagedTrans=TRUE");
    r.note("A(Error=FALSE, GetData, Error=TRUE) = " + to_text(get->a));
  }
  for (const char* src : {"Error=FALSE", "Error=TRUE"}) {
    r.expect(label_between(s, src, "Reset", "Error=FALSE") == "[][]Reset", std::string("Reset from ") + src + " is [][]");
    r.expect(label_between(s, src, "Reset", "Error=TRUE") == "none", std::string("Reset from ") + src + " only to Error=FALSE");
  }
  r.expect(s.minimal && is_minimal(s), "SLTS is minimal");
  r.note(std::to_string(s.transitions.size()) + " transitions, " + std::to_string(s.pos.size()) + " obligations");
}

void refinement_fidelity(Report& r) {
  RefinementModel ref = refinement("demoney_r1.ref");
  Slts s = generate_projected(ref);
  r.expect(s.states.size() == 5, "4 substates plus Init");
  r.expect(s.super_states.size() == 2, "2 super-states");
  for (const auto& sup : s.super_states) {
    r.expect(sup.substates.size() == 2, sup.name + " has 2 substates");
    r.expect(sup.verdict == Outcome::Valid, sup.name + " decomposition is Valid");
  }
  std::vector<std::string> unreached;
  for (const auto& id : s.unreached) unreached.push_back(s.find_state(id)->name);
  r.expect(unreached == std::vector<std::string>{"StatusWord/=ISO_Ok & CurTransaction/=None"},
           "only StatusWord/=ISO_Ok & CurTransaction/=None is unreachable");
  Slts abs = generate(ref.abstraction);
  r.expect(label_between(abs, "Error=FALSE", "CompleteTransaction", "Error=TRUE") == "[][G]CompleteTransaction",
           "abstract Error=FALSE -> Error=TRUE is [][G]CompleteTransaction");
  r.expect(label_between(abs, "Error=FALSE", "CompleteTransaction", "Error=FALSE") == "[][G]CompleteTransaction",
           "abstract Error=FALSE -> Error=FALSE is [][G]CompleteTransaction");
  r.expect(label_between(s, "StatusWord=ISO_Ok & CurTransaction=None", "CompleteTransaction",
                         "StatusWord/=ISO_Ok & CurTransaction=None") == "[][]CompleteTransaction",
           "ISO_Ok & None -> /=ISO_Ok & None is [][]CompleteTransaction");
  r.expect(label_between(s, "StatusWord=ISO_Ok & CurTransaction/=None", "CompleteTransaction",
                         "StatusWord=ISO_Ok & CurTransaction=None") == "[][]CompleteTransaction",
           "CurTransaction/=None -> CurTransaction=None is [][]CompleteTransaction");
}

void mutation(Report& r, const std::string& what, const MachineModel& m, const Slts& s, std::size_t depth) {
  EqualityReport base = check_trace_path_equality(m, s, depth);
  r.expect(base.equal, what + " traces equal paths at depth " + std::to_string(depth));
  r.note(what + ": " + std::to_string(base.traces) + " traces, " + std::to_string(base.paths) + " paths");
  std::size_t survivors = 0;
  for (std::size_t i = 0; i < s.transitions.size(); ++i) {
    Slts mutant = s;
    mutant.transitions.erase(mutant.transitions.begin() + static_cast<std::ptrdiff_t>(i));
    if (check_trace_path_equality(m, mutant, depth).equal) {
      const auto& t = s.transitions[i];
      ++survivors;
      r.expect(false, what + " mutant without " + s.find_state(t.source)->name + " --" + t.event + "--> " +
                          s.find_state(t.target)->name + " keeps equality");
    }
  }
  r.note(what + ": " + std::to_string(s.transitions.size() - survivors) + " of " +
         std::to_string(s.transitions.size()) + " single-transition deletions break equality");
}

void trace_equality(Report& r) {
  MachineModel d = machine("demoney.mch");
  mutation(r, "Demoney", d, generate(d), 5);
  RefinementModel ref = refinement("demoney_r1.ref");
  mutation(r, "Demoney_R1", concrete_view(ref), generate_projected(ref), 4);
}

std::vector<PropertyFormula> atomicity(const Slts& s) {
  return parse_properties(read_file(g_fixtures + "/atomicity.props"), s.signature, s.invariant, s.events);
}

void security(Report& r) {
  RefinementModel ref = refinement("demoney_r1.ref");
  Slts s = generate_projected(ref);
  MachineModel view = concrete_view(ref);
  const std::vector<std::set<int>> cited{{5}, {7}, {7}, {7}, {5, 6}};
  auto formulas = atomicity(s);
  r.expect(formulas.size() == cited.size(), "five atomicity formulas");
  for (std::size_t i = 0; i < formulas.size() && i < cited.size(); ++i) {
    const auto& f = formulas[i];
    CheckResult syn = check_syntactic(f, s, 1'000'000);
    CheckResult sem = check_semantic(f, view, 1'000'000);
    r.note(f.label + " syntactic " + to_string(syn.truth) + " " + syn.citation() + ", semantic " +
           to_string(sem.truth));
    r.expect(syn.truth == Truth::True, f.label + " is True syntactically");
    r.expect(syn.cases == cited[i], f.label + " cites the expected lemma case");
    r.expect(sem.truth == syn.truth, f.label + " semantic check agrees");
  }
}

Term witness_predicate(const std::string& witness, const Signature& sig) {
  std::string text = witness;
  for (std::size_t p; (p = text.find(", ")) != std::string::npos;) text.replace(p, 2, " & ");
  return parse_predicate(text, sig);
}

Signature joint_signature(const RefinementModel& r) {
  Signature sig;
  for (const auto& set : r.concrete.signature.sets()) sig.add_set(set);
  for (const auto& v : joint_variables(r)) sig.add_variable(v);
  return sig;
}

void projection_lemma(Report& r) {
  RefinementModel ref = refinement("demoney_r1.ref");
  auto lemma = check_projection_lemma(generate(ref.abstraction), generate_projected(ref), ref);
  r.expect(!lemma.empty(), "Demoney_R1 has lemma obligations");
  for (const auto& e : lemma) r.expect(e.po.outcome == Outcome::Valid, e.po.id + " is Valid");
  r.note("Demoney_R1: " + std::to_string(lemma.size()) + " lemma obligations");

  RefinementModel broken = refinement("lamp_broken.ref");
  Slts abs = generate(broken.abstraction);
  Slts proj = generate_projected(broken);
  std::vector<LemmaEntry> bad;
  for (const auto& e : check_projection_lemma(abs, proj, broken)) {
    if (e.po.outcome != Outcome::Valid) bad.push_back(e);
  }
  r.expect(bad.size() == 1, "Lamp_Broken has exactly one failing lemma obligation");
  if (bad.size() != 1) return;
  const auto& e = bad[0];
  r.expect(e.po.outcome == Outcome::Invalid, e.po.id + " is Invalid");
  r.note(e.po.id + " witness [" + e.po.witness + "]");
  if (e.po.witness.empty()) {
    r.expect(false, "witness present");
    return;
  }
  Term w = witness_predicate(e.po.witness, joint_signature(broken));
  const auto* concrete = proj.find_transition(e.source, e.event, e.target);
  const auto* abstract = abs.find_transition(e.abstract_source, e.event, e.abstract_target);
  Term d = abstract ? abstract->d : Term::truth(false);
  Term counter = Term::conj({w, broken.gluing(), broken.abstraction.invariant,
                             abs.find_state(e.abstract_source)->interpretation, proj.find_state(e.source)->interpretation,
                             concrete ? concrete->d : Term::truth(false), Term::negate(d)});
  r.expect(decide({"recheck", counter, PoKind::Satisfiability, joint_variables(broken)}, 1'000'000).outcome ==
               Outcome::Valid,
           "witness satisfies the hypotheses and falsifies D");
}

void refinement_pos(Report& r) {
  auto r1 = gen_refinement_pos(refinement("demoney_r1.ref"));
  for (const auto& p : r1) r.expect(p.outcome == Outcome::Valid, p.id + " is Valid");
  r.note("Demoney_R1: " + std::to_string(r1.size()) + " refinement obligations");
  std::vector<std::string> invalid;
  std::size_t unknown = 0;
  for (const auto& p : gen_refinement_pos(refinement("lamp_dim.ref"))) {
    if (p.outcome == Outcome::Invalid) invalid.push_back(p.id);
    if (p.outcome == Outcome::Unknown) ++unknown;
  }
  r.expect(invalid == std::vector<std::string>{"Lamp_Dim:ref:variant:Tick"}, "Lamp_Dim fails only its variant decrease");
  r.expect(unknown == 0, "Lamp_Dim obligations are all decided");
}

void property_suite(Report& r) {
  std::vector<MachineModel> corpus;
  for (const char* n : {"demoney.mch", "lamp.mch", "kinds.mch"}) corpus.push_back(machine(n));
  for (const char* n : {"demoney_r1.ref", "demoney_id.ref", "lamp_broken.ref", "lamp_dim.ref", "lamp_id.ref"}) {
    corpus.push_back(concrete_view(refinement(n)));
  }
  std::mt19937 rng(20240611);
  std::size_t checks = 0;
  std::size_t failures = 0;
  for (const auto& m : corpus) {
    const auto& vars = m.signature.variables();
    auto states = invariant_states(Term::truth(true), vars);
    std::vector<Term> posts = m.assertions;
    posts.push_back(m.invariant);
    posts.push_back(Term::truth(true));
    posts.push_back(Term::truth(false));
    for (const auto& v : vars) {
      for (const auto& x : domain_values(v.domain)) {
        posts.push_back(parse_predicate(v.name + " = " + m.signature.value_name(x, v.type), m.signature));
      }
    }
    std::vector<std::pair<std::string, const Subst*>> bodies{{"INITIALISATION", &m.initialisation}};
    for (const auto& e : m.events) bodies.push_back({e.name, &e.body});
    for (const auto& [name, body] : bodies) {
      Term feasible = fis(*body);
      Term rel = prd(*body, vars);
      for (const auto& s : states) {
        Valuation v = to_valuation(s, vars);
        auto next = execute(*body, s, vars);
        ++checks;
        if (evaluate(feasible, v) == next.empty()) {
          ++failures;
          r.expect(false, m.name + "." + name + ": fis disagrees with successor non-emptiness");
        }
        std::set<State> reached(next.begin(), next.end());
        for (const auto& t : states) {
          Valuation vv = v;
          for (std::size_t i = 0; i < vars.size(); ++i) vv.push(VarKey{vars[i].name, true}, vars[i].type, t[i]);
          ++checks;
          if (evaluate(rel, vv) != reached.contains(t)) {
            ++failures;
            r.expect(false, m.name + "." + name + ": before-after predicate disagrees with execution");
          }
        }
        for (const auto& post : posts) {
          bool all = true;
          bool some = false;
          for (const auto& x : next) {
            bool holds = evaluate(post, to_valuation(x, vars));
            all = all && holds;
            some = some || holds;
          }
          checks += 3;
          if (evaluate(wp(*body, post), v) != all) {
            ++failures;
            r.expect(false, m.name + "." + name + ": wp disagrees with execution on " + to_text(post));
          }
          if (evaluate(conjugate_wp(*body, post), v) != some) {
            ++failures;
            r.expect(false, m.name + "." + name + ": conjugate wp disagrees with execution on " + to_text(post));
          }
          if (evaluate(Term::negate(wp(*body, Term::negate(post))), v) != some) {
            ++failures;
            r.expect(false, m.name + "." + name + ": duality fails on " + to_text(post));
          }
        }
      }
    }
  }
  r.note(std::to_string(checks) + " valuation checks, " + std::to_string(failures) + " failures");
  MachineModel d = machine("demoney.mch");
  r.expect(check_completeness(d).outcome == Outcome::Valid, "Demoney completeness is Valid");
  RefinementModel ref = refinement("demoney_r1.ref");
  r.expect(check_completeness(concrete_view(ref)).outcome == Outcome::Valid, "Demoney_R1 completeness is Valid");
}

bool by_default(const SltsTransition& t) {
  return t.d_provenance == DProvenance::GuardByDefault || t.a_provenance == AProvenance::ReachByDefault;
}

void degradation(Report& r) {
  GenOptions starved;
  starved.budget = 1;
  MachineModel d = machine("demoney.mch");
  RefinementModel ref = refinement("demoney_r1.ref");
  MachineModel view = concrete_view(ref);
  struct Subject {
    std::string name;
    const MachineModel* m;
    Slts full;
    Slts slts;
    std::size_t depth;
  };
  std::vector<Subject> subjects{{"Demoney", &d, generate(d), generate(d, starved), 4},
                                {"Demoney_R1", &view, generate_projected(ref), generate_projected(ref, starved), 3}};
  for (const auto& s : subjects) {
    for (const auto& t : s.slts.transitions) {
      r.expect(by_default(t), s.name + " " + t.source + " --" + t.event + "--> " + t.target + " carries ByDefault");
    }
    r.expect(!s.slts.minimal && !is_minimal(s.slts), s.name + " is not minimal");
    r.expect(traces_included_in_paths(*s.m, s.slts, s.depth), s.name + " traces are included in paths");
    r.note(s.name + ": " + std::to_string(s.slts.transitions.size()) + " transitions at budget 1, " +
           std::to_string(s.full.transitions.size()) + " at full budget");
  }
  const Subject& r1 = subjects[1];
  int needing_minimality = 0;
  for (const auto& f : atomicity(r1.slts)) {
    CheckResult full = check_syntactic(f, r1.full, 1'000'000);
    CheckResult starved_check = check_syntactic(f, r1.slts, 1'000'000);
    CheckResult sem = check_semantic(f, view, 1'000'000);
    r.note(f.label + " at budget 1: " + to_string(starved_check.truth) + " " + starved_check.citation() +
           " (full budget " + to_string(full.truth) + " " + full.citation() + ")");
    bool conclusive = starved_check.truth != Truth::Inconclusive;
    if (full.minimal_lemma) needing_minimality += conclusive ? 0 : 1;
    r.expect(!(conclusive && starved_check.minimal_lemma), f.label + " does not use a minimal-SLTS case");
    r.expect(!conclusive || starved_check.truth == sem.truth, f.label + " is never wrong");
  }
  r.expect(needing_minimality > 0, "some check needing minimality at full budget turns Inconclusive");
}

struct Criterion {
  int number;
  std::string title;
  std::function<void(Report&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "Demoney SLTS fidelity", demoney_fidelity},
      {2, "Demoney_R1 projected hierarchy", refinement_fidelity},
      {3, "trace/path equality and transition mutation", trace_equality},
      {4, "atomicity formulas and lemma citations", security},
      {5, "transition projection lemma", projection_lemma},
      {6, "refinement obligations", refinement_pos},
      {7, "transformer property suite and completeness", property_suite},
      {8, "non-minimal degradation at budget 1", degradation},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  bool verbose = false;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 8));
  app.add_option("--fixtures", g_fixtures, "fixture directory")->check(CLI::ExistingDirectory);
  app.add_flag("-v,--verbose", verbose, "print notes");
  CLI11_PARSE(app, argc, argv);

  bool all_passed = true;
  for (const auto& c : criteria()) {
    if (only != 0 && c.number != only) continue;
    Report r;
    try {
      c.run(r);
    } catch (const std::exception& e) {
      r.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << c.number << ' ' << (r.passed() ? "PASS" : "FAIL") << ": " << c.title << '\n';
    if (verbose || !r.passed()) {
      for (const auto& n : r.notes()) std::cout << "  " << n << '\n';
    }
    for (const auto& f : r.failures()) std::cout << "  failed: " << f << '\n';
    all_passed = all_passed && r.passed();
  }
  return all_passed ? 0 : 1;
}
