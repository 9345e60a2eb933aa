#include "doctest.h"
#include "eventb/secprops.hpp"
#include "support.hpp"

using namespace eventb;

namespace {

struct Subject {
  MachineModel model;
  Slts slts;
};

Subject demoney() {
  auto m = testing::machine("demoney.mch");
  return {m, generate(m)};
}

Subject demoney_r1(std::uint64_t budget = 1'000'000) {
  auto r = testing::refinement("demoney_r1.ref");
  GenOptions o;
  o.budget = budget;
  return {concrete_view(r), generate_projected(r, o)};
}

std::vector<std::string> event_names(const MachineModel& m) {
  std::vector<std::string> out;
  for (const auto& e : m.events) out.push_back(e.name);
  return out;
}

std::vector<PropertyFormula> parse(const std::string& text, const MachineModel& m) {
  return parse_properties(text, m.signature, m.invariant, event_names(m));
}

PropertyFormula one(const std::string& text, const MachineModel& m) {
  auto fs = parse(text, m);
  REQUIRE(fs.size() == 1);
  return fs[0];
}

// Disjunctions of the non-initial state predicates, one per nonempty subset.
std::vector<Term> state_unions(const Slts& s) {
  std::vector<Term> preds;
  for (const auto& q : s.states) {
    if (!q.initial) preds.push_back(q.predicate);
  }
  std::vector<Term> out;
  for (unsigned mask = 1; mask < (1u << preds.size()); ++mask) {
    std::vector<Term> parts;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (mask & (1u << i)) parts.push_back(preds[i]);
    }
    out.push_back(Term::disj(parts));
  }
  return out;
}

}  // namespace

TEST_CASE("property file syntax") {
  auto r1 = demoney_r1();
  auto fs = parse(read_file(testing::fixture("atomicity.props")), r1.model);
  REQUIRE(fs.size() == 5);
  CHECK(fs[0].label == "F1");
  std::vector<std::size_t> sizes;
  for (const auto& f : fs) sizes.push_back(f.atoms.size());
  CHECK(sizes == std::vector<std::size_t>{1, 1, 2, 3, 2});
  CHECK(fs[2].atoms[0].event == "GetData");
  CHECK(fs[2].atoms[1].event == "InitializeTransaction");
  CHECK(fs[4].atoms[0].negated);
  CHECK(fs[0].atoms[0].p1 == r1.model.invariant);
  CHECK(fs[0].atoms[0].to_text() == "Crossable(" + to_text(r1.model.invariant) +
                                        ", InitializeTransaction, CurTransaction/=None)");

  auto d = demoney();
  auto g = parse("enabled true GetData\n\n# comment\nnot alwaysenabled (Error = TRUE) Reset\n", d.model);
  REQUIRE(g.size() == 2);
  CHECK(g[0].label == "L1");
  CHECK(g[1].label == "L4");
  CHECK(g[1].atoms[0].negated);
  CHECK(g[1].atoms[0].kind == PropertyKind::AlwaysEnabled);
  CHECK(parse("ENABLED INV * except Reset", d.model)[0].atoms.size() == 3);

  auto kind_of = [&](const std::string& text) {
    try {
      parse(text, d.model);
    } catch (const Error& e) {
      return e.kind();
    }
    return Error::Kind::Io;
  };
  CHECK(kind_of("ENABLED INV Nope") == Error::Kind::UnknownIdentifier);
  CHECK(kind_of("ENABLED INV * except Nope") == Error::Kind::UnknownIdentifier);
  CHECK(kind_of("CROSSABLE INV Reset") == Error::Kind::Syntax);
  CHECK(kind_of("ENABLED INV Reset -> (Error = TRUE)") == Error::Kind::Syntax);
  CHECK(kind_of("REACHABLE INV Reset") == Error::Kind::Syntax);
  CHECK(kind_of("ENABLED (Error = TRUE Reset") == Error::Kind::Syntax);
  CHECK(kind_of("ENABLED INV Reset extra") == Error::Kind::Syntax);
  CHECK(kind_of("ENABLED (Bogus = TRUE) Reset") == Error::Kind::UnknownIdentifier);
}

TEST_CASE("atomicity formulas hold syntactically with the expected lemma cases") {
  auto r1 = demoney_r1();
  auto fs = parse(read_file(testing::fixture("atomicity.props")), r1.model);
  std::vector<std::string> citations;
  for (const auto& f : fs) {
    CAPTURE(f.label);
    CheckResult syn = check_syntactic(f, r1.slts, 1'000'000);
    CheckResult sem = check_semantic(f, r1.model, 1'000'000);
    CHECK(syn.truth == Truth::True);
    CHECK(sem.truth == Truth::True);
    CHECK(syn.method == Method::Syntactic);
    CHECK(!syn.justification.empty());
    citations.push_back(syn.citation());
  }
  CHECK(citations == std::vector<std::string>{"case 5 (minimal)", "case 7", "case 7", "case 7", "cases 5,6 (minimal)"});
}

TEST_CASE("semantic examples") {
  auto d = demoney();
  CHECK(check_semantic(one("ALWAYSENABLED INV GetData", d.model), d.model, 1000).truth == Truth::True);
  CHECK(check_semantic(one("ENABLED false GetData", d.model), d.model, 1000).truth == Truth::False);
  auto vac = check_semantic(one("ALWAYSCROSSABLE false GetData -> (Error = TRUE)", d.model), d.model, 1000);
  CHECK(vac.truth == Truth::True);
  CHECK(!vac.warnings.empty());
  auto r1 = demoney_r1();
  CHECK(check_semantic(one("CROSSABLE INV InitializeTransaction -> (CurTransaction /= None)", r1.model), r1.model,
                       1'000'000)
            .truth == Truth::True);
  CHECK(check_semantic(one("ENABLED INV GetData", r1.model), r1.model, 1).truth == Truth::Inconclusive);
  CHECK(check_semantic(one("NOT ENABLED INV GetData", d.model), d.model, 1000).truth == Truth::False);
}

TEST_CASE("state-union recognition") {
  auto d = demoney();
  auto both = recognize_union(parse_predicate("Error = FALSE or Error = TRUE", d.model.signature), d.slts, 1000);
  REQUIRE(both);
  CHECK(*both == std::vector<std::string>{"E1", "E2"});
  CHECK(*recognize_union(d.model.invariant, d.slts, 1000) == std::vector<std::string>{"E1", "E2"});
  CHECK(!recognize_union(parse_predicate("EngagedTrans = TRUE", d.model.signature), d.slts, 1000));
  CHECK(recognize_union(Term::truth(false), d.slts, 1000)->empty());

  auto r1 = demoney_r1();
  auto ok = recognize_union(parse_predicate("StatusWord = ISO_Ok", r1.model.signature), r1.slts, 1'000'000);
  REQUIRE(ok);
  CHECK(*ok == std::vector<std::string>{"E3", "E4"});
  CHECK(!recognize_union(parse_predicate("StatusWord = ISO_Ok", r1.model.signature), r1.slts, 1));
}

TEST_CASE("syntactic and semantic checks never contradict each other") {
  std::size_t conclusive = 0;
  std::size_t total = 0;
  for (auto subject : {demoney(), demoney_r1()}) {
    auto& [m, s] = subject;
    REQUIRE(s.minimal);
    auto unions = state_unions(s);
    for (const auto& e : m.events) {
      for (const auto& p1 : unions) {
        for (auto kind : {PropertyKind::Enabled, PropertyKind::AlwaysEnabled}) {
          PropertyFormula f{"x", "", {{false, kind, p1, e.name, std::nullopt}}};
          CheckResult syn = check_syntactic(f, s, 1'000'000);
          CheckResult sem = check_semantic(f, m, 1'000'000);
          CAPTURE(f.atoms[0].to_text());
          REQUIRE(sem.truth != Truth::Inconclusive);
          if (syn.truth != Truth::Inconclusive) {
            CHECK(syn.truth == sem.truth);
            ++conclusive;
          }
          ++total;
        }
        for (const auto& p2 : unions) {
          for (auto kind : {PropertyKind::Crossable, PropertyKind::AlwaysCrossable}) {
            PropertyFormula f{"x", "", {{false, kind, p1, e.name, p2}}};
            CheckResult syn = check_syntactic(f, s, 1'000'000);
            CheckResult sem = check_semantic(f, m, 1'000'000);
            CAPTURE(f.atoms[0].to_text());
            REQUIRE(sem.truth != Truth::Inconclusive);
            if (syn.truth != Truth::Inconclusive) {
              CHECK(syn.truth == sem.truth);
              ++conclusive;
            }
            ++total;
            if (kind == PropertyKind::Crossable && sem.truth == Truth::True) {
              PropertyFormula en{"y", "", {{false, PropertyKind::Enabled, p1, e.name, std::nullopt}}};
              CHECK(check_semantic(en, m, 1'000'000).truth == Truth::True);
            }
          }
        }
      }
    }
  }
  MESSAGE("conclusive syntactic results: " << conclusive << " of " << total);
  CHECK(conclusive * 4 >= total * 3);
}

TEST_CASE("general-case verdicts survive on a budget-starved SLTS") {
  auto full = demoney_r1();
  auto starved = demoney_r1(1);
  REQUIRE(!starved.slts.minimal);
  auto unions = state_unions(full.slts);
  std::size_t inconclusive = 0;
  for (const auto& e : full.model.events) {
    for (const auto& p1 : unions) {
      for (const auto& p2 : unions) {
        for (auto kind : {PropertyKind::Crossable, PropertyKind::AlwaysCrossable}) {
          PropertyFormula f{"x", "", {{false, kind, p1, e.name, p2}}};
          CheckResult syn = check_syntactic(f, starved.slts, 1'000'000);
          CAPTURE(f.atoms[0].to_text());
          CHECK(!syn.minimal_lemma);
          if (syn.truth == Truth::Inconclusive) {
            ++inconclusive;
            continue;
          }
          CHECK(syn.truth == check_semantic(f, full.model, 1'000'000).truth);
        }
      }
    }
  }
  CHECK(inconclusive > 0);
  auto fs = parse(read_file(testing::fixture("atomicity.props")), full.model);
  for (std::size_t i = 0; i < 3; ++i) CHECK(check_syntactic(fs[i], starved.slts, 1'000'000).truth == Truth::Inconclusive);
}

TEST_CASE("vacuous predicates") {
  for (auto subject : {demoney(), demoney_r1()}) {
    auto& [m, s] = subject;
    for (const auto& e : m.events) {
      Term p2 = m.assertions[0];
      auto check_both = [&](PropertyKind k, Truth expected) {
        std::optional<Term> target;
        if (has_target(k)) target = p2;
        PropertyFormula f{"v", "", {{false, k, Term::truth(false), e.name, target}}};
        CHECK(check_semantic(f, m, 1'000'000).truth == expected);
        CHECK(check_syntactic(f, s, 1'000'000).truth == expected);
      };
      check_both(PropertyKind::Enabled, Truth::False);
      check_both(PropertyKind::Crossable, Truth::False);
      check_both(PropertyKind::AlwaysEnabled, Truth::True);
      check_both(PropertyKind::AlwaysCrossable, Truth::True);
    }
  }
}

TEST_CASE("weakening follows the implication rules") {
  auto d = demoney();
  const auto& sig = d.model.signature;
  const Term& inv = d.model.invariant;
  PropertyAtom en = one("ENABLED (Error = TRUE) GetData", d.model).atoms[0];
  WeakenResult w = weaken(en, Position::P1, inv, sig, inv, 1000);
  CHECK(w.atom.p1 == inv);
  CHECK(w.po.outcome == Outcome::Valid);
  CHECK(check_semantic({"w", "", {w.atom}}, d.model, 1000).truth == Truth::True);
  CHECK_THROWS_AS(weaken(w.atom, Position::P1, parse_predicate("Error = TRUE", sig), sig, inv, 1000), Error);

  PropertyAtom ac = one("ALWAYSCROSSABLE (Error = TRUE) Reset -> (Error = FALSE & EngagedTrans = FALSE)", d.model)
                        .atoms[0];
  WeakenResult w2 = weaken(ac, Position::P2, parse_predicate("Error = FALSE", sig), sig, inv, 1000);
  CHECK(to_text(*w2.atom.p2) == "Error=FALSE");
  CHECK_THROWS_AS(weaken(ac, Position::P1, inv, sig, inv, 1000), Error);
  CHECK(weaken(ac, Position::P1, Term::truth(false), sig, inv, 1000).atom.p1.is_false());
  CHECK_THROWS_AS(weaken(en, Position::P2, inv, sig, inv, 1000), Error);

  PropertyAtom neg = en;
  neg.negated = true;
  CHECK_THROWS_AS(weaken(neg, Position::P1, inv, sig, inv, 1000), Error);
  CHECK(weaken(neg, Position::P1, Term::truth(false), sig, inv, 1000).atom.p1.is_false());
}

TEST_CASE("builtin schemas") {
  auto d = demoney();
  auto react = reactivity_schema(d.model);
  REQUIRE(react.size() == 4);
  for (const auto& f : react) {
    CHECK(f.atoms[0].kind == PropertyKind::AlwaysEnabled);
    CHECK(check_semantic(f, d.model, 1000).truth == Truth::True);
    CheckResult syn = check_syntactic(f, d.slts, 1000);
    CHECK(syn.truth == Truth::True);
    CHECK(syn.citation() == "case 3");
  }

  auto r1 = demoney_r1();
  Term p = parse_predicate("CurTransaction /= None", r1.model.signature);
  auto uni = unicity_schema(r1.model, p, "InitializeTransaction");
  REQUIRE(uni.size() == 3);
  auto f4 = parse(read_file(testing::fixture("atomicity.props")), r1.model)[3];
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(uni[i].atoms[0].event == f4.atoms[i].event);
    CHECK(check_semantic(uni[i], r1.model, 1'000'000).truth == Truth::True);
    CHECK(check_syntactic(uni[i], r1.slts, 1'000'000).truth == Truth::True);
  }
  CHECK_THROWS_AS(unicity_schema(r1.model, p, "Nope"), Error);

  auto empty = parse_machine("MACHINE E\nVARIABLES x\nINVARIANT x : BOOL\nASSERTIONS x = TRUE\n"
                             "INITIALISATION x := TRUE\nEND");
  CHECK(reactivity_schema(empty).empty());
}
