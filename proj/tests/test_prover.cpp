#include "doctest.h"
#include "support.hpp"

using namespace eventb;

TEST_CASE("verdicts are sound against brute force") {
  std::mt19937 rng(7);
  for (const auto& m : testing::corpus()) {
    const auto& vars = m.signature.variables();
    auto states = testing::all_states(m);
    for (int i = 0; i < 40; ++i) {
      Term p = testing::random_predicate(rng, m.signature, 4);
      std::size_t holds = 0;
      for (const auto& s : states) holds += evaluate(p, to_valuation(s, vars)) ? 1 : 0;
      CAPTURE(to_text(p));
      Verdict valid = decide({"v", p, PoKind::Validity, vars}, 1'000'000);
      CHECK(valid.outcome == (holds == states.size() ? Outcome::Valid : Outcome::Invalid));
      if (valid.outcome == Outcome::Invalid) {
        REQUIRE(valid.witness);
        CHECK(!evaluate(p, *valid.witness));
      }
      Verdict sat = decide({"s", p, PoKind::Satisfiability, vars}, 1'000'000);
      CHECK(sat.outcome == (holds > 0 ? Outcome::Valid : Outcome::Invalid));
      if (sat.outcome == Outcome::Valid) {
        REQUIRE(sat.witness);
        CHECK(evaluate(p, *sat.witness));
      }
    }
  }
}

TEST_CASE("budget below the space size gives Unknown, above it a stable verdict") {
  auto m = testing::machine("kinds.mch");
  const auto& vars = m.signature.variables();
  CHECK(space_size(vars, 1'000'000) == 24);
  CHECK(space_size(vars, 10) == 11);
  Term p = parse_predicate("n = 0 or c /= Red", m.signature);
  for (std::uint64_t b = 1; b < 24; ++b) CHECK(decide({"p", p, PoKind::Validity, vars}, b).outcome == Outcome::Unknown);
  Verdict ref = decide({"p", p, PoKind::Validity, vars}, 24);
  CHECK(ref.outcome == Outcome::Invalid);
  for (std::uint64_t b : {25ULL, 100ULL, 1'000'000ULL}) {
    Verdict v = decide({"p", p, PoKind::Validity, vars}, b);
    CHECK(v.outcome == ref.outcome);
    CHECK(*v.witness == *ref.witness);
  }
}

TEST_CASE("witnesses follow first-variable-most-significant order") {
  auto m = testing::machine("demoney.mch");
  Verdict v = decide({"x", parse_predicate("Error = TRUE", m.signature), PoKind::Validity, m.signature.variables()},
                     100);
  REQUIRE(v.witness);
  CHECK(v.witness->to_string(m.signature) == "Error=FALSE, EngagedTrans=FALSE");
  CHECK(v.examined == 1);
  Verdict s = decide({"y", parse_predicate("EngagedTrans = TRUE & Error = TRUE", m.signature),
                      PoKind::Satisfiability, m.signature.variables()},
                     100);
  REQUIRE(s.witness);
  CHECK(s.witness->to_string(m.signature) == "Error=TRUE, EngagedTrans=TRUE");
  CHECK(s.examined == 4);
}

TEST_CASE("quantifiers and arithmetic evaluate over their finite sets") {
  auto m = testing::machine("kinds.mch");
  const auto& vars = m.signature.variables();
  auto valid = [&](const char* text) {
    return decide({"q", parse_predicate(text, m.signature), PoKind::Validity, vars}, 1000).outcome;
  };
  CHECK(valid("#k.(k : 0..3 & k = n)") == Outcome::Valid);
  CHECK(valid("!k.(k : 0..3 => k <= n)") == Outcome::Invalid);
  CHECK(valid("n + 1 > n & n - 1 < n") == Outcome::Valid);
  CHECK(valid("#y.(y : Color & y /= c)") == Outcome::Valid);
  CHECK(valid("bool(n = 0) = TRUE <=> n = 0") == Outcome::Valid);
}

TEST_CASE("assumption files") {
  auto t = AssumptionTable::parse("# comment\nA:po1 VALID\n\nB:po2 invalid  # trailing\n");
  CHECK(t.size() == 2);
  CHECK(*t.find("A:po1") == Outcome::Valid);
  CHECK(*t.find("B:po2") == Outcome::Invalid);
  CHECK(!t.find("C"));
  CHECK_THROWS_AS(AssumptionTable::parse("A VALID extra\n"), Error);
  CHECK_THROWS_AS(AssumptionTable::parse("A MAYBE\n"), Error);
  CHECK_THROWS_AS(AssumptionTable::parse("A\n"), Error);
  CHECK_THROWS_AS(AssumptionTable::parse("A VALID\nA INVALID\n"), Error);
  CHECK_THROWS_AS(AssumptionTable::load(testing::fixture("absent.assume")), Error);

  auto m = testing::machine("lamp.mch");
  ProofObligation po{"A:po1", Term::truth(false), PoKind::Validity, m.signature.variables()};
  Verdict v = decide(po, 1, t);
  CHECK(v.outcome == Outcome::Valid);
  CHECK(v.assumed);
  CHECK(decide(po, 1000).outcome == Outcome::Invalid);
}

TEST_CASE("decisions are deterministic") {
  std::mt19937 rng(99);
  auto m = concrete_view(testing::refinement("demoney_r1.ref"));
  for (int i = 0; i < 20; ++i) {
    Term p = testing::random_predicate(rng, m.signature, 3);
    ProofObligation po{"d", p, PoKind::Validity, m.signature.variables()};
    Verdict a = decide(po, 1000);
    Verdict b = decide(po, 1000);
    CHECK(a.outcome == b.outcome);
    CHECK(a.examined == b.examined);
    CHECK(a.witness.has_value() == b.witness.has_value());
    if (a.witness) CHECK(*a.witness == *b.witness);
  }
}
