#include "doctest.h"
#include "support.hpp"

using namespace eventb;
using testing::fixture;

TEST_CASE("appendix machine parses with its assertion states") {
  auto m = testing::machine("demoney.mch");
  CHECK(m.name == "Demoney");
  REQUIRE(m.signature.variables().size() == 2);
  CHECK(m.signature.variables()[0].name == "Error");
  REQUIRE(m.assertions.size() == 2);
  CHECK(to_text(m.assertions[0]) == "Error=FALSE");
  CHECK(to_text(m.assertions[1]) == "Error=TRUE");
  REQUIRE(m.events.size() == 4);
  CHECK(m.events[0].name == "Reset");
  CHECK(m.find_event("CompleteTransaction") != nullptr);
  CHECK(m.find_event("Nope") == nullptr);
}

TEST_CASE("refinement inlines its abstraction and decompositions") {
  auto r = testing::refinement("demoney_r1.ref");
  CHECK(r.name() == "Demoney_R1");
  CHECK(r.refines() == "Demoney");
  CHECK(r.concrete.assertions.size() == 4);
  REQUIRE(r.decompositions.size() == 2);
  CHECK(r.decompositions[0].substates == std::vector<std::size_t>{0, 1});
  CHECK(r.new_events.empty());
  CHECK(!r.variant);
}

TEST_CASE("clashing abstract variables are renamed and glued") {
  auto r = testing::refinement("demoney_id.ref");
  REQUIRE(!r.renamed.empty());
  for (const auto& [from, to] : r.renamed) {
    CHECK(to == "abs_" + from);
    CHECK(r.abstraction.signature.find_variable(to) != nullptr);
  }
  CHECK(to_text(r.gluing()).find("abs_Error=Error") != std::string::npos);
}

TEST_CASE("new events need a variant") {
  auto r = testing::refinement("lamp_dim.ref");
  CHECK(r.new_events == std::vector<std::string>{"Tick"});
  REQUIRE(r.variant);
  CHECK(to_text(*r.variant) == "level");
}

TEST_CASE("printing and reparsing every fixture is stable") {
  for (const auto& name : testing::machine_fixtures()) {
    CAPTURE(name);
    auto m = testing::machine(name);
    std::string once = to_source(m);
    auto again = parse_machine(once);
    CHECK(to_source(again) == once);
    CHECK(again.invariant == m.invariant);
    for (std::size_t i = 0; i < m.events.size(); ++i) CHECK(again.events[i].body == m.events[i].body);
  }
  for (const auto& name : testing::refinement_fixtures()) {
    CAPTURE(name);
    auto r = testing::refinement(name);
    std::string once = to_source(r);
    auto again = parse_refinement(once, read_file(fixture(r.refines() == "Demoney" ? "demoney.mch" : "lamp.mch")));
    CHECK(to_source(again) == once);
  }
}

TEST_CASE("predicate round trip in both print styles") {
  auto m = testing::machine("kinds.mch");
  for (const char* text : {"c = Red & (n < 2 or b = TRUE)", "not(n = 0) => b = bool(c = Blue)",
                           "!x.(x : 0..3 => x /= n or c = Green)", "#y.(y : Color & y = c)", "n + 1 <= 3 - n",
                           "(b = TRUE <=> n >= 1) & c : {Red, Blue}"}) {
    CAPTURE(text);
    Term t = parse_predicate(text, m.signature);
    for (auto style : {PrintStyle::Human, PrintStyle::Machine}) {
      std::string printed = to_text(t, style);
      CHECK(to_text(parse_predicate(printed, m.signature), style) == printed);
    }
  }
}

TEST_CASE("primed variables in both spellings") {
  auto m = testing::machine("lamp.mch");
  Term a = parse_predicate("on' = TRUE", m.signature);
  Term b = parse_predicate("on$1 = TRUE", m.signature);
  CHECK(a == b);
  CHECK(to_text(a) == "on'=TRUE");
  CHECK(to_text(a, PrintStyle::Machine) == "on$1=TRUE");
}

TEST_CASE("conventional precedence") {
  auto m = testing::machine("lamp.mch");
  Term t = parse_predicate("on = TRUE or on = FALSE & on = TRUE", m.signature);
  CHECK(t.op() == Op::Or);
  Term u = parse_predicate("on = TRUE & on = FALSE => on = TRUE <=> on = FALSE", m.signature);
  CHECK(u.op() == Op::Equiv);
  CHECK(u.arg(0).op() == Op::Implies);
}

TEST_CASE("INV stands for the invariant when given") {
  auto m = testing::machine("demoney.mch");
  CHECK(parse_predicate("INV", m.signature, &m.invariant) == m.invariant);
  CHECK_THROWS_AS(parse_predicate("INV", m.signature), Error);
}

namespace {

Error::Kind error_kind(const std::string& src) {
  try {
    parse_machine(src);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return Error::Kind::Io;
}

}  // namespace

TEST_CASE("malformed sources report the right error kind") {
  const std::string head = "MACHINE M\nVARIABLES x\nINVARIANT x : BOOL\nASSERTIONS x = TRUE or x = FALSE\n";
  CHECK(error_kind(head + "INITIALISATION x := TRUE\nEVENTS e = x := y\nEND") == Error::Kind::UnknownIdentifier);
  CHECK(error_kind(head + "INITIALISATION x := TRUE\nEVENTS e = x := 3\nEND") == Error::Kind::DomainMismatch);
  CHECK(error_kind(head + "INITIALISATION x := TRUE || x := FALSE\nEND") == Error::Kind::ParallelClash);
  CHECK(error_kind(head + "INITIALISATION x := TRUE\nEVENTS e = SELECT x = TRUE THEN x := FALSE\nEND") ==
        Error::Kind::Syntax);
  CHECK(error_kind("MACHINE M\nDEFINITIONS d == 1\nEND") == Error::Kind::Syntax);
  CHECK(error_kind("MACHINE M\nVARIABLES x\nINVARIANT x : NAT\nINITIALISATION x := 0\nEND") ==
        Error::Kind::NonFinite);
  CHECK(error_kind("MACHINE M\nVARIABLES x\nINVARIANT x = @\nEND") == Error::Kind::Lexical);
}

TEST_CASE("errors carry positions") {
  try {
    parse_machine("MACHINE M\nVARIABLES x\nINVARIANT x : BOOL &\n  y = TRUE\nEND");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.line() == 4);
    CHECK(e.column() == 3);
  }
}

TEST_CASE("refinement without its abstraction is an input error") {
  CHECK_THROWS_AS(parse_component(read_file(fixture("demoney_r1.ref"))), Error);
  CHECK_THROWS_AS(load_component(fixture("missing.mch")), Error);
}
