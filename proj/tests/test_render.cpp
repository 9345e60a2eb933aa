#include "doctest.h"
#include "eventb/render.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace eventb;

namespace {

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("Demoney diagram") {
  Slts s = generate(testing::machine("demoney.mch"));
  std::string dot = to_dot(s);
  CHECK(dot.starts_with("digraph \"Demoney\" {\n"));
  CHECK(contains(dot, "  \"Init\" [shape=point];\n"));
  CHECK(contains(dot, "  \"Error=TRUE\" -> \"Error=FALSE\" [label=\"[][]GetData\"];\n"));
  CHECK(contains(dot, "  \"Error=FALSE\" -> \"Error=TRUE\" [label=\"[][G]GetData\"];\n"));
  CHECK(!contains(dot, "subgraph"));
  CHECK(dot == to_dot(generate(testing::machine("demoney.mch"))));

  RenderOptions verbose;
  verbose.style = LabelStyle::Verbose;
  verbose.show_provenance = true;
  std::string v = to_dot(s, verbose);
  CHECK(contains(v, "[][G:ReachByProof]GetData\\nD: true\\nA: EngagedTrans=TRUE"));
}

TEST_CASE("Demoney_R1 clusters") {
  Slts s = generate_projected(testing::refinement("demoney_r1.ref"));
  std::string dot = to_dot(s);
  CHECK(contains(dot, "  subgraph \"cluster_0\" {\n    label=\"Error=FALSE\";\n"
                      "    \"StatusWord=ISO_Ok & CurTransaction/=None\";\n"
                      "    \"StatusWord=ISO_Ok & CurTransaction=None\";\n  }\n"));
  CHECK(contains(dot, "  subgraph \"cluster_1\" {\n    label=\"Error=TRUE\";\n"));
  CHECK(contains(dot, "\"StatusWord=ISO_Ok & CurTransaction/=None\" -> \"StatusWord=ISO_Ok & CurTransaction=None\" "
                      "[label=\"[][]CompleteTransaction\"];"));
  RenderOptions flat;
  flat.cluster_hierarchy = false;
  CHECK(!contains(to_dot(s, flat), "subgraph"));
}

TEST_CASE("Init-only diagram") {
  Slts s;
  s.machine = "Empty";
  s.states.push_back({kInitState, kInitState, Term::truth(true), Term::truth(true), true, {}});
  CHECK(to_dot(s) == "digraph \"Empty\" {\n  rankdir=LR;\n  node [shape=ellipse];\n  \"Init\" [shape=point];\n}\n");
}

TEST_CASE("structured dump content") {
  Slts s = generate(testing::machine("demoney.mch"));
  auto j = nlohmann::json::parse(to_structured(s));
  CHECK(j["version"] == kDumpVersion);
  CHECK(j["format"] == "slts");
  CHECK(j["states"].size() == 3);
  CHECK(j["minimal"] == true);
  CHECK(j["pos"].size() == 48);
  CHECK(j["transitions"][0].contains("d_provenance"));
  CHECK(j["signature"]["variables"][0]["domain"] == "BOOL");

  GenOptions o;
  o.budget = 1;
  std::string starved = to_structured(generate(testing::machine("demoney.mch"), o));
  CHECK(contains(starved, "\"a_provenance\": \"ReachByDefault\""));
  CHECK(contains(starved, "\"minimal\": false"));
}

TEST_CASE("dump, reload, dump is byte-identical") {
  std::vector<Slts> all;
  for (const auto& n : testing::machine_fixtures()) all.push_back(generate(testing::machine(n)));
  for (const auto& n : testing::refinement_fixtures()) all.push_back(generate_projected(testing::refinement(n)));
  GenOptions o;
  o.budget = 1;
  all.push_back(generate(testing::machine("kinds.mch"), o));
  for (const auto& s : all) {
    CAPTURE(s.machine);
    std::string once = to_structured(s);
    Slts back = load_structured(once);
    CHECK(to_structured(back) == once);
    CHECK(to_dot(back) == to_dot(s));
    CHECK(back.transitions.size() == s.transitions.size());
    for (std::size_t i = 0; i < s.states.size(); ++i) CHECK(back.states[i].interpretation == s.states[i].interpretation);
  }
}

TEST_CASE("malformed dumps are rejected") {
  CHECK_THROWS_AS(load_structured("{"), Error);
  CHECK_THROWS_AS(load_structured("{\"format\": \"slts\"}"), Error);
  std::string good = to_structured(generate(testing::machine("lamp.mch")));
  std::string future = good;
  future.replace(future.find("\"version\": 1"), 12, "\"version\": 9");
  try {
    load_structured(future);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == Error::Kind::Semantic);
  }
  std::string bad = good;
  bad.replace(bad.find("\"ProvedTrue\""), 12, "\"Perhaps\"");
  CHECK_THROWS_AS(load_structured(bad), Error);
}
