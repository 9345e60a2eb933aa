#include "eventb/render.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "eventb/parser.hpp"
#include "eventb/printer.hpp"
#include "json.hpp"

namespace eventb {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string part_label(bool is_true, const std::string& provenance, LabelStyle style) {
  if (is_true) return "[]";
  return style == LabelStyle::Compact ? "[G]" : "[G:" + provenance + "]";
}

std::string edge_label(const SltsTransition& t, const RenderOptions& opts) {
  std::string out = part_label(t.d_is_true(), to_string(t.d_provenance), opts.style) +
                    part_label(t.a_is_true(), to_string(t.a_provenance), opts.style) + t.event;
  if (opts.show_provenance) out += "\nD: " + to_text(t.d) + "\nA: " + to_text(t.a);
  return out;
}

}  // namespace

std::string to_dot(const Slts& s, const RenderOptions& opts) {
  std::ostringstream out;
  out << "digraph " << quote(s.machine) << " {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=ellipse];\n";
  std::vector<const SymbolicState*> states;
  for (const auto& q : s.states) states.push_back(&q);
  std::sort(states.begin(), states.end(), [](const SymbolicState* a, const SymbolicState* b) {
    if (a->initial != b->initial) return a->initial;
    return a->name < b->name;
  });
  std::map<std::string, std::string> cluster_of;  // state id -> super-state name
  if (opts.cluster_hierarchy) {
    for (const auto& sup : s.super_states) {
      for (const auto& id : sup.substates) cluster_of.emplace(id, sup.name);
    }
  }
  for (const auto* q : states) {
    if (q->initial) {
      out << "  " << quote(q->name) << " [shape=point];\n";
    } else if (!cluster_of.contains(q->id)) {
      out << "  " << quote(q->name) << ";\n";
    }
  }
  std::vector<const SuperState*> supers;
  for (const auto& sup : s.super_states) supers.push_back(&sup);
  std::sort(supers.begin(), supers.end(), [](const SuperState* a, const SuperState* b) { return a->name < b->name; });
  int k = 0;
  for (const auto* sup : supers) {
    if (!opts.cluster_hierarchy) break;
    out << "  subgraph " << quote("cluster_" + std::to_string(k++)) << " {\n";
    out << "    label=" << quote(sup->name) << ";\n";
    for (const auto* q : states) {
      auto it = cluster_of.find(q->id);
      if (it != cluster_of.end() && it->second == sup->name) out << "    " << quote(q->name) << ";\n";
    }
    out << "  }\n";
  }
  std::vector<const SltsTransition*> edges;
  for (const auto& t : s.transitions) edges.push_back(&t);
  std::sort(edges.begin(), edges.end(), [&](const SltsTransition* a, const SltsTransition* b) {
    auto key = [&](const SltsTransition* t) {
      return std::make_tuple(s.find_state(t->source)->name, t->event, s.find_state(t->target)->name);
    };
    return key(a) < key(b);
  });
  for (const auto* t : edges) {
    out << "  " << quote(s.find_state(t->source)->name) << " -> " << quote(s.find_state(t->target)->name)
        << " [label=" << quote(edge_label(*t, opts)) << "];\n";
  }
  out << "}\n";
  return out.str();
}

// ---- structured dump ------------------------------------------------------

using nlohmann::json;

namespace {

std::string machine_text(const Term& t) { return to_text(t, PrintStyle::Machine); }

std::string type_name(const Type& t) {
  switch (t.kind) {
    case Type::Kind::Bool:
      return "BOOL";
    case Type::Kind::Int:
      return "INT";
    case Type::Kind::Enum:
      return t.set;
  }
  return "?";
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(Error::Kind::Syntax, std::string("dump lacks field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Error::Kind::Syntax, std::string("dump field '") + key + "': " + e.what());
  }
}

const json& sub(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(Error::Kind::Syntax, std::string("dump lacks field '") + key + "'");
  return j.at(key);
}

Outcome parse_outcome(const std::string& s) {
  if (s == "VALID") return Outcome::Valid;
  if (s == "INVALID") return Outcome::Invalid;
  if (s == "UNKNOWN") return Outcome::Unknown;
  throw Error(Error::Kind::Syntax, "unknown outcome '" + s + "'");
}

PoKind parse_po_kind(const std::string& s) {
  if (s == to_string(PoKind::Validity)) return PoKind::Validity;
  if (s == to_string(PoKind::Satisfiability)) return PoKind::Satisfiability;
  throw Error(Error::Kind::Syntax, "unknown PO kind '" + s + "'");
}

Type parse_type(const std::string& s, const Signature& sig) {
  if (s == "BOOL") return Type::boolean();
  if (s == "INT") return Type::integer();
  if (!sig.find_set(s)) throw Error(Error::Kind::UnknownIdentifier, "unknown set '" + s + "' in dump");
  return Type::enumerated(s);
}

void collect_vars(const Term& t, std::map<std::string, Term>& out) {
  if (t.op() == Op::Var) out.emplace(t.name(), t);
  for (const auto& a : t.args()) collect_vars(a, out);
}

json variable_json(const std::string& name, const Type& type, const Term& domain) {
  return {{"name", name}, {"type", type_name(type)}, {"domain", machine_text(domain)}};
}

void load_variable(const json& v, Signature& into, const Signature& sets) {
  std::string name = field<std::string>(v, "name");
  Type type = parse_type(field<std::string>(v, "type"), sets);
  // Parse the domain as the right-hand side of a membership.
  Signature probe = into;
  Term placeholder = type.kind == Type::Kind::Bool   ? Term::bool_set()
                     : type.kind == Type::Kind::Enum ? sets.set_term(type.set)
                                                     : Term::interval(Term::integer(0), Term::integer(0));
  probe.add_variable({name, type, placeholder});
  Term m = parse_predicate(name + " : " + field<std::string>(v, "domain"), probe);
  if (m.op() != Op::In) throw Error(Error::Kind::Syntax, "bad domain for variable " + name);
  into.add_variable({name, type, m.arg(1)});
}

}  // namespace

std::string to_structured(const Slts& s) {
  json j;
  j["format"] = "slts";
  j["version"] = kDumpVersion;
  j["machine"] = s.machine;
  json sets = json::array();
  for (const auto& set : s.signature.sets()) sets.push_back({{"name", set.name}, {"elements", set.elements}});
  json vars = json::array();
  for (const auto& v : s.signature.variables()) {
    vars.push_back(variable_json(v.name, v.type, v.domain));
  }
  // Variables of super-state predicates outside the signature (abstract ones).
  std::map<std::string, Term> foreign;
  for (const auto& sup : s.super_states) {
    std::map<std::string, Term> found;
    collect_vars(sup.predicate, found);
    auto free = free_vars(sup.predicate);
    for (const auto& [name, v] : found) {
      if (free.contains(v.key()) && !s.signature.find_variable(name)) foreign.emplace(name, v);
    }
  }
  json aux = json::array();
  for (const auto& [name, v] : foreign) aux.push_back(variable_json(name, v.type(), v.domain()));
  j["signature"] = {{"sets", sets}, {"variables", vars}, {"auxiliary_variables", aux}};
  j["invariant"] = machine_text(s.invariant);
  j["events"] = s.events;
  json states = json::array();
  for (const auto& q : s.states) {
    states.push_back({{"id", q.id},
                      {"name", q.name},
                      {"predicate", machine_text(q.predicate)},
                      {"interpretation", machine_text(q.interpretation)},
                      {"initial", q.initial},
                      {"super_states", q.super_states}});
  }
  j["states"] = states;
  json supers = json::array();
  for (const auto& sup : s.super_states) {
    supers.push_back({{"name", sup.name},
                      {"predicate", machine_text(sup.predicate)},
                      {"substates", sup.substates},
                      {"verdict", to_string(sup.verdict)}});
  }
  j["super_states"] = supers;
  json trans = json::array();
  for (const auto& t : s.transitions) {
    trans.push_back({{"source", t.source},
                     {"target", t.target},
                     {"event", t.event},
                     {"d", machine_text(t.d)},
                     {"a", machine_text(t.a)},
                     {"d_provenance", to_string(t.d_provenance)},
                     {"a_provenance", to_string(t.a_provenance)},
                     {"label", t.label()}});
  }
  j["transitions"] = trans;
  j["unreached"] = s.unreached;
  j["minimal"] = s.minimal;
  json pos = json::array();
  for (const auto& p : s.pos) {
    pos.push_back({{"id", p.id},
                   {"kind", to_string(p.kind)},
                   {"outcome", to_string(p.outcome)},
                   {"assumed", p.assumed},
                   {"witness", p.witness}});
  }
  j["pos"] = pos;
  j["warnings"] = s.warnings;
  return j.dump(2) + "\n";
}

Slts load_structured(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Error::Kind::Syntax, std::string("malformed dump: ") + e.what());
  }
  if (field<std::string>(j, "format") != "slts") throw Error(Error::Kind::Syntax, "not an SLTS dump");
  int version = field<int>(j, "version");
  if (version != kDumpVersion) {
    throw Error(Error::Kind::Semantic, "unsupported dump version " + std::to_string(version));
  }
  Slts s;
  s.machine = field<std::string>(j, "machine");
  const json& sig = sub(j, "signature");
  for (const auto& set : sub(sig, "sets")) {
    s.signature.add_set({field<std::string>(set, "name"), field<std::vector<std::string>>(set, "elements")});
  }
  for (const auto& v : sub(sig, "variables")) load_variable(v, s.signature, s.signature);
  Signature wide = s.signature;
  for (const auto& v : sub(sig, "auxiliary_variables")) load_variable(v, wide, s.signature);
  auto pred = [&](const std::string& t) { return parse_predicate(t, s.signature); };
  s.invariant = pred(field<std::string>(j, "invariant"));
  s.events = field<std::vector<std::string>>(j, "events");
  for (const auto& q : sub(j, "states")) {
    SymbolicState st;
    st.id = field<std::string>(q, "id");
    st.name = field<std::string>(q, "name");
    st.predicate = pred(field<std::string>(q, "predicate"));
    st.interpretation = pred(field<std::string>(q, "interpretation"));
    st.initial = field<bool>(q, "initial");
    st.super_states = field<std::vector<std::string>>(q, "super_states");
    s.states.push_back(std::move(st));
  }
  for (const auto& x : sub(j, "super_states")) {
    SuperState sup;
    sup.name = field<std::string>(x, "name");
    sup.predicate = parse_predicate(field<std::string>(x, "predicate"), wide);
    sup.substates = field<std::vector<std::string>>(x, "substates");
    sup.verdict = parse_outcome(field<std::string>(x, "verdict"));
    s.super_states.push_back(std::move(sup));
  }
  for (const auto& x : sub(j, "transitions")) {
    SltsTransition t;
    t.source = field<std::string>(x, "source");
    t.target = field<std::string>(x, "target");
    t.event = field<std::string>(x, "event");
    if (!s.find_state(t.source) || !s.find_state(t.target)) {
      throw Error(Error::Kind::Syntax, "transition on unknown state in dump");
    }
    t.d = pred(field<std::string>(x, "d"));
    t.a = pred(field<std::string>(x, "a"));
    auto dp = parse_d_provenance(field<std::string>(x, "d_provenance"));
    auto ap = parse_a_provenance(field<std::string>(x, "a_provenance"));
    if (!dp || !ap) throw Error(Error::Kind::Syntax, "unknown provenance in dump");
    t.d_provenance = *dp;
    t.a_provenance = *ap;
    s.transitions.push_back(std::move(t));
  }
  s.unreached = field<std::vector<std::string>>(j, "unreached");
  s.minimal = field<bool>(j, "minimal");
  for (const auto& x : sub(j, "pos")) {
    PoRecord p;
    p.id = field<std::string>(x, "id");
    p.kind = parse_po_kind(field<std::string>(x, "kind"));
    p.outcome = parse_outcome(field<std::string>(x, "outcome"));
    p.assumed = field<bool>(x, "assumed");
    p.witness = field<std::string>(x, "witness");
    s.pos.push_back(std::move(p));
  }
  s.warnings = field<std::vector<std::string>>(j, "warnings");
  return s;
}

}  // namespace eventb
