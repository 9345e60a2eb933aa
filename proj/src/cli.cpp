#include "eventb/cli.hpp"

#include <fstream>
#include <ostream>
#include <variant>

#include "eventb/oracle.hpp"
#include "eventb/parser.hpp"
#include "eventb/refinement.hpp"
#include "eventb/render.hpp"
#include "eventb/secprops.hpp"

namespace eventb::cli {

namespace {

class Status {
 public:
  void outcome(Outcome o) {
    if (o == Outcome::Invalid) code_ = kFalse;
    if (o == Outcome::Unknown && code_ == kOk) code_ = kInconclusive;
  }
  void truth(Truth t) {
    if (t == Truth::False) code_ = kFalse;
    if (t == Truth::Inconclusive && code_ == kOk) code_ = kInconclusive;
  }
  int code() const { return code_; }

 private:
  int code_ = kOk;
};

GenOptions gen_options(const RunConfig& c) {
  GenOptions o;
  o.mode = c.mode;
  o.budget = c.budget;
  o.force = c.force;
  o.keep_all_states = c.keep_all_states;
  if (c.assumptions) o.assumptions = AssumptionTable::load(*c.assumptions);
  return o;
}

Component load(const RunConfig& c) {
  std::optional<std::filesystem::path> abs;
  if (c.abstraction) abs = *c.abstraction;
  return load_component(c.input, abs);
}

bool looks_like_dump(const std::string& text) {
  auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && text[p] == '{';
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Error::Kind::Io, "cannot write " + path);
  f << text;
}

void emit_slts(const RunConfig& c, const Slts& s, std::ostream& out, std::ostream& err, bool dump_to_stdout) {
  for (const auto& w : s.warnings) err << "warning: " << w << '\n';
  if (!s.minimal) err << "warning: the SLTS is not minimal; some transitions are kept by default\n";
  std::string dump = to_structured(s);
  if (c.output) {
    write_file(*c.output, dump);
  } else if (dump_to_stdout) {
    out << dump;
  }
  if (c.dot) {
    RenderOptions ro;
    if (c.verbose_labels) ro.style = LabelStyle::Verbose;
    write_file(*c.dot, to_dot(s, ro));
  }
}

std::string po_line(const PoRecord& p) {
  std::string line = p.id + ' ' + to_string(p.outcome);
  if (!p.witness.empty()) line += " [" + p.witness + "]";
  return line;
}

int cmd_gen(const RunConfig& c, std::ostream& out, std::ostream& err) {
  auto comp = load(c);
  if (!std::holds_alternative<MachineModel>(comp)) {
    throw Error(Error::Kind::Semantic, c.input + " is a refinement; use gen-ref");
  }
  Slts s = generate(std::get<MachineModel>(comp), gen_options(c));
  emit_slts(c, s, out, err, true);
  return kOk;
}

int cmd_gen_ref(const RunConfig& c, std::ostream& out, std::ostream& err) {
  auto comp = load(c);
  if (!std::holds_alternative<RefinementModel>(comp)) {
    throw Error(Error::Kind::Semantic, c.input + " is a machine; use gen");
  }
  const auto& r = std::get<RefinementModel>(comp);
  GenOptions o = gen_options(c);
  Status st;
  for (const auto& d : check_decompositions(r, o)) {
    out << "decomposition " << d.super_state << ' ' << to_string(d.verdict.outcome) << '\n';
    st.outcome(d.verdict.outcome);
  }
  Slts projected = generate_projected(r, o);
  Slts abstract = generate(r.abstraction, o);
  for (const auto& e : check_projection_lemma(abstract, projected, r, o)) {
    out << "lemma " << po_line(e.po) << '\n';
    st.outcome(e.po.outcome);
  }
  for (const auto& p : gen_refinement_pos(r, o)) {
    out << "po " << po_line(p) << '\n';
    st.outcome(p.outcome);
  }
  emit_slts(c, projected, out, err, false);
  return st.code();
}

int cmd_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.properties) throw Error(Error::Kind::Io, "check needs --props");
  std::string props = read_file(*c.properties);
  std::string text = read_file(c.input);
  std::optional<Slts> slts;
  std::optional<MachineModel> model;
  if (looks_like_dump(text)) {
    if (c.methods == CheckMethods::Semantic) {
      throw Error(Error::Kind::Semantic, "semantic checking needs a machine or refinement, not a dump");
    }
    slts = load_structured(text);
  } else {
    auto comp = load(c);
    GenOptions o = gen_options(c);
    if (auto* m = std::get_if<MachineModel>(&comp)) {
      model = *m;
      if (c.methods != CheckMethods::Semantic) slts = generate(*m, o);
    } else {
      const auto& r = std::get<RefinementModel>(comp);
      model = concrete_view(r);
      if (c.methods != CheckMethods::Semantic) slts = generate_projected(r, o);
    }
  }
  const Signature& sig = slts ? slts->signature : model->signature;
  const Term& inv = slts ? slts->invariant : model->invariant;
  std::vector<std::string> events;
  if (slts) {
    events = slts->events;
  } else {
    for (const auto& e : model->events) events.push_back(e.name);
  }
  Status st;
  for (const auto& f : parse_properties(props, sig, inv, events)) {
    auto report = [&](const CheckResult& r, const char* method) {
      out << f.label << ' ' << method << ' ' << to_string(r.truth);
      if (r.method == Method::Syntactic) out << ' ' << r.citation();
      out << '\n';
      for (const auto& j : r.justification) out << "  " << j << '\n';
      for (const auto& w : r.warnings) err << "warning: " << f.label << ": " << w << '\n';
      st.truth(r.truth);
    };
    if (slts && c.methods != CheckMethods::Semantic) report(check_syntactic(f, *slts, c.budget), "syntactic");
    if (model && c.methods != CheckMethods::Syntactic) report(check_semantic(f, *model, c.budget), "semantic");
  }
  return st.code();
}

int cmd_pos(const RunConfig& c, std::ostream& out, std::ostream&) {
  auto comp = load(c);
  GenOptions o = gen_options(c);
  if (auto* m = std::get_if<MachineModel>(&comp)) {
    out << ledger_text(generate(*m, o));
    return kOk;
  }
  const auto& r = std::get<RefinementModel>(comp);
  Slts projected = generate_projected(r, o);
  out << ledger_text(projected);
  Slts abstract = generate(r.abstraction, o);
  auto line = [&](const PoRecord& p) {
    out << p.id << ' ' << to_string(p.kind) << ' ' << to_string(p.outcome) << ' ' << p.provenance() << '\n';
  };
  for (const auto& e : check_projection_lemma(abstract, projected, r, o)) line(e.po);
  for (const auto& p : gen_refinement_pos(r, o)) line(p);
  return kOk;
}

int cmd_oracle(const RunConfig& c, std::ostream& out, std::ostream&) {
  auto comp = load(c);
  GenOptions o = gen_options(c);
  MachineModel m;
  Slts s;
  if (auto* mm = std::get_if<MachineModel>(&comp)) {
    m = *mm;
    s = generate(m, o);
  } else {
    const auto& r = std::get<RefinementModel>(comp);
    m = concrete_view(r);
    s = generate_projected(r, o);
  }
  EqualityReport rep = check_trace_path_equality(m, s, c.depth);
  out << "depth " << c.depth << " traces " << rep.traces << " paths " << rep.paths << '\n';
  if (rep.equal) {
    out << "equal\n";
    return kOk;
  }
  out << "divergence " << join_events(*rep.divergence) << ' '
      << (rep.divergence_is_trace ? "trace-without-path" : "path-without-trace") << '\n';
  return kFalse;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.budget < 1) throw Error(Error::Kind::Semantic, "budget must be at least 1");
    switch (config.command) {
      case Command::Gen:
        return cmd_gen(config, out, err);
      case Command::GenRef:
        return cmd_gen_ref(config, out, err);
      case Command::Check:
        return cmd_check(config, out, err);
      case Command::Pos:
        return cmd_pos(config, out, err);
      case Command::Oracle:
        return cmd_oracle(config, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kInputError;
}

}  // namespace eventb::cli
