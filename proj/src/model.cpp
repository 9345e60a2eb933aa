#include "eventb/model.hpp"

#include <algorithm>

namespace eventb {

void Signature::add_set(SetDecl set) { sets_.push_back(std::move(set)); }

void Signature::add_variable(VarDecl var) { variables_.push_back(std::move(var)); }

const SetDecl* Signature::find_set(const std::string& name) const {
  for (const auto& s : sets_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const VarDecl* Signature::find_variable(const std::string& name) const {
  for (const auto& v : variables_) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

std::optional<std::pair<const SetDecl*, Value>> Signature::find_element(const std::string& element) const {
  for (const auto& s : sets_) {
    auto it = std::find(s.elements.begin(), s.elements.end(), element);
    if (it != s.elements.end()) return std::make_pair(&s, static_cast<Value>(it - s.elements.begin()));
  }
  return std::nullopt;
}

Term Signature::set_term(const std::string& name) const {
  if (name == "BOOL") return Term::bool_set();
  const SetDecl* s = find_set(name);
  if (!s) throw Error(Error::Kind::UnknownIdentifier, "unknown set '" + name + "'");
  return Term::enum_set(s->name, static_cast<Value>(s->elements.size()));
}

std::string Signature::value_name(Value v, const Type& t) const {
  switch (t.kind) {
    case Type::Kind::Bool:
      return v ? "TRUE" : "FALSE";
    case Type::Kind::Int:
      return std::to_string(v);
    case Type::Kind::Enum: {
      const SetDecl* s = find_set(t.set);
      if (s && v >= 0 && static_cast<std::size_t>(v) < s->elements.size()) return s->elements[static_cast<std::size_t>(v)];
      return t.set + "#" + std::to_string(v);
    }
  }
  return "?";
}

const Event* MachineModel::find_event(const std::string& name) const {
  for (const auto& e : events) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::set<std::string> interface_of(const MachineModel& m) {
  std::set<std::string> out;
  for (const auto& e : m.events) out.insert(e.name);
  return out;
}

std::vector<VarDecl> joint_variables(const RefinementModel& r) {
  std::vector<VarDecl> out = r.concrete.signature.variables();
  const auto& abs = r.abstraction.signature.variables();
  out.insert(out.end(), abs.begin(), abs.end());
  return out;
}

Term exists_over(const std::vector<VarDecl>& vars, Term body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    body = Term::quantifier(Op::Exists, it->name, it->type, it->domain, std::move(body));
  }
  return body;
}

Term forall_over(const std::vector<VarDecl>& vars, Term body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    body = Term::quantifier(Op::Forall, it->name, it->type, it->domain, std::move(body));
  }
  return body;
}

Term concrete_invariant(const RefinementModel& r) {
  return exists_over(r.abstraction.signature.variables(), Term::conj({r.abstraction.invariant, r.gluing()}));
}

MachineModel concrete_view(const RefinementModel& r) {
  MachineModel m = r.concrete;
  m.invariant = concrete_invariant(r);
  return m;
}

}  // namespace eventb
