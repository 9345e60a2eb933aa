#include "eventb/prover.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace eventb {

void Valuation::set(const VarKey& key, const Type& type, Value v) {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->key == key) {
      it->value = v;
      return;
    }
  }
  entries_.push_back({key, type, v});
}

std::optional<Value> Valuation::get(const VarKey& key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->key == key) return it->value;
  }
  return std::nullopt;
}

bool operator==(const Valuation::Entry& a, const Valuation::Entry& b) {
  return a.key == b.key && a.type == b.type && a.value == b.value;
}

bool Valuation::operator==(const Valuation& o) const { return entries_ == o.entries_; }

std::string Valuation::to_string(const Signature& sig) const {
  std::string out;
  for (const auto& e : entries_) {
    if (!out.empty()) out += ", ";
    out += e.key.name + (e.key.primed ? "'" : "") + "=" + sig.value_name(e.value, e.type);
  }
  return out;
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const Valuation& v) : env_(v) {}

  bool pred(const Term& t) {
    switch (t.op()) {
      case Op::True:
        return true;
      case Op::False:
        return false;
      case Op::And:
        return std::all_of(t.args().begin(), t.args().end(), [&](const Term& a) { return pred(a); });
      case Op::Or:
        return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return pred(a); });
      case Op::Not:
        return !pred(t.arg(0));
      case Op::Implies:
        return !pred(t.arg(0)) || pred(t.arg(1));
      case Op::Equiv:
        return pred(t.arg(0)) == pred(t.arg(1));
      case Op::Eq:
        return expr(t.arg(0)) == expr(t.arg(1));
      case Op::Neq:
        return expr(t.arg(0)) != expr(t.arg(1));
      case Op::Lt:
        return expr(t.arg(0)) < expr(t.arg(1));
      case Op::Le:
        return expr(t.arg(0)) <= expr(t.arg(1));
      case Op::Gt:
        return expr(t.arg(0)) > expr(t.arg(1));
      case Op::Ge:
        return expr(t.arg(0)) >= expr(t.arg(1));
      case Op::In:
        return member(expr(t.arg(0)), t.arg(1));
      case Op::Forall:
      case Op::Exists: {
        bool forall = t.op() == Op::Forall;
        VarKey key{t.name(), false};
        for (Value x : set(t.arg(0))) {
          env_.push(key, t.type(), x);
          bool b = pred(t.arg(1));
          env_.pop();
          if (b != forall) return !forall;
        }
        return forall;
      }
      default:
        throw Error(Error::Kind::Semantic, "expression used as a predicate");
    }
  }

  Value expr(const Term& t) {
    switch (t.op()) {
      case Op::Var: {
        auto v = env_.get(t.key());
        if (!v) throw Error(Error::Kind::Semantic, "unbound variable '" + t.name() + (t.primed() ? "'" : "") + "'");
        return *v;
      }
      case Op::Const:
      case Op::Int:
        return t.value();
      case Op::Add:
        return expr(t.arg(0)) + expr(t.arg(1));
      case Op::Sub:
        return expr(t.arg(0)) - expr(t.arg(1));
      case Op::BoolOf:
        return pred(t.arg(0)) ? 1 : 0;
      default:
        throw Error(Error::Kind::Semantic, "predicate used as an expression");
    }
  }

  bool member(Value x, const Term& s) {
    switch (s.op()) {
      case Op::BoolSet:
        return x == 0 || x == 1;
      case Op::EnumSet:
        return x >= 0 && x < s.value();
      case Op::Interval:
        return expr(s.arg(0)) <= x && x <= expr(s.arg(1));
      case Op::Extension:
        return std::any_of(s.args().begin(), s.args().end(), [&](const Term& e) { return expr(e) == x; });
      default:
        throw Error(Error::Kind::Semantic, "not a set expression");
    }
  }

  std::vector<Value> set(const Term& s) {
    std::vector<Value> out;
    switch (s.op()) {
      case Op::BoolSet:
        return {0, 1};
      case Op::EnumSet:
        for (Value i = 0; i < s.value(); ++i) out.push_back(i);
        return out;
      case Op::Interval: {
        Value lo = expr(s.arg(0));
        Value hi = expr(s.arg(1));
        if (hi - lo > 1'000'000) throw Error(Error::Kind::NonFinite, "interval too large to enumerate");
        for (Value i = lo; i <= hi; ++i) out.push_back(i);
        return out;
      }
      case Op::Extension:
        for (const auto& e : s.args()) {
          Value x = expr(e);
          if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        }
        return out;
      default:
        throw Error(Error::Kind::Semantic, "not a set expression");
    }
  }

 private:
  Valuation env_;
};

}  // namespace

bool evaluate(const Term& p, const Valuation& v) { return Evaluator(v).pred(p); }

Value evaluate_expr(const Term& e, const Valuation& v) { return Evaluator(v).expr(e); }

std::vector<Value> domain_values(const Term& set, const Valuation& v) { return Evaluator(v).set(set); }

std::uint64_t space_size(const std::vector<VarDecl>& vars, std::uint64_t cap) {
  std::uint64_t n = 1;
  for (const auto& v : vars) {
    std::uint64_t d = domain_values(v.domain).size();
    if (d == 0) return 0;
    if (n > cap / d) return cap == UINT64_MAX ? cap : cap + 1;
    n *= d;
  }
  return n;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Valid:
      return "VALID";
    case Outcome::Invalid:
      return "INVALID";
    case Outcome::Unknown:
      return "UNKNOWN";
  }
  return "?";
}

std::string to_string(PoKind k) { return k == PoKind::Validity ? "validity" : "satisfiability"; }

AssumptionTable AssumptionTable::parse(const std::string& text) {
  AssumptionTable t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string id;
    std::string verdict;
    std::string extra;
    if (!(ls >> id)) continue;
    if (!(ls >> verdict) || (ls >> extra)) {
      throw Error(Error::Kind::Syntax, "assumption lines are '<po-identifier> <VALID|INVALID>'", lineno, 1);
    }
    std::transform(verdict.begin(), verdict.end(), verdict.begin(), [](unsigned char c) { return std::toupper(c); });
    Outcome o;
    if (verdict == "VALID") {
      o = Outcome::Valid;
    } else if (verdict == "INVALID") {
      o = Outcome::Invalid;
    } else {
      throw Error(Error::Kind::Syntax, "unknown verdict '" + verdict + "'", lineno, 1);
    }
    auto prev = t.find(id);
    if (prev && *prev != o) throw Error(Error::Kind::Semantic, "conflicting assumptions for " + id, lineno, 1);
    t.add(id, o);
  }
  return t;
}

AssumptionTable AssumptionTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void AssumptionTable::add(const std::string& id, Outcome o) { table_[id] = o; }

std::optional<Outcome> AssumptionTable::find(const std::string& id) const {
  auto it = table_.find(id);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

Verdict decide(const ProofObligation& po, std::uint64_t budget, const AssumptionTable& assumptions) {
  Verdict v;
  v.id = po.id;
  if (auto a = assumptions.find(po.id)) {
    v.outcome = *a;
    v.assumed = true;
    return v;
  }
  if (budget == 0 || space_size(po.vars, budget) > budget) return v;
  bool validity = po.kind == PoKind::Validity;
  v.outcome = validity ? Outcome::Valid : Outcome::Invalid;
  for_each_valuation(po.vars, [&](const Valuation& val) {
    ++v.examined;
    bool holds = evaluate(po.formula, val);
    if (holds != validity) {
      v.outcome = validity ? Outcome::Invalid : Outcome::Valid;
      v.witness = val;
      return false;
    }
    return true;
  });
  return v;
}

}  // namespace eventb
