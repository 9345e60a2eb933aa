#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eventb/model.hpp"

namespace eventb {

/// Assignment of values to variables. Later entries shadow earlier ones.
class Valuation {
 public:
  struct Entry {
    VarKey key;
    Type type;
    Value value;
  };

  void set(const VarKey& key, const Type& type, Value v);
  std::optional<Value> get(const VarKey& key) const;
  const std::vector<Entry>& entries() const { return entries_; }
  void push(const VarKey& key, const Type& type, Value v) { entries_.push_back({key, type, v}); }
  void pop() { entries_.pop_back(); }

  bool operator==(const Valuation&) const;
  /// `Error=FALSE, EngagedTrans=TRUE` style rendering.
  std::string to_string(const Signature& sig) const;

 private:
  std::vector<Entry> entries_;
};

bool operator==(const Valuation::Entry& a, const Valuation::Entry& b);

/// Truth value of a predicate. Quantifiers range over their finite sets.
/// Throws Error{Semantic} on unbound variables.
bool evaluate(const Term& p, const Valuation& v);
Value evaluate_expr(const Term& e, const Valuation& v);

/// Elements of a finite set term, in declaration order.
std::vector<Value> domain_values(const Term& set, const Valuation& v = {});

/// Number of valuations of `vars`, saturated at `cap`.
std::uint64_t space_size(const std::vector<VarDecl>& vars, std::uint64_t cap);

/// Calls `f` on every valuation of `vars`, first variable most significant.
/// Stops early when `f` returns false.
template <class F>
void for_each_valuation(const std::vector<VarDecl>& vars, F&& f);

enum class Outcome { Valid, Invalid, Unknown };
enum class PoKind { Validity, Satisfiability };

std::string to_string(Outcome o);
std::string to_string(PoKind k);

/// `formula` is implicitly closed over `vars`: universally for validity
/// obligations, existentially for satisfiability ones.
struct ProofObligation {
  std::string id;
  Term formula;
  PoKind kind = PoKind::Validity;
  std::vector<VarDecl> vars;
};

struct Verdict {
  std::string id;
  Outcome outcome = Outcome::Unknown;
  std::optional<Valuation> witness;
  std::uint64_t examined = 0;
  bool assumed = false;
};

/// PO identifier -> externally asserted outcome.
class AssumptionTable {
 public:
  /// Lines `<id> <VALID|INVALID>`; `#` starts a comment.
  static AssumptionTable parse(const std::string& text);
  static AssumptionTable load(const std::filesystem::path& path);

  void add(const std::string& id, Outcome o);
  std::optional<Outcome> find(const std::string& id) const;
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::string, Outcome> table_;
};

/// Decides by exhaustive enumeration. Returns Unknown without enumerating
/// when the valuation space exceeds `budget`.
Verdict decide(const ProofObligation& po, std::uint64_t budget, const AssumptionTable& assumptions = {});

// ---- implementation ------------------------------------------------------

template <class F>
void for_each_valuation(const std::vector<VarDecl>& vars, F&& f) {
  std::vector<std::vector<Value>> domains;
  for (const auto& v : vars) {
    domains.push_back(domain_values(v.domain));
    if (domains.back().empty()) return;
  }
  std::vector<std::size_t> idx(vars.size(), 0);
  Valuation val;
  for (std::size_t i = 0; i < vars.size(); ++i) val.push(VarKey{vars[i].name, false}, vars[i].type, domains[i][0]);
  while (true) {
    for (std::size_t i = 0; i < vars.size(); ++i) val.set(VarKey{vars[i].name, false}, vars[i].type, domains[i][idx[i]]);
    if (!f(static_cast<const Valuation&>(val))) return;
    std::size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++idx[k] < domains[k].size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (vars.empty()) return;
  }
}

}  // namespace eventb
