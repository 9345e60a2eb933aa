#include "eventb/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "eventb/simplify.hpp"

namespace eventb {

namespace {

struct Token {
  enum class Kind { Ident, Int, Sym, Eof };
  Kind kind = Kind::Eof;
  std::string text;
  bool primed = false;
  int line = 0;
  int column = 0;
};

const char* const kSymbols[] = {"<=>", "..", "::", ":=", "/=", "/:", "=>", "<=", ">=", "||", "&", "=", ":",
                                "<",   ">",  "(",  ")",  "{",  "}",  ",",  ";",  ".",  "!",  "#", "+", "-"};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.compare(i, 2, "//") == 0) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.compare(i, 2, "/*") == 0) {
      int l = line;
      int cl = col;
      std::size_t close = src.find("*/", i + 2);
      if (close == std::string::npos) throw Error(Error::Kind::Lexical, "unterminated comment", l, cl);
      advance(close + 2 - i);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Token::Kind::Ident;
      t.text = src.substr(i, j - i);
      if (j < src.size() && src[j] == '\'') {
        t.primed = true;
        ++j;
      } else if (src.compare(j, 2, "$1") == 0) {
        t.primed = true;
        j += 2;
      } else if (j < src.size() && src[j] == '$') {
        throw Error(Error::Kind::Lexical, "only the $1 suffix is supported", line, col);
      }
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::Int;
      t.text = src.substr(i, j - i);
      if (t.text.size() > 15) throw Error(Error::Kind::Lexical, "integer literal too large", line, col);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (const char* sym : kSymbols) {
      std::size_t n = std::char_traits<char>::length(sym);
      if (src.compare(i, n, sym) == 0) {
        t.kind = Token::Kind::Sym;
        t.text = sym;
        advance(n);
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw Error(Error::Kind::Lexical, std::string("unexpected character '") + c + "'", line, col);
    }
  }
  Token eof;
  eof.line = line;
  eof.column = col;
  out.push_back(eof);
  return out;
}

const std::set<std::string> kClauses = {"SETS",       "VARIABLES",      "INVARIANT", "ASSERTIONS",
                                        "VARIANT",    "INITIALISATION", "EVENTS",    "OPERATIONS"};
const std::set<std::string> kUnsupported = {
    "DEFINITIONS", "CONSTANTS",          "PROPERTIES",         "SEES",        "INCLUDES",  "USES",
    "PROMOTES",    "EXTENDS",            "IMPORTS",            "CONSTRAINTS", "VALUES",    "LOCAL_OPERATIONS",
    "ABSTRACT_CONSTANTS", "CONCRETE_CONSTANTS", "CONCRETE_VARIABLES", "ABSTRACT_VARIABLES", "INITIALIZATION"};
const std::set<std::string> kInfinite = {"NAT", "NAT1", "NATURAL", "NATURAL1", "INT", "INTEGER", "INTEGER1"};

using VarScope = std::map<std::string, Term>;

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, const Signature& sig) : toks_(tokens), sig_(sig), end_(tokens.size() - 1) {}

  void set_range(std::size_t begin, std::size_t end) {
    pos_ = begin;
    end_ = end;
  }
  std::size_t pos() const { return pos_; }
  std::size_t end() const { return end_; }
  void set_scope(const VarScope* scope) { scope_ = scope; }
  void set_allow_primed(bool b) { allow_primed_ = b; }
  void set_inv(const Term* inv) { inv_ = inv; }

  const Token& peek(std::size_t k = 0) const {
    std::size_t idx = pos_ + k;
    if (idx >= end_) return eof_at(end_);
    return toks_[idx];
  }
  bool at_end() const { return pos_ >= end_; }
  bool is_sym(const char* s, std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind == Token::Kind::Sym && t.text == s;
  }
  bool is_kw(const char* s, std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind == Token::Kind::Ident && !t.primed && t.text == s;
  }
  bool accept_sym(const char* s) {
    if (!is_sym(s)) return false;
    ++pos_;
    return true;
  }
  bool accept_kw(const char* s) {
    if (!is_kw(s)) return false;
    ++pos_;
    return true;
  }
  void expect_sym(const char* s) {
    if (!accept_sym(s)) fail_expected(std::string("'") + s + "'");
  }
  void expect_kw(const char* s) {
    if (!accept_kw(s)) fail_expected(s);
  }
  const Token& expect_ident() {
    if (peek().kind != Token::Kind::Ident) fail_expected("identifier");
    return toks_[pos_++];
  }
  void expect_end_of_range(const char* what) {
    if (!at_end()) fail(Error::Kind::Syntax, std::string("unexpected '") + peek().text + "' after " + what, peek());
  }

  [[noreturn]] void fail(Error::Kind kind, const std::string& msg, const Token& at) const {
    throw Error(kind, msg, at.line, at.column);
  }
  [[noreturn]] void fail_expected(const std::string& what) const {
    const Token& t = peek();
    std::string got = t.kind == Token::Kind::Eof ? "end of input" : "'" + t.text + "'";
    fail(Error::Kind::Syntax, "expected " + what + ", found " + got, t);
  }

  std::size_t matching_paren(std::size_t open, std::size_t limit) const {
    int depth = 0;
    for (std::size_t i = open; i < limit; ++i) {
      const Token& t = toks_[i];
      if (t.kind != Token::Kind::Sym) continue;
      if (t.text == "(" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "}") {
        if (--depth == 0) return i;
      }
    }
    return limit;
  }

  // ---- predicates -------------------------------------------------------

  Term pred() {
    Term a = implication();
    while (accept_sym("<=>")) a = Term::equiv(a, implication());
    return a;
  }

  Term implication() {
    Term a = disjunction();
    while (accept_sym("=>")) a = Term::implies(a, disjunction());
    return a;
  }

  Term disjunction() {
    std::vector<Term> parts{conjunction()};
    while (accept_kw("or")) parts.push_back(conjunction());
    return parts.size() == 1 ? parts.front() : Term::make(Op::Or, std::move(parts));
  }

  Term conjunction() {
    std::vector<Term> parts{unary()};
    while (accept_sym("&")) parts.push_back(unary());
    return parts.size() == 1 ? parts.front() : Term::make(Op::And, std::move(parts));
  }

  Term unary() {
    if (accept_kw("not")) {
      if (accept_sym("(")) {
        Term p = pred();
        expect_sym(")");
        return Term::negate(p);
      }
      return Term::negate(unary());
    }
    if (is_sym("!") || is_sym("#")) return quantifier();
    if (accept_kw("true")) return Term::truth(true);
    if (accept_kw("false")) return Term::truth(false);
    if (inv_ && is_kw("INV")) {
      ++pos_;
      return *inv_;
    }
    if (is_sym("(")) {
      std::size_t save = pos_;
      try {
        Term e = expr();
        if (is_relation()) return relation(e);
      } catch (const Error&) {
      }
      pos_ = save;
      expect_sym("(");
      Term p = pred();
      expect_sym(")");
      return p;
    }
    Term e = expr();
    if (!is_relation()) fail_expected("relational operator");
    return relation(e);
  }

  bool is_relation() const {
    static const char* const ops[] = {"=", "/=", ":", "/:", "<", "<=", ">", ">="};
    return std::any_of(std::begin(ops), std::end(ops), [&](const char* o) { return is_sym(o); });
  }

  Term relation(const Term& lhs) {
    const Token& t = peek();
    std::string op = t.text;
    ++pos_;
    if (op == ":" || op == "/:") {
      Term set = set_expr();
      check_types(type_of(lhs), element_type(set), t);
      Term m = Term::member(lhs, set);
      return op == ":" ? m : Term::negate(m);
    }
    Term rhs = expr();
    if (op == "=" || op == "/=") {
      check_types(type_of(lhs), type_of(rhs), t);
      return Term::make(op == "=" ? Op::Eq : Op::Neq, {lhs, rhs});
    }
    check_types(type_of(lhs), Type::integer(), t);
    check_types(type_of(rhs), Type::integer(), t);
    Op o = op == "<" ? Op::Lt : op == "<=" ? Op::Le : op == ">" ? Op::Gt : Op::Ge;
    return Term::make(o, {lhs, rhs});
  }

  Term quantifier() {
    bool forall = is_sym("!");
    ++pos_;
    const Token& name = expect_ident();
    accept_sym(".");
    expect_sym("(");
    const Token& again = expect_ident();
    if (again.text != name.text) fail(Error::Kind::Syntax, "quantifier must start with a typing of " + name.text, again);
    expect_sym(":");
    Term set = set_expr();
    Type t = element_type(set);
    check_fresh(name);
    bound_.emplace_back(name.text, Term::var(name.text, t, set));
    Term body = Term::truth(true);
    if (forall) {
      expect_sym("=>");
      body = pred();
    } else if (accept_sym("&")) {
      body = pred();
    }
    bound_.pop_back();
    expect_sym(")");
    return Term::quantifier(forall ? Op::Forall : Op::Exists, name.text, t, set, body);
  }

  // ---- expressions ------------------------------------------------------

  Term expr() {
    Term a = primary();
    while (is_sym("+") || is_sym("-")) {
      const Token& t = peek();
      bool add = t.text == "+";
      ++pos_;
      Term b = primary();
      check_types(type_of(a), Type::integer(), t);
      check_types(type_of(b), Type::integer(), t);
      a = Term::make(add ? Op::Add : Op::Sub, {a, b});
    }
    return a;
  }

  Term primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Int) {
      ++pos_;
      return Term::integer(std::stoll(t.text));
    }
    if (is_sym("-") && peek(1).kind == Token::Kind::Int) {
      ++pos_;
      return Term::integer(-std::stoll(toks_[pos_++].text));
    }
    if (accept_sym("(")) {
      Term e = expr();
      expect_sym(")");
      return e;
    }
    if (is_kw("bool") && is_sym("(", 1)) {
      pos_ += 2;
      Term p = pred();
      expect_sym(")");
      return Term::make(Op::BoolOf, {p});
    }
    if (t.kind == Token::Kind::Ident) {
      ++pos_;
      return resolve(t);
    }
    fail_expected("expression");
  }

  Term resolve(const Token& t) {
    if (t.primed) {
      if (!allow_primed_) fail(Error::Kind::Syntax, "primed variable '" + t.text + "' not allowed here", t);
      if (scope_) {
        auto it = scope_->find(t.text);
        if (it != scope_->end()) {
          const Term& v = it->second;
          return Term::var(v.name(), v.type(), v.domain(), true);
        }
      }
      fail(Error::Kind::UnknownIdentifier, "unknown variable '" + t.text + "'", t);
    }
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
      if (it->first == t.text) return it->second;
    }
    if (scope_) {
      auto it = scope_->find(t.text);
      if (it != scope_->end()) return it->second;
    }
    if (t.text == "TRUE" || t.text == "FALSE") return Term::constant(t.text, Type::boolean(), t.text == "TRUE" ? 1 : 0);
    if (auto el = sig_.find_element(t.text)) return Term::constant(t.text, Type::enumerated(el->first->name), el->second);
    if (sig_.find_set(t.text) || t.text == "BOOL") {
      fail(Error::Kind::DomainMismatch, "set '" + t.text + "' used as a value", t);
    }
    fail(Error::Kind::UnknownIdentifier, "unknown identifier '" + t.text + "'", t);
  }

  Term set_expr() {
    const Token& t = peek();
    if (accept_sym("{")) {
      std::vector<Term> els{expr()};
      while (accept_sym(",")) els.push_back(expr());
      expect_sym("}");
      Type et = type_of(els.front());
      for (const auto& e : els) check_types(type_of(e), et, t);
      return Term::extension(std::move(els), et);
    }
    if (t.kind == Token::Kind::Ident && !t.primed) {
      if (kInfinite.contains(t.text)) fail(Error::Kind::NonFinite, "infinite domain '" + t.text + "'", t);
      if (t.text == "BOOL") {
        ++pos_;
        return Term::bool_set();
      }
      if (sig_.find_set(t.text)) {
        ++pos_;
        return sig_.set_term(t.text);
      }
    }
    Term lo = expr();
    expect_sym("..");
    Term hi = expr();
    check_types(type_of(lo), Type::integer(), t);
    check_types(type_of(hi), Type::integer(), t);
    return Term::interval(lo, hi);
  }

  static Type type_of(const Term& e) {
    switch (e.op()) {
      case Op::Var:
      case Op::Const:
        return e.type();
      case Op::Int:
      case Op::Add:
      case Op::Sub:
        return Type::integer();
      case Op::BoolOf:
        return Type::boolean();
      default:
        return Type::boolean();
    }
  }

  void check_types(const Type& a, const Type& b, const Token& at) const {
    if (!(a == b)) fail(Error::Kind::DomainMismatch, "type mismatch: " + a.to_string() + " vs " + b.to_string(), at);
  }

  void check_fresh(const Token& name) const {
    if ((scope_ && scope_->contains(name.text)) || sig_.find_element(name.text) || sig_.find_set(name.text)) {
      fail(Error::Kind::Semantic, "bound variable '" + name.text + "' shadows a declared name", name);
    }
  }

  // ---- substitutions ----------------------------------------------------

  Subst subst() {
    std::vector<Subst> steps{parallel()};
    while (is_sym(";") && sequence_continues()) {
      ++pos_;
      steps.push_back(parallel());
    }
    return Subst::seq(std::move(steps));
  }

  bool sequence_continues() const {
    const Token& next = peek(1);
    if (next.kind == Token::Kind::Eof || pos_ + 1 >= end_) return false;
    if (next.kind == Token::Kind::Ident && is_sym("=", 2)) return false;
    static const char* const closers[] = {"END", "ELSE", "ELSIF", "WHEN", "OR"};
    return std::none_of(std::begin(closers), std::end(closers), [&](const char* c) { return is_kw(c, 1); });
  }

  Subst parallel() {
    const Token& start = peek();
    std::vector<Subst> branches{atomic()};
    while (accept_sym("||")) branches.push_back(atomic());
    std::set<VarKey> seen;
    for (const auto& b : branches) {
      for (const auto& w : written_vars(b)) {
        if (!seen.insert(w).second) {
          fail(Error::Kind::ParallelClash, "variable '" + w.name + "' assigned in two parallel branches", start);
        }
      }
    }
    return Subst::parallel(std::move(branches));
  }

  Subst atomic() {
    if (accept_kw("skip")) return Subst::skip();
    if (accept_kw("BEGIN")) {
      Subst s = subst();
      expect_kw("END");
      return s;
    }
    if (is_kw("IF") || is_kw("SELECT")) {
      bool is_if = is_kw("IF");
      ++pos_;
      const char* more = is_if ? "ELSIF" : "WHEN";
      std::vector<Term> conds;
      std::vector<Subst> branches;
      do {
        conds.push_back(pred());
        expect_kw("THEN");
        branches.push_back(subst());
      } while (accept_kw(more));
      if (accept_kw("ELSE")) branches.push_back(subst());
      expect_kw("END");
      return is_if ? Subst::if_then(std::move(conds), std::move(branches))
                   : Subst::select(std::move(conds), std::move(branches));
    }
    if (accept_kw("CHOICE")) {
      std::vector<Subst> branches{subst()};
      while (accept_kw("OR")) branches.push_back(subst());
      expect_kw("END");
      return Subst::choice(std::move(branches));
    }
    if (is_kw("ANY")) return any();
    return assignment();
  }

  Subst any() {
    ++pos_;
    std::vector<Token> names{expect_ident()};
    while (accept_sym(",")) names.push_back(expect_ident());
    expect_kw("WHERE");
    std::size_t then = pos_;
    while (then < end_ && !(toks_[then].kind == Token::Kind::Ident && toks_[then].text == "THEN")) ++then;
    std::set<std::string> wanted;
    for (const auto& n : names) {
      check_fresh(n);
      if (!wanted.insert(n.text).second) fail(Error::Kind::Semantic, "duplicate bound variable '" + n.text + "'", n);
    }
    std::map<std::string, Term> sets;
    collect_types(pos_, then, wanted, sets);
    std::vector<Term> bound;
    for (const auto& n : names) {
      auto it = sets.find(n.text);
      if (it == sets.end()) fail(Error::Kind::Semantic, "bound variable '" + n.text + "' has no typing in WHERE", n);
      Term v = Term::var(n.text, element_type(it->second), it->second);
      bound.push_back(v);
      bound_.emplace_back(n.text, v);
    }
    Term where = pred();
    expect_kw("THEN");
    Subst body = subst();
    expect_kw("END");
    bound_.resize(bound_.size() - names.size());
    return Subst::any(std::move(bound), where, body);
  }

  Subst assignment() {
    std::vector<Term> targets;
    std::set<std::string> seen;
    do {
      const Token& t = expect_ident();
      if (t.primed) fail(Error::Kind::Syntax, "cannot assign a primed variable", t);
      bool bound = std::any_of(bound_.begin(), bound_.end(), [&](const auto& b) { return b.first == t.text; });
      auto it = scope_ ? scope_->find(t.text) : VarScope::const_iterator{};
      if (bound || !scope_ || it == scope_->end()) {
        fail(Error::Kind::UnknownIdentifier, "'" + t.text + "' is not a state variable", t);
      }
      if (!seen.insert(t.text).second) fail(Error::Kind::ParallelClash, "variable '" + t.text + "' assigned twice", t);
      targets.push_back(it->second);
    } while (accept_sym(","));
    const Token& op = peek();
    if (accept_sym("::")) {
      if (targets.size() != 1) fail(Error::Kind::Syntax, "'::' takes a single variable", op);
      Term set = set_expr();
      check_types(targets[0].type(), element_type(set), op);
      return Subst::becomes_in(targets[0], set);
    }
    if (!accept_sym(":=")) fail_expected("':=' or '::'");
    std::vector<Term> values{expr()};
    while (accept_sym(",")) values.push_back(expr());
    if (values.size() != targets.size()) fail(Error::Kind::Syntax, "assignment arity mismatch", op);
    for (std::size_t i = 0; i < values.size(); ++i) check_types(targets[i].type(), type_of(values[i]), op);
    return Subst::assign(std::move(targets), std::move(values));
  }

  // Finds `name : S` conjuncts at the top of a conjunction in [begin, end)
  // and records the first set found for each wanted name.
  void collect_types(std::size_t begin, std::size_t end, const std::set<std::string>& wanted,
                     std::map<std::string, Term>& out) {
    while (end - begin >= 2 && toks_[begin].kind == Token::Kind::Sym && toks_[begin].text == "(" &&
           matching_paren(begin, end) == end - 1) {
      ++begin;
      --end;
    }
    std::vector<std::size_t> cuts;
    int depth = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const Token& t = toks_[i];
      if (t.kind == Token::Kind::Ident && depth == 0 && t.text == "or") return;
      if (t.kind != Token::Kind::Sym) continue;
      if (t.text == "(" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "}") --depth;
      if (depth == 0 && t.text == "&") cuts.push_back(i);
      if (depth == 0 && (t.text == "=>" || t.text == "<=>")) return;
    }
    if (!cuts.empty()) {
      std::size_t b = begin;
      for (std::size_t c : cuts) {
        collect_types(b, c, wanted, out);
        b = c + 1;
      }
      collect_types(b, end, wanted, out);
      return;
    }
    if (end - begin < 3) return;
    const Token& name = toks_[begin];
    if (name.kind != Token::Kind::Ident || name.primed || !wanted.contains(name.text) || out.contains(name.text)) return;
    if (!(toks_[begin + 1].kind == Token::Kind::Sym && toks_[begin + 1].text == ":")) return;
    std::size_t save_pos = pos_;
    std::size_t save_end = end_;
    set_range(begin + 2, end);
    try {
      Term set = set_expr();
      if (at_end()) out.emplace(name.text, set);
    } catch (const Error& e) {
      set_range(save_pos, save_end);
      if (e.kind() == Error::Kind::NonFinite) throw;
      return;
    }
    set_range(save_pos, save_end);
  }

 private:
  const Token& eof_at(std::size_t idx) const {
    eof_ = toks_[std::min(idx, toks_.size() - 1)];
    eof_.kind = Token::Kind::Eof;
    eof_.text.clear();
    return eof_;
  }

  const std::vector<Token>& toks_;
  const Signature& sig_;
  std::size_t pos_ = 0;
  std::size_t end_;
  const VarScope* scope_ = nullptr;
  std::vector<std::pair<std::string, Term>> bound_;
  bool allow_primed_ = false;
  const Term* inv_ = nullptr;
  mutable Token eof_;
};

// ---- component structure --------------------------------------------------

struct Header {
  bool refinement = false;
  std::string name;
  std::string refines;
  std::map<std::string, std::pair<std::size_t, std::size_t>> clauses;
};

Header read_header(const std::vector<Token>& toks) {
  Header h;
  auto err = [&](std::size_t i, const std::string& msg) -> Error {
    const Token& t = toks[std::min(i, toks.size() - 1)];
    return Error(Error::Kind::Syntax, msg, t.line, t.column);
  };
  auto ident_at = [&](std::size_t i) {
    if (i >= toks.size() || toks[i].kind != Token::Kind::Ident || toks[i].primed) throw err(i, "expected identifier");
    return toks[i].text;
  };
  std::size_t i = 0;
  std::string kw = toks[0].kind == Token::Kind::Ident ? toks[0].text : "";
  if (kw == "MACHINE" || kw == "SYSTEM") {
    h.name = ident_at(1);
    i = 2;
  } else if (kw == "REFINEMENT") {
    h.refinement = true;
    h.name = ident_at(1);
    if (ident_at(2) != "REFINES") throw err(2, "expected REFINES");
    h.refines = ident_at(3);
    i = 4;
  } else {
    throw err(0, "expected MACHINE or REFINEMENT");
  }
  std::size_t last = toks.size() - 2;
  if (toks.size() < 2 || last < i || toks[last].kind != Token::Kind::Ident || toks[last].text != "END") {
    throw err(toks.size() - 1, "component must finish with END");
  }
  std::string current;
  std::size_t start = i;
  for (std::size_t k = i; k <= last; ++k) {
    const Token& t = toks[k];
    bool boundary = k == last;
    if (!boundary && t.kind == Token::Kind::Ident && !t.primed) {
      if (kUnsupported.contains(t.text)) {
        throw Error(Error::Kind::Syntax, "unsupported clause " + t.text, t.line, t.column);
      }
      boundary = kClauses.contains(t.text);
    }
    if (!boundary) {
      if (current.empty()) throw err(k, "expected a clause keyword");
      continue;
    }
    if (!current.empty()) h.clauses[current] = {start, k};
    if (k == last) break;
    current = t.text == "OPERATIONS" ? "EVENTS" : t.text;
    if (h.clauses.contains(current)) throw Error(Error::Kind::Syntax, "duplicate clause " + t.text, t.line, t.column);
    if (current == "VARIANT" && !h.refinement) {
      throw Error(Error::Kind::Syntax, "VARIANT is only allowed in refinements", t.line, t.column);
    }
    start = k + 1;
  }
  return h;
}

void parse_sets(Parser& p, const Header& h, Signature& sig) {
  auto it = h.clauses.find("SETS");
  if (it == h.clauses.end()) return;
  p.set_range(it->second.first, it->second.second);
  do {
    const Token& name = p.expect_ident();
    if (!p.is_sym("=")) p.fail(Error::Kind::NonFinite, "deferred set '" + name.text + "' is not supported", name);
    p.expect_sym("=");
    p.expect_sym("{");
    SetDecl decl{name.text, {}};
    do {
      const Token& el = p.expect_ident();
      if (sig.find_element(el.text) || sig.find_set(el.text) || el.text == "TRUE" || el.text == "FALSE" ||
          std::find(decl.elements.begin(), decl.elements.end(), el.text) != decl.elements.end()) {
        p.fail(Error::Kind::Semantic, "element '" + el.text + "' declared twice", el);
      }
      decl.elements.push_back(el.text);
    } while (p.accept_sym(","));
    p.expect_sym("}");
    if (sig.find_set(name.text) || name.text == "BOOL") p.fail(Error::Kind::Semantic, "set '" + name.text + "' declared twice", name);
    sig.add_set(std::move(decl));
  } while (p.accept_sym(";"));
  p.expect_end_of_range("SETS");
}

std::vector<Token> parse_variable_names(Parser& p, const Header& h) {
  std::vector<Token> out;
  auto it = h.clauses.find("VARIABLES");
  if (it == h.clauses.end()) return out;
  p.set_range(it->second.first, it->second.second);
  std::set<std::string> seen;
  do {
    const Token& t = p.expect_ident();
    if (!seen.insert(t.text).second) p.fail(Error::Kind::Semantic, "variable '" + t.text + "' declared twice", t);
    out.push_back(t);
  } while (p.accept_sym(","));
  p.expect_end_of_range("VARIABLES");
  return out;
}

// Declares `names` in `sig` with the types found in the INVARIANT clause;
// `renames` maps written names to stored names.
VarScope declare_variables(Parser& p, const Header& h, const std::vector<Token>& names, Signature& sig,
                           const std::map<std::string, std::string>& renames) {
  std::set<std::string> wanted;
  for (const auto& n : names) {
    if (sig.find_set(n.text) || sig.find_element(n.text) || n.text == "TRUE" || n.text == "FALSE") {
      p.fail(Error::Kind::Semantic, "variable '" + n.text + "' clashes with a set or element", n);
    }
    wanted.insert(n.text);
  }
  std::map<std::string, Term> sets;
  auto inv = h.clauses.find("INVARIANT");
  if (inv != h.clauses.end()) p.collect_types(inv->second.first, inv->second.second, wanted, sets);
  VarScope scope;
  for (const auto& n : names) {
    auto it = sets.find(n.text);
    if (it == sets.end()) p.fail(Error::Kind::Semantic, "variable '" + n.text + "' has no typing conjunct in INVARIANT", n);
    Term set = simplify(it->second);
    if (set.op() == Op::Interval && (set.arg(0).op() != Op::Int || set.arg(1).op() != Op::Int)) {
      p.fail(Error::Kind::NonFinite, "interval bounds of '" + n.text + "' must be constant", n);
    }
    auto rn = renames.find(n.text);
    std::string stored = rn == renames.end() ? n.text : rn->second;
    VarDecl decl{stored, element_type(set), set};
    scope.emplace(n.text, decl.as_term());
    sig.add_variable(std::move(decl));
  }
  return scope;
}

Term parse_clause_pred(Parser& p, const Header& h, const char* clause, Term fallback) {
  auto it = h.clauses.find(clause);
  if (it == h.clauses.end()) return fallback;
  p.set_range(it->second.first, it->second.second);
  Term t = p.pred();
  p.expect_end_of_range(clause);
  return t;
}

Subst parse_initialisation(Parser& p, const Header& h) {
  auto it = h.clauses.find("INITIALISATION");
  if (it == h.clauses.end()) throw Error(Error::Kind::Syntax, "missing INITIALISATION clause");
  p.set_range(it->second.first, it->second.second);
  Subst s = p.subst();
  p.expect_end_of_range("INITIALISATION");
  return s;
}

std::vector<Event> parse_events(Parser& p, const Header& h) {
  std::vector<Event> out;
  auto it = h.clauses.find("EVENTS");
  if (it == h.clauses.end()) return out;
  p.set_range(it->second.first, it->second.second);
  if (p.at_end()) return out;
  do {
    if (p.at_end()) break;
    const Token& name = p.expect_ident();
    if (name.text == "INITIALISATION") p.fail(Error::Kind::Semantic, "reserved event name", name);
    if (p.is_sym("(")) p.fail(Error::Kind::Syntax, "operation parameters are not supported", name);
    for (const auto& e : out) {
      if (e.name == name.text) p.fail(Error::Kind::Semantic, "event '" + name.text + "' declared twice", name);
    }
    p.expect_sym("=");
    out.push_back(Event{name.text, p.subst()});
  } while (p.accept_sym(";"));
  p.expect_end_of_range("EVENTS");
  return out;
}

std::vector<Term> split_disjunction(const Term& t) {
  if (t.op() == Op::Or) return {t.args().begin(), t.args().end()};
  return {t};
}

MachineModel build_machine(const std::vector<Token>& toks, const Header& h,
                           const std::map<std::string, std::string>& renames) {
  MachineModel m;
  m.name = h.name;
  Parser p(toks, m.signature);
  parse_sets(p, h, m.signature);
  auto names = parse_variable_names(p, h);
  VarScope scope = declare_variables(p, h, names, m.signature, renames);
  p.set_scope(&scope);
  m.invariant = parse_clause_pred(p, h, "INVARIANT", Term::truth(true));
  auto asrt = h.clauses.find("ASSERTIONS");
  if (asrt != h.clauses.end()) m.assertions = split_disjunction(parse_clause_pred(p, h, "ASSERTIONS", {}));
  m.initialisation = parse_initialisation(p, h);
  m.events = parse_events(p, h);
  return m;
}

std::vector<Token> lex_checked(const std::string& source) {
  auto toks = lex(source);
  if (toks.size() < 2) throw Error(Error::Kind::Syntax, "empty component", 1, 1);
  return toks;
}

MachineModel machine_from_source(const std::string& source, const std::map<std::string, std::string>& renames) {
  auto toks = lex_checked(source);
  Header h = read_header(toks);
  if (h.refinement) throw Error(Error::Kind::Semantic, "expected a MACHINE, found REFINEMENT " + h.name);
  return build_machine(toks, h, renames);
}

// Parses the ASSERTIONS clause of a refinement: a conjunction of
// `abstract <=> (sub_1 or ... or sub_k)`.
void parse_decompositions(Parser& p, const Header& h, const VarScope& abstract_scope, const VarScope& concrete_scope,
                          RefinementModel& r) {
  auto it = h.clauses.find("ASSERTIONS");
  if (it == h.clauses.end()) return;
  p.set_range(it->second.first, it->second.second);
  auto encloses_equivalence = [&](std::size_t open) {
    std::size_t close = p.matching_paren(open, p.end());
    int depth = 0;
    for (std::size_t i = open + 1; i < close; ++i) {
      const Token& t = p.peek(i - p.pos());
      if (t.kind != Token::Kind::Sym) continue;
      if (t.text == "(" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "}") --depth;
      if (depth == 0 && t.text == "<=>") return true;
    }
    return false;
  };
  std::function<void()> decomposition = [&]() {
    if (p.is_sym("(") && encloses_equivalence(p.pos())) {
      p.expect_sym("(");
      decomposition();
      p.expect_sym(")");
      return;
    }
    p.set_scope(&abstract_scope);
    Term lhs = p.implication();
    const Token& op = p.peek();
    if (!p.accept_sym("<=>")) {
      p.fail(Error::Kind::Syntax, "refinement assertions must be a conjunction of equivalences", op);
    }
    p.set_scope(&concrete_scope);
    Term rhs = p.implication();
    DecompositionSpec d{lhs, {}};
    for (const auto& sub : split_disjunction(rhs)) {
      auto found = std::find(r.concrete.assertions.begin(), r.concrete.assertions.end(), sub);
      if (found == r.concrete.assertions.end()) {
        r.concrete.assertions.push_back(sub);
        found = r.concrete.assertions.end() - 1;
      }
      d.substates.push_back(static_cast<std::size_t>(found - r.concrete.assertions.begin()));
    }
    r.decompositions.push_back(std::move(d));
  };
  do {
    decomposition();
  } while (p.accept_sym("&"));
  p.expect_end_of_range("ASSERTIONS");
}

RefinementModel build_refinement(const std::vector<Token>& toks, const Header& h, const std::string& abstraction_source) {
  RefinementModel r;
  MachineModel plain = machine_from_source(abstraction_source, {});
  if (plain.name != h.refines) {
    throw Error(Error::Kind::Semantic, "REFINES " + h.refines + " but the abstraction is named " + plain.name);
  }
  Signature scratch;
  Parser pre(toks, scratch);
  auto names = parse_variable_names(pre, h);
  std::set<std::string> concrete_names;
  for (const auto& n : names) concrete_names.insert(n.text);
  std::map<std::string, std::string> renames;
  for (const auto& v : plain.signature.variables()) {
    if (!concrete_names.contains(v.name)) continue;
    std::string rn = "abs_" + v.name;
    if (concrete_names.contains(rn) || plain.signature.find_variable(rn)) {
      throw Error(Error::Kind::Semantic, "cannot rename abstract variable " + v.name + ": " + rn + " is taken");
    }
    renames.emplace(v.name, rn);
    r.renamed.emplace_back(v.name, rn);
  }
  r.abstraction = renames.empty() ? std::move(plain) : machine_from_source(abstraction_source, renames);

  MachineModel& m = r.concrete;
  m.name = h.name;
  for (const auto& s : r.abstraction.signature.sets()) m.signature.add_set(s);
  Parser p(toks, m.signature);
  parse_sets(p, h, m.signature);
  VarScope concrete = declare_variables(p, h, names, m.signature, {});

  VarScope abstract;
  VarScope joint = concrete;
  for (const auto& v : r.abstraction.signature.variables()) {
    std::string written = v.name;
    for (const auto& [orig, rn] : r.renamed) {
      if (rn == v.name) written = orig;
    }
    abstract.emplace(written, v.as_term());
    joint.emplace(v.name, v.as_term());
  }
  p.set_scope(&joint);
  Term j = parse_clause_pred(p, h, "INVARIANT", Term::truth(true));
  if (!r.renamed.empty()) {
    std::vector<Term> parts;
    if (j.op() == Op::And) {
      parts.assign(j.args().begin(), j.args().end());
    } else {
      parts.push_back(j);
    }
    for (const auto& [orig, rn] : r.renamed) {
      parts.push_back(Term::eq(r.abstraction.signature.find_variable(rn)->as_term(), concrete.at(orig)));
    }
    j = Term::conj(std::move(parts));
  }
  m.invariant = j;

  parse_decompositions(p, h, abstract, concrete, r);
  p.set_scope(&concrete);
  auto var = h.clauses.find("VARIANT");
  if (var != h.clauses.end()) {
    p.set_range(var->second.first, var->second.second);
    const Token& at = p.peek();
    Term v = p.expr();
    p.expect_end_of_range("VARIANT");
    p.check_types(Parser::type_of(v), Type::integer(), at);
    r.variant = v;
  }
  m.initialisation = parse_initialisation(p, h);
  m.events = parse_events(p, h);

  auto abstract_events = interface_of(r.abstraction);
  auto concrete_events = interface_of(m);
  for (const auto& e : abstract_events) {
    if (!concrete_events.contains(e)) throw Error(Error::Kind::Semantic, "abstract event " + e + " is not refined");
  }
  for (const auto& e : m.events) {
    if (!abstract_events.contains(e.name)) r.new_events.push_back(e.name);
  }
  return r;
}

}  // namespace

Component parse_component(const std::string& source, const SourceResolver& resolver) {
  auto toks = lex_checked(source);
  Header h = read_header(toks);
  if (!h.refinement) return build_machine(toks, h, {});
  std::optional<std::string> abs = resolver ? resolver(h.refines) : std::nullopt;
  if (!abs) throw Error(Error::Kind::Io, "cannot locate abstraction " + h.refines);
  return build_refinement(toks, h, *abs);
}

MachineModel parse_machine(const std::string& source) { return machine_from_source(source, {}); }

RefinementModel parse_refinement(const std::string& source, const std::string& abstraction_source) {
  auto toks = lex_checked(source);
  Header h = read_header(toks);
  if (!h.refinement) throw Error(Error::Kind::Semantic, "expected a REFINEMENT, found MACHINE " + h.name);
  return build_refinement(toks, h, abstraction_source);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Kind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Component load_component(const std::filesystem::path& path, const std::optional<std::filesystem::path>& abstraction_path) {
  std::string source = read_file(path);
  SourceResolver resolver = [&](const std::string& name) -> std::optional<std::string> {
    if (abstraction_path) return read_file(*abstraction_path);
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const auto& candidate : {name + ".mch", lower + ".mch"}) {
      auto p = path.parent_path() / candidate;
      if (std::filesystem::exists(p)) return read_file(p);
    }
    return std::nullopt;
  };
  return parse_component(source, resolver);
}

Term parse_predicate(const std::string& text, const Signature& sig, const Term* inv) {
  auto toks = lex(text);
  Parser p(toks, sig);
  VarScope scope;
  for (const auto& v : sig.variables()) scope.emplace(v.name, v.as_term());
  p.set_scope(&scope);
  p.set_allow_primed(true);
  p.set_inv(inv);
  p.set_range(0, toks.size() - 1);
  Term t = p.pred();
  p.expect_end_of_range("predicate");
  return t;
}

}  // namespace eventb
