// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT

#include "ckmu/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_set>
#include <utility>

namespace ckmu {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

bool is_keyword(const std::string& s) {
  return s == "mu" || s == "nu" || s == "top" || s == "bot";
}

bool is_ident(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return !is_keyword(s);
}

void require_ident(const std::string& s, const char* role) {
  if (!is_ident(s))
    throw FormulaError(std::string(role) + " name '" + s +
                       "' is not a valid identifier ([A-Za-z][A-Za-z0-9_]*, not a keyword)");
}

bool has_free(const FormulaPtr& f, const std::string& x) {
  const auto& fv = f->free_vars();
  return std::binary_search(fv.begin(), fv.end(), x);
}

/// Pre-order walk over all node positions (shared subtrees visited per position).
template <class Fn>
void walk(const FormulaPtr& f, Fn&& fn) {
  fn(f);
  if (f->lhs()) walk(f->lhs(), fn);
  if (f->rhs()) walk(f->rhs(), fn);
}

}  // namespace

// ---- node construction -----------------------------------------------------

Formula::Formula(Kind k, std::string name, FormulaPtr l, FormulaPtr r)
    : kind_(k), name_(std::move(name)), lhs_(std::move(l)), rhs_(std::move(r)) {
  size_ = 1 + (lhs_ ? lhs_->size_ : 0) + (rhs_ ? rhs_->size_ : 0);

  const bool modal = k == Kind::Box || k == Kind::Dia || k == Kind::Mu || k == Kind::Nu;
  depth_ = (modal ? 1 : 0) +
           std::max(lhs_ ? lhs_->depth_ : 0, rhs_ ? rhs_->depth_ : 0);

  hash_ = mix(static_cast<std::size_t>(kind_) + 0x9e, std::hash<std::string>{}(name_));
  if (lhs_) hash_ = mix(hash_, lhs_->hash_);
  if (rhs_) hash_ = mix(hash_, rhs_->hash_);

  switch (kind_) {
    case Kind::Var:
      free_vars_.push_back(name_);
      break;
    case Kind::Mu:
    case Kind::Nu:
      for (const auto& v : lhs_->free_vars_)
        if (v != name_) free_vars_.push_back(v);
      break;
    default:
      if (lhs_) free_vars_ = lhs_->free_vars_;
      if (rhs_) {
        std::vector<std::string> merged;
        std::set_union(free_vars_.begin(), free_vars_.end(),
                       rhs_->free_vars_.begin(), rhs_->free_vars_.end(),
                       std::back_inserter(merged));
        free_vars_ = std::move(merged);
      }
      break;
  }
}

FormulaPtr make_node(Kind k, std::string name, FormulaPtr l, FormulaPtr r) {
  return FormulaPtr(new Formula(k, std::move(name), std::move(l), std::move(r)));
}

FormulaPtr prop(std::string name) {
  require_ident(name, "proposition");
  return make_node(Kind::Prop, std::move(name), nullptr, nullptr);
}

FormulaPtr var(std::string name) {
  require_ident(name, "variable");
  return make_node(Kind::Var, std::move(name), nullptr, nullptr);
}

FormulaPtr bot() { return make_node(Kind::Bot, "", nullptr, nullptr); }
FormulaPtr top() { return make_node(Kind::Top, "", nullptr, nullptr); }

FormulaPtr neg(FormulaPtr f) { return make_node(Kind::Neg, "", std::move(f), nullptr); }
FormulaPtr box(FormulaPtr f) { return make_node(Kind::Box, "", std::move(f), nullptr); }
FormulaPtr dia(FormulaPtr f) { return make_node(Kind::Dia, "", std::move(f), nullptr); }

FormulaPtr conj(FormulaPtr l, FormulaPtr r) {
  return make_node(Kind::And, "", std::move(l), std::move(r));
}
FormulaPtr disj(FormulaPtr l, FormulaPtr r) {
  return make_node(Kind::Or, "", std::move(l), std::move(r));
}
FormulaPtr imp(FormulaPtr l, FormulaPtr r) {
  return make_node(Kind::Imp, "", std::move(l), std::move(r));
}

static FormulaPtr make_binder(Kind k, std::string x, FormulaPtr body) {
  require_ident(x, "bound variable");
  Polarity p = polarity(body, x);
  if (p != Polarity::Positive && p != Polarity::Both)
    throw FormulaError("variable '" + x + "' is not positive in '" + print(body) +
                       "'; fixed points require a positive body");
  return make_node(k, std::move(x), std::move(body), nullptr);
}

FormulaPtr mu(std::string x, FormulaPtr body) {
  return make_binder(Kind::Mu, std::move(x), std::move(body));
}
FormulaPtr nu(std::string x, FormulaPtr body) {
  return make_binder(Kind::Nu, std::move(x), std::move(body));
}

// ---- structural queries ----------------------------------------------------

bool equal(const Formula& a, const Formula& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name())
    return false;
  const Formula* al = a.lhs().get();
  const Formula* bl = b.lhs().get();
  if ((al == nullptr) != (bl == nullptr)) return false;
  if (al && !equal(*al, *bl)) return false;
  const Formula* ar = a.rhs().get();
  const Formula* br = b.rhs().get();
  if ((ar == nullptr) != (br == nullptr)) return false;
  if (ar && !equal(*ar, *br)) return false;
  return true;
}

namespace {

// Polarity propagation: a pair (pos, neg) meaning "every free occurrence of x
// sits at even parity" / "... at odd parity". Both bits hold exactly when x
// does not occur free; neither bit holds when occurrences mix parities.
struct Pol {
  bool pos, neg;
};

Pol pol(const FormulaPtr& f, const std::string& x) {
  if (!has_free(f, x)) return {true, true};
  switch (f->kind()) {
    case Kind::Var:
      return {true, false};
    case Kind::Neg: {
      Pol p = pol(f->lhs(), x);
      return {p.neg, p.pos};
    }
    case Kind::And:
    case Kind::Or: {
      Pol a = pol(f->lhs(), x);
      Pol b = pol(f->rhs(), x);
      return {a.pos && b.pos, a.neg && b.neg};
    }
    case Kind::Imp: {
      Pol a = pol(f->lhs(), x);  // antecedent flips parity
      Pol b = pol(f->rhs(), x);
      return {a.neg && b.pos, a.pos && b.neg};
    }
    case Kind::Box:
    case Kind::Dia:
    case Kind::Mu:  // binder over a different variable (x free here)
    case Kind::Nu:
      return pol(f->lhs(), x);
    default:
      return {true, true};  // leaves without x (unreachable past has_free)
  }
}

}  // namespace

Polarity polarity(const FormulaPtr& f, const std::string& x) {
  Pol p = pol(f, x);
  if (p.pos && p.neg) return Polarity::Both;
  if (p.pos) return Polarity::Positive;
  if (p.neg) return Polarity::Negative;
  return Polarity::Neither;
}

std::vector<FormulaPtr> subformulas(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  std::unordered_set<const Formula*, StructHash, StructEq> seen;
  // Recursive pre-order; a structurally repeated subtree is not re-entered
  // (its first occurrence already enumerated every descendant).
  auto visit = [&](auto&& self, const FormulaPtr& g) -> void {
    if (!seen.insert(g.get()).second) return;
    out.push_back(g);
    if (g->lhs()) self(self, g->lhs());
    if (g->rhs()) self(self, g->rhs());
  };
  visit(visit, f);
  return out;
}

std::set<std::string> prop_names(const FormulaPtr& f) {
  std::set<std::string> out;
  walk(f, [&](const FormulaPtr& g) {
    if (g->kind() == Kind::Prop) out.insert(g->name());
  });
  return out;
}

bool is_modal(const FormulaPtr& f) {
  bool ok = true;
  walk(f, [&](const FormulaPtr& g) {
    if (g->kind() == Kind::Mu || g->kind() == Kind::Nu) ok = false;
  });
  return ok;
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& x, const FormulaPtr& g) {
  if (!has_free(f, x)) return f;
  switch (f->kind()) {
    case Kind::Var:
      return g;  // name == x, or x would not be free here
    case Kind::Neg:
      return neg(substitute(f->lhs(), x, g));
    case Kind::Box:
      return box(substitute(f->lhs(), x, g));
    case Kind::Dia:
      return dia(substitute(f->lhs(), x, g));
    case Kind::And: {
      FormulaPtr l = substitute(f->lhs(), x, g);
      FormulaPtr r = substitute(f->rhs(), x, g);
      return conj(std::move(l), std::move(r));
    }
    case Kind::Or: {
      FormulaPtr l = substitute(f->lhs(), x, g);
      FormulaPtr r = substitute(f->rhs(), x, g);
      return disj(std::move(l), std::move(r));
    }
    case Kind::Imp: {
      FormulaPtr l = substitute(f->lhs(), x, g);
      FormulaPtr r = substitute(f->rhs(), x, g);
      return imp(std::move(l), std::move(r));
    }
    case Kind::Mu:
    case Kind::Nu: {
      // f->name() != x (otherwise x is not free in f).
      if (has_free(g, f->name()))
        throw FormulaError("substituting for '" + x + "' would capture '" +
                           f->name() + "' under its binder");
      FormulaPtr body = substitute(f->lhs(), x, g);
      return f->kind() == Kind::Mu ? mu(f->name(), std::move(body))
                                   : nu(f->name(), std::move(body));
    }
    default:
      return f;  // leaves (unreachable past has_free)
  }
}

// ---- well-naming -----------------------------------------------------------

namespace {

/// Every free occurrence of x in f lies under a modality (within f)?
bool guarded_in(const FormulaPtr& f, const std::string& x, bool under_modal) {
  if (!has_free(f, x)) return true;
  switch (f->kind()) {
    case Kind::Var:
      return under_modal;
    case Kind::Neg:
      return guarded_in(f->lhs(), x, under_modal);
    case Kind::And:
    case Kind::Or:
    case Kind::Imp:
      return guarded_in(f->lhs(), x, under_modal) &&
             guarded_in(f->rhs(), x, under_modal);
    case Kind::Box:
    case Kind::Dia:
      return guarded_in(f->lhs(), x, true);
    case Kind::Mu:
    case Kind::Nu:
      return guarded_in(f->lhs(), x, under_modal);  // name != x past has_free
    default:
      return true;
  }
}

int free_occ_count(const FormulaPtr& f, const std::string& x) {
  if (!has_free(f, x)) return 0;
  if (f->kind() == Kind::Var) return 1;
  int n = 0;
  if (f->lhs()) n += free_occ_count(f->lhs(), x);
  if (f->rhs()) n += free_occ_count(f->rhs(), x);
  return n;
}

}  // namespace

bool is_guarded(const FormulaPtr& f) {
  bool ok = true;
  walk(f, [&](const FormulaPtr& g) {
    if (!ok) return;
    if (g->kind() == Kind::Mu || g->kind() == Kind::Nu)
      ok = guarded_in(g->lhs(), g->name(), false);
  });
  return ok;
}

bool is_well_named(const FormulaPtr& f) {
  if (!is_guarded(f)) return false;
  std::map<std::string, int> binders;
  bool occ_ok = true;
  walk(f, [&](const FormulaPtr& g) {
    if (g->kind() == Kind::Mu || g->kind() == Kind::Nu) {
      ++binders[g->name()];
      if (free_occ_count(g->lhs(), g->name()) > 1) occ_ok = false;
    }
  });
  if (!occ_ok) return false;
  for (const auto& [name, count] : binders) {
    if (count > 1) return false;
    if (has_free(f, name)) return false;  // bound names disjoint from free names
  }
  return true;
}

namespace {

/// Fresh-name supply for well_name: never reuses a name assigned to another
/// binder, a free variable of the input, or a proposition of the input.
class NameSupply {
 public:
  explicit NameSupply(const FormulaPtr& root) {
    for (const auto& v : root->free_vars()) blocked_.insert(v);
    for (const auto& p : prop_names(root)) blocked_.insert(p);
  }

  std::string fresh(const std::string& base) {
    std::string cand = base;
    for (int i = 1; blocked_.count(cand) || assigned_.count(cand); ++i)
      cand = base + "_" + std::to_string(i);
    assigned_.insert(cand);
    return cand;
  }

 private:
  std::set<std::string> blocked_;
  std::set<std::string> assigned_;
};

/// Rename the i-th free occurrence (pre-order) of x in f to names[i].
FormulaPtr rename_occurrences(const FormulaPtr& f, const std::string& x,
                              const std::vector<std::string>& names,
                              std::size_t& idx) {
  if (!has_free(f, x)) return f;
  switch (f->kind()) {
    case Kind::Var:
      return var(names.at(idx++));
    case Kind::Neg:
      return neg(rename_occurrences(f->lhs(), x, names, idx));
    case Kind::Box:
      return box(rename_occurrences(f->lhs(), x, names, idx));
    case Kind::Dia:
      return dia(rename_occurrences(f->lhs(), x, names, idx));
    case Kind::And:
    case Kind::Or:
    case Kind::Imp: {
      FormulaPtr l = rename_occurrences(f->lhs(), x, names, idx);
      FormulaPtr r = rename_occurrences(f->rhs(), x, names, idx);
      if (f->kind() == Kind::And) return conj(std::move(l), std::move(r));
      if (f->kind() == Kind::Or) return disj(std::move(l), std::move(r));
      return imp(std::move(l), std::move(r));
    }
    case Kind::Mu:
    case Kind::Nu: {
      FormulaPtr body = rename_occurrences(f->lhs(), x, names, idx);
      return f->kind() == Kind::Mu ? mu(f->name(), std::move(body))
                                   : nu(f->name(), std::move(body));
    }
    default:
      return f;
  }
}

FormulaPtr wn_rec(const FormulaPtr& f,
                  std::map<std::string, std::string>& env, NameSupply& supply) {
  switch (f->kind()) {
    case Kind::Prop:
    case Kind::Top:
    case Kind::Bot:
      return f;
    case Kind::Var: {
      auto it = env.find(f->name());
      return it == env.end() ? f : var(it->second);
    }
    case Kind::Neg:
      return neg(wn_rec(f->lhs(), env, supply));
    case Kind::Box:
      return box(wn_rec(f->lhs(), env, supply));
    case Kind::Dia:
      return dia(wn_rec(f->lhs(), env, supply));
    case Kind::And:
    case Kind::Or:
    case Kind::Imp: {
      FormulaPtr l = wn_rec(f->lhs(), env, supply);
      FormulaPtr r = wn_rec(f->rhs(), env, supply);
      if (f->kind() == Kind::And) return conj(std::move(l), std::move(r));
      if (f->kind() == Kind::Or) return disj(std::move(l), std::move(r));
      return imp(std::move(l), std::move(r));
    }
    case Kind::Mu:
    case Kind::Nu: {
      const bool is_mu = f->kind() == Kind::Mu;
      const std::string n1 = supply.fresh(f->name());

      auto it = env.find(f->name());
      const bool had = it != env.end();
      const std::string old = had ? it->second : std::string();
      env[f->name()] = n1;
      FormulaPtr body = wn_rec(f->lhs(), env, supply);
      if (had)
        env[f->name()] = old;
      else
        env.erase(f->name());

      // A variable with k > 1 occurrences is split across k nested binders,
      // one occurrence each: eta X. body(X,...,X) becomes
      // eta X. eta X_2. ... body(X, X_2, ...), the diagonal law.
      const int k = free_occ_count(body, n1);
      std::vector<std::string> names{n1};
      for (int i = 1; i < k; ++i) names.push_back(supply.fresh(f->name()));
      if (k > 1) {
        std::size_t idx = 0;
        body = rename_occurrences(body, n1, names, idx);
      }
      FormulaPtr out = std::move(body);
      for (auto nit = names.rbegin(); nit != names.rend(); ++nit)
        out = is_mu ? mu(*nit, std::move(out)) : nu(*nit, std::move(out));
      return out;
    }
  }
  throw FormulaError("well_name: unknown node kind");
}

}  // namespace

FormulaPtr well_name(const FormulaPtr& f) {
  if (!is_guarded(f))
    throw FormulaError("cannot well-name an unguarded formula: " + print(f));
  NameSupply supply(f);
  std::map<std::string, std::string> env;
  FormulaPtr out = wn_rec(f, env, supply);
  if (!is_well_named(out))
    throw FormulaError("well_name: internal error, output is not well-named: " + print(out));
  return out;
}

// ---- fixed-point table -----------------------------------------------------

namespace {

void collect_fixpoints(const FormulaPtr& f, int parity, FixpointTable& out) {
  switch (f->kind()) {
    case Kind::Mu:
    case Kind::Nu:
      out.push_back({f, f->kind(), f->name(), f->lhs(), parity & 1, f->size()});
      collect_fixpoints(f->lhs(), parity, out);
      return;
    case Kind::Neg:
      collect_fixpoints(f->lhs(), parity + 1, out);
      return;
    case Kind::Imp:
      collect_fixpoints(f->lhs(), parity + 1, out);  // antecedent swaps roles
      collect_fixpoints(f->rhs(), parity, out);
      return;
    default:
      if (f->lhs()) collect_fixpoints(f->lhs(), parity, out);
      if (f->rhs()) collect_fixpoints(f->rhs(), parity, out);
      return;
  }
}

}  // namespace

FixpointTable fixpoint_table(const FormulaPtr& f) {
  if (!is_well_named(f))
    throw FormulaError("fixpoint_table requires a well-named formula: " + print(f));
  FixpointTable out;
  collect_fixpoints(f, 0, out);
  // Outer binders first: sizes strictly shrink along nesting, so a
  // non-increasing sort by size puts every binder before those it encloses;
  // stability keeps unrelated equal-sized binders in pre-order.
  std::stable_sort(out.begin(), out.end(),
                   [](const FixpointEntry& a, const FixpointEntry& b) {
                     return a.size > b.size;
                   });
  return out;
}

// ---- concrete syntax: printing ---------------------------------------------

namespace {

// Precedence levels, loosest to tightest. A node is parenthesized when its
// level is below the minimum its context requires.
int level(const Formula& f) {
  switch (f.kind()) {
    case Kind::Mu:
    case Kind::Nu:
      return 0;
    case Kind::Imp:
      return 1;
    case Kind::Or:
      return 2;
    case Kind::And:
      return 3;
    case Kind::Neg:
    case Kind::Box:
    case Kind::Dia:
      return 4;
    default:
      return 5;
  }
}

void print_rec(const FormulaPtr& f, int min_level, std::string& out) {
  if (level(*f) < min_level) {
    out += '(';
    print_rec(f, 0, out);
    out += ')';
    return;
  }
  switch (f->kind()) {
    case Kind::Prop:
    case Kind::Var:
      out += f->name();
      return;
    case Kind::Top:
      out += "top";
      return;
    case Kind::Bot:
      out += "bot";
      return;
    case Kind::Neg:
      out += '~';
      print_rec(f->lhs(), 4, out);
      return;
    case Kind::Box:
      out += "[] ";
      print_rec(f->lhs(), 4, out);
      return;
    case Kind::Dia:
      out += "<> ";
      print_rec(f->lhs(), 4, out);
      return;
    case Kind::And:
      print_rec(f->lhs(), 3, out);  // left associative
      out += " /\\ ";
      print_rec(f->rhs(), 4, out);
      return;
    case Kind::Or:
      print_rec(f->lhs(), 2, out);  // left associative
      out += " \\/ ";
      print_rec(f->rhs(), 3, out);
      return;
    case Kind::Imp:
      print_rec(f->lhs(), 2, out);  // right associative
      out += " -> ";
      print_rec(f->rhs(), 1, out);
      return;
    case Kind::Mu:
    case Kind::Nu:
      out += f->kind() == Kind::Mu ? "mu " : "nu ";
      out += f->name();
      out += ". ";
      print_rec(f->lhs(), 0, out);
      return;
  }
}

}  // namespace

std::string print(const FormulaPtr& f) {
  std::string out;
  print_rec(f, 0, out);
  return out;
}

// ---- concrete syntax: parsing ----------------------------------------------

namespace {

enum class Tok {
  LParen, RParen, Dot, Arrow, OrOp, AndOp, NegOp, BoxOp, DiaOp,
  MuKw, NuKw, TopKw, BotKw, Ident, End,
};

struct Token {
  Tok t;
  std::string text;
  std::size_t off;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto two = [&](char second, Tok t, const char* pair) {
    if (i + 1 >= s.size() || s[i + 1] != second)
      throw ParseError(std::string("expected '") + pair + "'", i);
    out.push_back({t, pair, i});
    i += 2;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", i}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", i}); ++i; continue;
      case '.': out.push_back({Tok::Dot, ".", i}); ++i; continue;
      case '~': out.push_back({Tok::NegOp, "~", i}); ++i; continue;
      case '-': two('>', Tok::Arrow, "->"); continue;
      case '\\': two('/', Tok::OrOp, "\\/"); continue;
      case '/': two('\\', Tok::AndOp, "/\\"); continue;
      case '[': two(']', Tok::BoxOp, "[]"); continue;
      case '<': two('>', Tok::DiaOp, "<>"); continue;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      std::string word = s.substr(i, j - i);
      Tok t = Tok::Ident;
      if (word == "mu") t = Tok::MuKw;
      else if (word == "nu") t = Tok::NuKw;
      else if (word == "top") t = Tok::TopKw;
      else if (word == "bot") t = Tok::BotKw;
      out.push_back({t, std::move(word), i});
      i = j;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  FormulaPtr run() {
    FormulaPtr f = expr();
    if (!at(Tok::End))
      throw ParseError("unexpected input after formula: '" + cur().text + "'",
                       cur().off);
    return f;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok t) const { return cur().t == t; }
  bool at_binder() const { return at(Tok::MuKw) || at(Tok::NuKw); }
  void advance() { ++pos_; }

  Token expect(Tok t, const char* what) {
    if (!at(t))
      throw ParseError(std::string("expected ") + what + ", found '" +
                           (at(Tok::End) ? "end of input" : cur().text) + "'",
                       cur().off);
    Token tok = cur();
    advance();
    return tok;
  }

  FormulaPtr expr() {
    if (at_binder()) return binder();
    return implication();
  }

  FormulaPtr binder() {
    const bool is_mu = at(Tok::MuKw);
    advance();
    Token id = expect(Tok::Ident, "an identifier after the binder keyword");
    expect(Tok::Dot, "'.' after the bound variable");
    bound_.push_back(id.text);
    FormulaPtr body = expr();  // binder scope extends maximally right
    bound_.pop_back();
    return is_mu ? mu(id.text, std::move(body)) : nu(id.text, std::move(body));
  }

  FormulaPtr implication() {
    FormulaPtr l = disjunction();
    if (at(Tok::Arrow)) {
      advance();
      FormulaPtr r = expr();  // right associative; RHS may be a binder
      return imp(std::move(l), std::move(r));
    }
    return l;
  }

  FormulaPtr disjunction() {
    FormulaPtr acc = conjunction();
    while (at(Tok::OrOp)) {
      advance();
      FormulaPtr r = at_binder() ? expr() : conjunction();
      acc = disj(std::move(acc), std::move(r));
    }
    return acc;
  }

  FormulaPtr conjunction() {
    FormulaPtr acc = unary();
    while (at(Tok::AndOp)) {
      advance();
      FormulaPtr r = at_binder() ? expr() : unary();
      acc = conj(std::move(acc), std::move(r));
    }
    return acc;
  }

  FormulaPtr unary() {
    if (at(Tok::NegOp)) {
      advance();
      return neg(unary());
    }
    if (at(Tok::BoxOp)) {
      advance();
      return box(unary());
    }
    if (at(Tok::DiaOp)) {
      advance();
      return dia(unary());
    }
    return primary();
  }

  FormulaPtr primary() {
    switch (cur().t) {
      case Tok::TopKw:
        advance();
        return top();
      case Tok::BotKw:
        advance();
        return bot();
      case Tok::Ident: {
        Token id = cur();
        advance();
        const bool is_bound =
            std::find(bound_.rbegin(), bound_.rend(), id.text) != bound_.rend();
        return is_bound ? var(id.text) : prop(id.text);
      }
      case Tok::LParen: {
        advance();
        FormulaPtr f = expr();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::MuKw:
      case Tok::NuKw:
        throw ParseError(
            "a binder directly under '~', '[]' or '<>' must be parenthesized",
            cur().off);
      default:
        throw ParseError("expected a formula, found '" +
                             (at(Tok::End) ? "end of input" : cur().text) + "'",
                         cur().off);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
};

}  // namespace

FormulaPtr parse(const std::string& text) { return Parser(lex(text)).run(); }

}  // namespace ckmu
