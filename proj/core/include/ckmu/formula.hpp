// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT
//
// Formula ASTs for the constructive modal mu-calculus:
//
//   phi ::= P | X | bot | top | ~phi | phi /\ phi | phi \/ phi | phi -> phi
//         | [] phi | <> phi | mu X. phi | nu X. phi
//
// Negation is a first-class connective: there is no constructive negation
// normal form (~<>~phi is not equivalent to []phi, and P is not equivalent
// to ~~P), so nothing here rewrites negations away. Fixed-point binders can
// only be constructed when the bound variable is positive in the body.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckmu {

class Formula;

/// Formulas are immutable and shared; all APIs traffic in FormulaPtr.
using FormulaPtr = std::shared_ptr<const Formula>;

/// Error raised by formula construction and transformation (binder
/// positivity violations, variable capture, unguarded inputs, ...).
struct FormulaError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Syntax error from parse(); carries a 0-based byte offset into the input.
struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& what, std::size_t off)
      : std::runtime_error(what), offset(off) {}
};

/// Node kinds. Prop and Var are distinct: propositions are interpreted by a
/// model's valuation, variables by a fixed-point assignment.
enum class Kind : std::uint8_t {
  Prop, Var, Bot, Top,
  Neg, And, Or, Imp,
  Box, Dia,
  Mu, Nu,
};

/// Polarity of a variable in a formula, derived from the parities of the
/// occurrences (negations and implication antecedents flip parity):
///   Positive — occurs, only at even parity;
///   Negative — occurs, only at odd parity;
///   Both     — no free occurrence (monotone and antitone vacuously);
///   Neither  — occurs at both parities.
enum class Polarity : std::uint8_t { Positive, Negative, Both, Neither };

class Formula : public std::enable_shared_from_this<Formula> {
 public:
  Kind kind() const { return kind_; }

  /// Name of a Prop or Var node, or the bound variable of a Mu/Nu node.
  const std::string& name() const { return name_; }

  /// First child: operand of unary nodes, left operand of binary nodes,
  /// body of binders. Null for leaves.
  const FormulaPtr& lhs() const { return lhs_; }

  /// Second child of binary nodes; null otherwise.
  const FormulaPtr& rhs() const { return rhs_; }

  /// Number of AST nodes.
  std::size_t size() const { return size_; }

  /// Maximum nesting depth of modalities and binders ([] <> mu nu) along any
  /// root-to-leaf path. Atoms and propositional connectives contribute 0.
  int modal_binder_depth() const { return depth_; }

  /// Free variables (Var nodes not captured by an enclosing binder),
  /// sorted. Proposition names are not variables and do not appear here.
  const std::vector<std::string>& free_vars() const { return free_vars_; }

  bool is_closed() const { return free_vars_.empty(); }

  /// Structural hash, cached at construction.
  std::size_t hash() const { return hash_; }

  // Formula is constructed through the factory functions below only.
  Formula(const Formula&) = delete;
  Formula& operator=(const Formula&) = delete;

 private:
  Formula(Kind k, std::string name, FormulaPtr l, FormulaPtr r);

  friend FormulaPtr make_node(Kind, std::string, FormulaPtr, FormulaPtr);

  Kind kind_;
  std::string name_;
  FormulaPtr lhs_, rhs_;
  std::size_t size_;
  int depth_;
  std::size_t hash_;
  std::vector<std::string> free_vars_;
};

// ---- construction ----------------------------------------------------------

FormulaPtr prop(std::string name);
FormulaPtr var(std::string name);
FormulaPtr bot();
FormulaPtr top();
FormulaPtr neg(FormulaPtr f);
FormulaPtr conj(FormulaPtr l, FormulaPtr r);   // /\ (and)
FormulaPtr disj(FormulaPtr l, FormulaPtr r);   // \/ (or)
FormulaPtr imp(FormulaPtr l, FormulaPtr r);    // ->
FormulaPtr box(FormulaPtr f);                  // []
FormulaPtr dia(FormulaPtr f);                  // <>

/// Least / greatest fixed point. Throws FormulaError unless `x` has
/// polarity Positive or Both in `body`.
FormulaPtr mu(std::string x, FormulaPtr body);
FormulaPtr nu(std::string x, FormulaPtr body);

// ---- structural queries ----------------------------------------------------

/// Structural equality (names and shapes; no alpha-conversion).
bool equal(const Formula& a, const Formula& b);
inline bool equal(const FormulaPtr& a, const FormulaPtr& b) { return equal(*a, *b); }

/// Hash/equality functors over Formula pointers for structural containers.
struct StructHash {
  std::size_t operator()(const Formula* f) const { return f->hash(); }
};
struct StructEq {
  bool operator()(const Formula* a, const Formula* b) const { return equal(*a, *b); }
};

/// Polarity of variable `x` in `f` (see Polarity).
Polarity polarity(const FormulaPtr& f, const std::string& x);

/// Distinct subformulas of `f` (including `f`), ordered by first occurrence
/// in a pre-order walk. Distinctness is structural.
std::vector<FormulaPtr> subformulas(const FormulaPtr& f);

/// Names of propositions occurring in `f`, sorted.
std::set<std::string> prop_names(const FormulaPtr& f);

/// Capture-avoiding substitution of `g` for the free occurrences of variable
/// `x` in `f`. Throws FormulaError if a free variable of `g` would be
/// captured by a binder of `f`, or if the result violates binder positivity.
FormulaPtr substitute(const FormulaPtr& f, const std::string& x, const FormulaPtr& g);

/// True iff `f` is fixed-point free (no Mu/Nu nodes).
bool is_modal(const FormulaPtr& f);

// ---- well-naming -----------------------------------------------------------

/// Guardedness: every free occurrence of a bound variable lies beneath at
/// least one modality within its binder's body. A binder whose variable does
/// not occur is vacuously guarded.
bool is_guarded(const FormulaPtr& f);

/// Well-named = guarded, every variable bound by at most one binder with at
/// most one bound occurrence, and bound names disjoint from free names.
bool is_well_named(const FormulaPtr& f);

/// Rename and restructure `f` into a semantically equivalent well-named
/// formula: binders are alpha-renamed apart (first use keeps its name, later
/// ones get fresh names derived by suffixing), and a binder whose variable
/// occurs k > 1 times is split into k nested same-kind binders, one per
/// occurrence — sound by the diagonal law lfp f(A,A) = lfp A. lfp B. f(A,B)
/// and its dual. Throws FormulaError on unguarded input.
FormulaPtr well_name(const FormulaPtr& f);

// ---- fixed-point bookkeeping -----------------------------------------------

/// One row per binder subformula of a well-named formula.
struct FixpointEntry {
  FormulaPtr binder;  ///< the mu X. body / nu X. body subformula
  Kind kind;          ///< Kind::Mu or Kind::Nu
  std::string var;
  FormulaPtr body;
  int parity;         ///< role swaps (negations + implication antecedents) from the root, mod 2
  std::size_t size;   ///< node count of the binder subformula
};

using FixpointTable = std::vector<FixpointEntry>;

/// Table of all binders of `f`, sorted by non-increasing size so that outer
/// binders precede the binders they enclose; ties keep pre-order. Requires a
/// well-named input. parity counts the negations and implication antecedents
/// on the path from the root to the binder.
FixpointTable fixpoint_table(const FormulaPtr& f);

// ---- concrete syntax -------------------------------------------------------

/// Parse the ASCII syntax:
///
///   expr   := ("mu" | "nu") IDENT "." expr | imp
///   imp    := or ("->" expr)?                       (right associative)
///   or     := and ("\/" (binder | and))*            (left associative)
///   and    := unary ("/\" (binder | unary))*        (left associative)
///   unary  := ("~" | "[]" | "<>") unary | primary
///   primary:= "top" | "bot" | IDENT | "(" expr ")"
///   IDENT  := [A-Za-z][A-Za-z0-9_]*   (mu, nu, top, bot are reserved)
///
/// Binder bodies extend maximally to the right; a binder directly under a
/// unary operator must be parenthesized. An identifier is a Var when bound
/// by an enclosing binder and a Prop otherwise. Throws ParseError with a
/// byte offset on syntax errors and FormulaError on positivity violations.
FormulaPtr parse(const std::string& text);

/// Render with minimal parentheses; parse(print(f)) reconstructs f exactly.
std::string print(const FormulaPtr& f);

}  // namespace ckmu
