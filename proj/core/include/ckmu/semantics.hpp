// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT
//
// Denotational semantics over bi-relational Kripke models. All clauses
// quantify over the intuitionistic preorder so denotations are upward
// closed; bot denotes exactly the fallible worlds, negation and implication
// are fallibility-tolerant (a successor where falsum holds never refutes
// them), and fixed points are computed by finite approximation.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "ckmu/formula.hpp"
#include "ckmu/kripke.hpp"

namespace ckmu {

/// Values for the free fixed-point variables of a formula.
using VarAssignment = std::map<std::string, WorldSet>;

/// Evaluator with a per-model memo table. The memo key is the subformula
/// node together with the assignment restricted to its free variables, so
/// one evaluator can serve many formulas and fixed-point iterations over the
/// same model. Formulas are kept alive by the memo (shared ownership).
class Evaluator {
 public:
  explicit Evaluator(const KripkeModel& m) : m_(m) {}

  /// Denotation of f under the assignment. Throws ModelError for a
  /// proposition missing from the valuation or a variable missing from rho.
  WorldSet evaluate(const FormulaPtr& f, const VarAssignment& rho = {});

  const KripkeModel& model() const { return m_; }

 private:
  WorldSet eval(const FormulaPtr& f, VarAssignment& rho);
  WorldSet fixpoint(const FormulaPtr& f, VarAssignment& rho);

  struct Key {
    const Formula* node;
    std::vector<std::uint64_t> env;  // rho values of the node's free vars, name-sorted
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  const KripkeModel& m_;
  std::unordered_map<Key, WorldSet, KeyHash> memo_;
  std::vector<FormulaPtr> pinned_;  // keeps memoized nodes alive
};

/// One-shot convenience wrapper around Evaluator.
WorldSet evaluate(const KripkeModel& m, const VarAssignment& rho, const FormulaPtr& f);

/// Approximant chain of mu X. body (from the empty set) or nu X. body (from
/// all worlds) under rho: [A0, A1, ..., Ak] where each step applies
/// A |-> ||body||[X:=A] and the last step is the first repeat, so the chain
/// ends with the fixed point confirmed (Ak = Ak-1). kind must be Kind::Mu or
/// Kind::Nu; X must be positive (or absent) in body.
std::vector<WorldSet> iterate_approximants(const KripkeModel& m, const VarAssignment& rho,
                                           Kind kind, const std::string& x,
                                           const FormulaPtr& body);

/// Result of probing A |-> ||f||[X:=A] for monotonicity and antitonicity.
struct MonotoneReport {
  bool monotone = true;
  bool antitone = true;
  long pairs_checked = 0;
  std::string witness;  ///< first violating pair, human-readable
};

/// Probe monotonicity over pairs A, subset of B: exhaustively when the world
/// count allows (2^|W| <= 256), otherwise `trials` deterministic random
/// pairs.
MonotoneReport check_monotone(const KripkeModel& m, const VarAssignment& rho,
                              const std::string& x, const FormulaPtr& f, int trials);

}  // namespace ckmu
