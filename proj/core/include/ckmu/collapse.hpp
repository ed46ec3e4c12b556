// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT
//
// Fixed-point elimination and executable IS5-specific results: the
// innermost-first collapse rewriter (two-step unrolling of each binder),
// semantic agreement checks for the collapse, heredity of modal formulas
// along the composed relation, and a semantic axiom/rule soundness suite.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ckmu/formula.hpp"
#include "ckmu/kripke.hpp"
#include "ckmu/semantics.hpp"

namespace ckmu {

/// One rewrite step of the collapse: the innermost-leftmost binder redex and
/// its two-step unrolling (nu X. psi -> psi(psi(top)), mu X. psi -> psi(psi(bot))).
struct CollapseStep {
  FormulaPtr before;       ///< whole formula at the start of the step
  FormulaPtr redex;        ///< the binder eliminated (its body is fixed-point-free)
  FormulaPtr replacement;  ///< the unrolled body substituted for the redex
  FormulaPtr after;        ///< whole formula after the step
};

struct CollapseTrace {
  FormulaPtr input;
  FormulaPtr result;  ///< fixed-point-free
  std::vector<CollapseStep> steps;
};

/// Eliminate every fixed point by innermost-first two-step unrolling.
/// The result is semantically equivalent to the input on IS5 models (and on
/// those only — see check_collapse_semantics for the executable statement).
/// Requires f closed and well-named; throws FormulaError otherwise, or when
/// an intermediate formula exceeds size_guard nodes.
CollapseTrace collapse(const FormulaPtr& f, std::size_t size_guard = 100000);

struct CollapseReport {
  bool ok = true;
  std::size_t steps_checked = 0;
  std::string witness;  ///< first disagreement, human-readable
};

/// Check, on this model, that every collapse step preserves the denotation
/// (under the ambient assignment closing the enclosing binders' variables)
/// and that the final result matches the input. Equality is guaranteed on
/// valid IS5 models; on other CK models a disagreement is an expected
/// finding, reported rather than thrown.
CollapseReport check_collapse_semantics(const KripkeModel& m, const FormulaPtr& f,
                                        std::size_t size_guard = 100000);

/// Executable core of the two-step fixed-point lemma: for a binder eta X. psi
/// with fixed-point-free body, compare psi(psi(c)) with psi(psi(psi(c)))
/// (c = top for nu, bot for mu) on the model. True on IS5 models.
/// The binder formula must be closed; rho closes nothing here.
bool two_step_stable(const KripkeModel& m, const FormulaPtr& binder);

struct HeredityReport {
  bool ok = true;
  std::size_t pairs_checked = 0;
  std::string witness;
};

/// Heredity of modal formulas along the composed relation: for every pair
/// w (pre;modal) w' and both modalities, w in ||[]f|| implies w' in ||[]f||
/// and likewise for <>. Holds on valid IS5 models; violations on other CK
/// models are reported.
HeredityReport check_heredity(const KripkeModel& m, const FormulaPtr& f);

// ---- axiom and rule soundness ------------------------------------------------------

enum class ModelClass : std::uint8_t { CK, IS5 };

enum class SlotKind : std::uint8_t {
  Plain,  ///< any instantiation formula
  Body,   ///< may mention the bound variable X, X-positive
};

/// A named axiom schema: build() assembles the instance from one formula per
/// slot. Schemas of class IS5 are valid on IS5 models only.
struct AxiomSchema {
  std::string name;
  ModelClass model_class = ModelClass::CK;
  std::vector<SlotKind> slots;
  FormulaPtr (*build)(const std::vector<FormulaPtr>& args) = nullptr;
};

struct RuleInstance {
  std::vector<FormulaPtr> premises;
  FormulaPtr conclusion;
};

/// A named rule schema: sound when premise validity implies conclusion
/// validity on each model.
struct RuleSchema {
  std::string name;
  std::vector<SlotKind> slots;
  RuleInstance (*build)(const std::vector<FormulaPtr>& args) = nullptr;
};

struct AxiomCatalog {
  std::vector<AxiomSchema> axioms;  ///< K[], K<>, FS, DP, N, T, 4, 5, nuFP, muFP
  std::vector<RuleSchema> rules;    ///< Nec, MP, nuInd, muInd
};

const AxiomCatalog& axiom_catalog();

/// The documented instantiation grammar: atoms P, Q, top, bot closed under
/// ~, [], <>, /\, \/, -> up to the given connective depth (0, 1 or 2).
std::vector<FormulaPtr> instantiation_slot(int depth);

/// Same grammar extended with the variable X, filtered to X-positive bodies.
std::vector<FormulaPtr> instantiation_bodies(int depth);

struct AxiomReport {
  struct Entry {
    std::string schema;
    bool is_rule = false;
    bool applicable = true;  ///< false: IS5-only schema, model not IS5
    std::size_t instances = 0;
    std::size_t failures = 0;
    std::string witness;  ///< first failing instance
  };
  std::vector<Entry> entries;
  bool ok = true;  ///< no failures among applicable entries
};

/// Instantiate every catalog schema (or the named subset) to the given depth
/// and check axiom validity (truth at every world) and per-model rule
/// soundness (valid premises imply valid conclusion). IS5-only schemas are
/// skipped (applicable=false) unless validate_is5(m) is empty. The model must
/// valuate P and Q.
AxiomReport check_axioms(const KripkeModel& m, int depth = 1,
                         const std::vector<std::string>& subset = {});

struct CountermodelSearch {
  bool found = false;
  KripkeModel model;
  FormulaPtr instance;
  int world = -1;  ///< a world where the instance fails
};

/// Search the enumerated CK models for one falsifying some instance of the
/// named axiom schema at the given depth. Stops at the first hit.
CountermodelSearch find_axiom_countermodel(const std::string& schema, int depth,
                                           const EnumBounds& bounds);

}  // namespace ckmu
