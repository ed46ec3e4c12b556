// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT
//
// The documented test corpora (formulas and models) and the property suites
// run over them. Each suite checks one family of semantic properties at desk
// scale and reports counted checks, failures, and capped witnesses. Suites
// parallelize across models; results are deterministic for fixed options.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ckmu/formula.hpp"
#include "ckmu/kripke.hpp"

namespace ckmu {

/// Bounds and seeds for the suite runners. Defaults finish in minutes on a
/// laptop; the exhaustive legs are capped at enumerate_models' limits.
struct SuiteOptions {
  std::uint64_t seed = 1;
  int max_worlds = 3;      ///< exhaustive enumeration bound (<= 4)
  int random_cases = 1000; ///< randomized leg of the thm32 suite
  int random_worlds = 6;   ///< world bound for randomized models
  int is5_models = 200;    ///< generated IS5 models for collapse/heredity/frames
  int is5_worlds = 5;
  int depth = 1;           ///< axiom instantiation depth (axioms suite)
  int threads = 0;         ///< worker threads; 0 = hardware concurrency
};

struct SuiteCase {
  std::string model;    ///< model id or description
  std::string formula;  ///< printed formula or schema name
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t cases = 0;     ///< checks performed
  std::uint64_t failures = 0;  ///< checks that did not hold
  std::map<std::string, std::uint64_t> counters;
  std::vector<SuiteCase> witnesses;  ///< first failures, capped
  double seconds = 0.0;              ///< wall time; informational, not serialized

  bool ok() const { return failures == 0; }
};

/// Machine-readable summary (stable key order; timing omitted for
/// reproducible output).
std::string suite_to_json(const SuiteResult& r);

/// Line-oriented human summary (timing omitted for reproducible output).
std::string suite_to_text(const SuiteResult& r);

// ---- formula corpora ---------------------------------------------------------------

/// The documented closed formula corpus over proposition P: every formula of
/// syntax-tree size <= 3 over {P, top, bot, ~, [], <>, /\, \/, ->}, plus a
/// curated list of fixed-point formulas, all well-named, filtered to
/// modal/binder depth <= 3.
std::vector<FormulaPtr> formula_corpus();

/// formula_corpus() plus curated depth-4 entries (for randomized legs).
std::vector<FormulaPtr> formula_corpus_deep();

/// Open formulas phi(X) with X free, used for monotonicity checks: every
/// formula of size <= 3 over {X, P, top, bot} plus curated modal entries,
/// filtered to X-positive (positive=true) or X-negative polarity.
std::vector<FormulaPtr> open_formula_corpus(bool positive);

// ---- model corpora -----------------------------------------------------------------

/// The documented CK model corpus with `props` propositions: small worlds
/// enumerated exhaustively, larger sizes sampled at fixed strides, plus
/// seeded random models. All models are valid CK models.
std::vector<KripkeModel> model_corpus_ck(std::uint64_t seed, int props);

/// Seeded IS5 model corpus: `count` generated models of <= max_worlds worlds.
std::vector<KripkeModel> model_corpus_is5(std::uint64_t seed, int count,
                                          int max_worlds, int props);

// ---- suites ------------------------------------------------------------------------

/// Oracle equivalence: over every enumerated CK model (<= max_worlds worlds,
/// <= 1 proposition, with and without fallible worlds) and every corpus
/// formula, the game winner at each world matches the denotational truth;
/// both extracted strategies pass verify_strategy. A randomized leg adds
/// random_cases generated models at <= random_worlds worlds against the deep
/// corpus. Counters: xcheck_mismatches, strategy_failures, models, formulas.
SuiteResult run_thm32(const SuiteOptions& opt);

/// Fixed-point elimination agreement: on generated IS5 models, every corpus
/// formula satisfies ||phi|| = ||collapse(phi)|| with every trace step's
/// two-step equality; plus the fixed fallible CK model where mu X. <> X
/// disagrees with its rewrite, demonstrating IS5-specificity.
SuiteResult run_collapse(const SuiteOptions& opt);

/// Heredity along pre;modal on generated IS5 models for every modal corpus
/// formula; plus a search over enumerated CK models for a violating model.
SuiteResult run_heredity(const SuiteOptions& opt);

/// Semantic axiom/rule soundness over the CK and IS5 model corpora; plus the
/// search for a CK countermodel to the IS5-only schema DP.
SuiteResult run_axioms(const SuiteOptions& opt);

/// Frame lemmas: pre;modal transitive on every IS5 model (generated and
/// enumerated); forward and backward confluence coincide on every enumerated
/// infallible model whose modal relation is an equivalence.
SuiteResult run_frames(const SuiteOptions& opt);

/// Monotonicity: on corpus models (<= 3 worlds), X-positive corpus formulas
/// induce monotone operators and X-negative ones antitone, checked
/// exhaustively over all subset pairs.
SuiteResult run_monotone(const SuiteOptions& opt);

/// Approximant convergence: every fixed-point subformula's chain stabilizes
/// within |W|+1 applications, the limit is a fixed point, and on <= 3-world
/// models it is least (mu) / greatest (nu) among all fixed points.
SuiteResult run_approximants(const SuiteOptions& opt);

/// Constructive non-equivalences: searches find CK models separating
/// ~ <> ~ P from [] P and P from ~ ~ P; nu X. P matches P and ~ (mu X. ~ P)
/// matches ~ ~ P on every corpus model.
SuiteResult run_nonequiv(const SuiteOptions& opt);

/// Dispatch by suite name: thm32, collapse, heredity, axioms, frames,
/// monotone, approximants, nonequiv. Throws std::invalid_argument otherwise.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace ckmu
