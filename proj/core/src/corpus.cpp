// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT

#include "ckmu/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "ckmu/collapse.hpp"
#include "ckmu/game.hpp"
#include "ckmu/semantics.hpp"
#include "ckmu/solver.hpp"
#include "json.hpp"

namespace ckmu {

namespace {

constexpr std::size_t kWitnessCapPerCase = 3;
constexpr std::size_t kWitnessCapTotal = 10;

/// Per-work-unit tally; aux slots carry suite-specific counters.
struct CaseOutcome {
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::uint64_t aux[4] = {0, 0, 0, 0};
  std::vector<SuiteCase> witnesses;

  void fail(std::string model, std::string formula, std::string detail) {
    ++failures;
    if (witnesses.size() < kWitnessCapPerCase)
      witnesses.push_back({std::move(model), std::move(formula), std::move(detail)});
  }
};

std::vector<CaseOutcome> run_parallel(
    std::size_t count, int threads,
    const std::function<void(std::size_t, CaseOutcome&)>& work) {
  std::vector<CaseOutcome> out(count);
  auto safe = [&](std::size_t i) {
    try {
      work(i, out[i]);
    } catch (const std::exception& e) {
      out[i].checks += 1;
      out[i].fail("", "", std::string("exception: ") + e.what());
    }
  };
  const unsigned hw = std::thread::hardware_concurrency();
  std::size_t t = threads > 0 ? static_cast<std::size_t>(threads) : (hw ? hw : 1);
  t = std::min<std::size_t>({t, count == 0 ? 1 : count, 64});
  if (t <= 1) {
    for (std::size_t i = 0; i < count; ++i) safe(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto runner = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) safe(i);
  };
  std::vector<std::thread> pool;
  pool.reserve(t - 1);
  for (std::size_t k = 0; k + 1 < t; ++k) pool.emplace_back(runner);
  runner();
  for (std::thread& th : pool) th.join();
  return out;
}

SuiteResult aggregate(std::string name, const std::vector<CaseOutcome>& cases,
                      std::uint64_t aux[4]) {
  SuiteResult r;
  r.suite = std::move(name);
  for (const CaseOutcome& c : cases) {
    r.cases += c.checks;
    r.failures += c.failures;
    for (int k = 0; k < 4; ++k) aux[k] += c.aux[k];
    for (const SuiteCase& w : c.witnesses)
      if (r.witnesses.size() < kWitnessCapTotal) r.witnesses.push_back(w);
  }
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FormulaPtr curated(const char* text) { return well_name(parse(text)); }

/// Every formula over the given atoms with syntax-tree size <= max_size.
std::vector<FormulaPtr> size_kernel(const std::vector<FormulaPtr>& atoms, int max_size) {
  std::vector<std::vector<FormulaPtr>> by(static_cast<std::size_t>(max_size) + 1);
  by[1] = atoms;
  for (int s = 2; s <= max_size; ++s) {
    auto& slot = by[static_cast<std::size_t>(s)];
    for (const FormulaPtr& a : by[static_cast<std::size_t>(s - 1)]) {
      slot.push_back(neg(a));
      slot.push_back(box(a));
      slot.push_back(dia(a));
    }
    for (int ls = 1; ls <= s - 2; ++ls) {
      const int rs = s - 1 - ls;
      for (const FormulaPtr& a : by[static_cast<std::size_t>(ls)])
        for (const FormulaPtr& b : by[static_cast<std::size_t>(rs)]) {
          slot.push_back(conj(a, b));
          slot.push_back(disj(a, b));
          slot.push_back(imp(a, b));
        }
    }
  }
  std::vector<FormulaPtr> out;
  for (int s = 1; s <= max_size; ++s)
    for (FormulaPtr& f : by[static_cast<std::size_t>(s)]) out.push_back(std::move(f));
  return out;
}

std::vector<FormulaPtr> dedup_by_print(const std::vector<FormulaPtr>& in, int max_depth) {
  std::vector<FormulaPtr> out;
  std::unordered_set<std::string> seen;
  for (const FormulaPtr& f : in) {
    if (f->modal_binder_depth() > max_depth) continue;
    if (seen.insert(print(f)).second) out.push_back(f);
  }
  return out;
}

const char* const kCuratedBinders[] = {
    "nu X. P",
    "mu X. P",
    "nu X. [] X",
    "mu X. <> X",
    "nu X. [] (P /\\ X)",
    "mu X. P \\/ <> X",
    "mu X. P /\\ <> X",
    "nu X. P -> [] X",
    "nu X. ~ <> ~ X",
    "mu X. <> <> X",
    "nu X. [] [] X",
    "nu X. [] (P -> X)",
    "mu X. <> (P /\\ X)",
    "nu X. P /\\ [] X",
    "mu X. P \\/ <> <> X",
    "mu X. <> (X \\/ P)",
    "nu X. [] (P \\/ X)",
    "nu X. mu Y. <> (X \\/ Y)",
    "mu X. nu Y. [] X /\\ <> Y",
    "nu X. mu Y. P \\/ <> (X /\\ Y)",
    "mu X. <> X \\/ <> X",
    "nu X. [] X /\\ [] X",
    "~ (mu X. ~ P)",
    "~ (nu X. [] X)",
    "[] (mu X. <> X)",
    "(mu X. <> X) \\/ P",
    "P -> (nu X. [] X)",
    "(nu X. [] X) /\\ (mu Y. <> Y)",
};

const char* const kCuratedDeep[] = {
    "nu X. [] (X /\\ <> X)",
    "mu X. <> (P \\/ <> <> X)",
    "nu X. [] [] [] X",
    "nu X. mu Y. [] (P -> [] (X /\\ Y))",
    "mu X. nu Y. <> <> (X \\/ Y)",
    "~ (nu X. [] (P /\\ X))",
    "(mu X. <> X) -> (nu Y. [] Y)",
};

/// The fixed fallible CK model on which mu X. <> X and its rewrite <> <> bot
/// disagree: pre is reflexive only, modal sends both worlds to the fallible
/// world b.
KripkeModel ck_counterexample_model() {
  KripkeModel m;
  m.worlds = {"a", "b"};
  m.fallible = WorldSet::single(1);
  m.pre = {WorldSet::single(0), WorldSet::single(1)};
  m.modal = {WorldSet::single(1), WorldSet::single(1)};
  return m;
}

bool modal_is_equivalence(const KripkeModel& m) {
  const std::size_t n = m.size();
  for (std::size_t w = 0; w < n; ++w)
    if (!m.modal[w].contains(static_cast<int>(w))) return false;
  for (std::size_t w = 0; w < n; ++w)
    for (int v : m.modal[w])
      if (!m.modal[static_cast<std::size_t>(v)].contains(static_cast<int>(w)))
        return false;
  return relation_transitive(m.modal);
}

}  // namespace

// ---- formula corpora ---------------------------------------------------------------

std::vector<FormulaPtr> formula_corpus() {
  std::vector<FormulaPtr> out = size_kernel({prop("P"), top(), bot()}, 3);
  for (const char* s : kCuratedBinders) out.push_back(curated(s));
  return dedup_by_print(out, 3);
}

std::vector<FormulaPtr> formula_corpus_deep() {
  std::vector<FormulaPtr> out = formula_corpus();
  for (const char* s : kCuratedDeep) out.push_back(curated(s));
  return dedup_by_print(out, 4);
}

std::vector<FormulaPtr> open_formula_corpus(bool positive) {
  std::vector<FormulaPtr> all = size_kernel({var("X"), prop("P"), top(), bot()}, 3);
  const FormulaPtr x = var("X"), p = prop("P");
  all.push_back(box(conj(p, x)));
  all.push_back(dia(disj(p, x)));
  all.push_back(box(imp(p, x)));
  all.push_back(conj(box(x), dia(x)));
  all.push_back(imp(neg(x), p));
  all.push_back(box(dia(conj(x, p))));
  all.push_back(box(imp(x, p)));
  all.push_back(neg(dia(x)));
  all.push_back(imp(dia(x), p));
  all.push_back(dia(neg(x)));
  std::vector<FormulaPtr> out;
  std::unordered_set<std::string> seen;
  for (const FormulaPtr& f : all) {
    const Polarity pol = polarity(f, "X");
    const bool keep = positive ? (pol == Polarity::Positive || pol == Polarity::Both)
                               : (pol == Polarity::Negative || pol == Polarity::Both);
    if (keep && f->modal_binder_depth() <= 3 && seen.insert(print(f)).second)
      out.push_back(f);
  }
  return out;
}

// ---- model corpora -----------------------------------------------------------------

std::vector<KripkeModel> model_corpus_ck(std::uint64_t seed, int props) {
  std::vector<KripkeModel> out;
  EnumBounds small{2, props, true, false};
  enumerate_models(small, [&](const KripkeModel& m) {
    out.push_back(m);
    return true;
  });
  // Three-world models are sampled at a fixed stride (documented corpus
  // definition; exhaustive coverage at this size belongs to run_thm32).
  const std::uint64_t stride = props >= 2 ? 9973 : 37;
  EnumBounds three{3, props, true, false};
  std::uint64_t index3 = 0;
  enumerate_models(three, [&](const KripkeModel& m) {
    if (m.size() == 3) {
      if (index3 % stride == 0) out.push_back(m);
      ++index3;
    }
    return true;
  });
  for (std::uint64_t i = 0; i < 25; ++i)
    out.push_back(gen_ck(seed + i, GenBounds{5, props}));
  return out;
}

std::vector<KripkeModel> model_corpus_is5(std::uint64_t seed, int count, int max_worlds,
                                          int props) {
  std::vector<KripkeModel> out;
  out.reserve(static_cast<std::size_t>(std::max(0, count)));
  for (int i = 0; i < count; ++i)
    out.push_back(gen_is5(seed + static_cast<std::uint64_t>(i),
                          GenBounds{max_worlds, props}));
  return out;
}

// ---- suites ------------------------------------------------------------------------

SuiteResult run_thm32(const SuiteOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<KripkeModel> models;
  enumerate_models(EnumBounds{opt.max_worlds, 1, true, false},
                   [&](const KripkeModel& m) {
                     models.push_back(m);
                     return true;
                   });
  const std::size_t with_p = models.size();
  enumerate_models(EnumBounds{opt.max_worlds, 0, true, false},
                   [&](const KripkeModel& m) {
                     models.push_back(m);
                     return true;
                   });

  const std::vector<FormulaPtr> full = formula_corpus();
  std::vector<FormulaPtr> pfree;
  for (const FormulaPtr& f : full)
    if (prop_names(f).empty()) pfree.push_back(f);
  const std::vector<FormulaPtr> deep = formula_corpus_deep();

  const std::size_t randoms = static_cast<std::size_t>(std::max(0, opt.random_cases));
  const std::size_t total = models.size() + randoms;

  auto work = [&](std::size_t i, CaseOutcome& out) {
    KripkeModel local;
    const KripkeModel* m = nullptr;
    const std::vector<FormulaPtr>* formulas = nullptr;
    FormulaPtr single;
    if (i < models.size()) {
      m = &models[i];
      formulas = (i < with_p) ? &full : &pfree;
    } else {
      const std::uint64_t k = i - models.size();
      local = gen_ck(opt.seed + 0x9e3779b97f4a7c15ULL * (k + 1),
                     GenBounds{opt.random_worlds, 1});
      m = &local;
      single = deep[k % deep.size()];
    }

    Evaluator ev(*m);
    ArenaBuilder builder;
    auto check_pair = [&](const FormulaPtr& f) {
      ++out.checks;
      bool bad = false;
      const WorldSet truth = ev.evaluate(f);
      for (std::size_t w = 0; w < m->size(); ++w) {
        const Arena a = builder.build(*m, static_cast<int>(w), f);
        const SolveResult r = solve(a);
        const bool sem = truth.contains(static_cast<int>(w));
        const bool game = r.winner_of[0] == Player::I;
        if (sem != game) {
          ++out.aux[0];
          bad = true;
          if (out.witnesses.size() < kWitnessCapPerCase)
            out.witnesses.push_back(
                {model_id(*m), print(f),
                 "world '" + m->worlds[w] + "': semantics " +
                     (sem ? "true" : "false") + ", game winner " +
                     (game ? "I" : "II")});
        }
        const StrategyCheck cI = verify_strategy(a, r.strategy_I);
        const StrategyCheck cII = verify_strategy(a, r.strategy_II);
        if (!cI.ok || !cII.ok) {
          ++out.aux[1];
          bad = true;
          if (out.witnesses.size() < kWitnessCapPerCase)
            out.witnesses.push_back({model_id(*m), print(f),
                                     "strategy rejected at world '" + m->worlds[w] +
                                         "': " + (cI.ok ? cII.reason : cI.reason)});
        }
      }
      if (bad) ++out.failures;
    };

    if (formulas) {
      for (const FormulaPtr& f : *formulas) check_pair(f);
    } else {
      check_pair(single);
    }
  };

  const std::vector<CaseOutcome> cases = run_parallel(total, opt.threads, work);
  std::uint64_t aux[4] = {0, 0, 0, 0};
  SuiteResult r = aggregate("thm32", cases, aux);
  r.counters["xcheck_mismatches"] = aux[0];
  r.counters["strategy_failures"] = aux[1];
  r.counters["enumerated_models"] = models.size();
  r.counters["random_models"] = randoms;
  r.counters["corpus_formulas"] = full.size();
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult run_collapse(const SuiteOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<KripkeModel> models =
      model_corpus_is5(opt.seed, opt.is5_models, opt.is5_worlds, 1);
  const std::vector<FormulaPtr> formulas = formula_corpus();

  auto work = [&](std::size_t i, CaseOutcome& out) {
    if (i < models.size()) {
      const KripkeModel& m = models[i];
      for (const FormulaPtr& f : formulas) {
        ++out.checks;
        const CollapseReport rep = check_collapse_semantics(m, f);
        out.aux[1] += rep.steps_checked;
        if (!rep.ok) {
          ++out.aux[0];
          out.fail(model_id(m), print(f), rep.witness);
        }
      }
      return;
    }
    // IS5-specificity: the fixed fallible CK model must disagree.
    const KripkeModel cm = ck_counterexample_model();
    const FormulaPtr f = parse("mu X. <> X");
    ++out.checks;
    const CollapseReport rep = check_collapse_semantics(cm, f);
    Evaluator ev(cm);
    const WorldSet mu_val = ev.evaluate(f);
    const WorldSet rewrite_val = ev.evaluate(parse("<> <> bot"));
    if (rep.ok || !mu_val.empty() || !rewrite_val.contains(0)) {
      out.fail(model_id(cm), print(f),
               "expected strict disagreement with <> <> bot off IS5");
    } else {
      out.aux[2] = 1;
    }
  };

  const std::vector<CaseOutcome> cases =
      run_parallel(models.size() + 1, opt.threads, work);
  std::uint64_t aux[4] = {0, 0, 0, 0};
  SuiteResult r = aggregate("collapse", cases, aux);
  r.counters["agreement_failures"] = aux[0];
  r.counters["trace_steps_checked"] = aux[1];
  r.counters["ck_counterexample_disagrees"] = aux[2];
  r.counters["is5_models"] = models.size();
  r.counters["corpus_formulas"] = formulas.size();
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult run_heredity(const SuiteOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<KripkeModel> models =
      model_corpus_is5(opt.seed, opt.is5_models, opt.is5_worlds, 1);
  std::vector<FormulaPtr> modal_formulas;
  for (const FormulaPtr& f : formula_corpus())
    if (is_modal(f)) modal_formulas.push_back(f);

  auto work = [&](std::size_t i, CaseOutcome& out) {
    if (i < models.size()) {
      const KripkeModel& m = models[i];
      for (const FormulaPtr& f : modal_formulas) {
        ++out.checks;
        const HeredityReport rep = check_heredity(m, f);
        out.aux[0] += rep.pairs_checked;
        if (!rep.ok) out.fail(model_id(m), print(f), rep.witness);
      }
      return;
    }
    // IS5-specificity: search the enumerated CK models for a violation.
    ++out.checks;
    bool found = false;
    std::string where;
    enumerate_models(EnumBounds{3, 1, true, false}, [&](const KripkeModel& m) {
      const HeredityReport rep = check_heredity(m, prop("P"));
      if (!rep.ok) {
        found = true;
        where = model_id(m) + ": " + rep.witness;
        return false;
      }
      return true;
    });
    if (found)
      out.aux[1] = 1;
    else
      out.fail("", "P", "no CK heredity violation found within 3 worlds");
  };

  const std::vector<CaseOutcome> cases =
      run_parallel(models.size() + 1, opt.threads, work);
  std::uint64_t aux[4] = {0, 0, 0, 0};
  SuiteResult r = aggregate("heredity", cases, aux);
  r.counters["pairs_checked"] = aux[0];
  r.counters["ck_violation_found"] = aux[1];
  r.counters["is5_models"] = models.size();
  r.counters["modal_formulas"] = modal_formulas.size();
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult run_axioms(const SuiteOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<KripkeModel> models = model_corpus_ck(opt.seed, 2);
  const std::size_t ck_count = models.size();
  for (KripkeModel& m : model_corpus_is5(opt.seed, opt.is5_models, opt.is5_worlds, 2))
    models.push_back(std::move(m));

  auto work = [&](std::size_t i, CaseOutcome& out) {
    if (i < models.size()) {
      const KripkeModel& m = models[i];
      const AxiomReport rep = check_axioms(m, opt.depth);
      for (const AxiomReport::Entry& e : rep.entries) {
        if (!e.applicable) continue;
        ++out.checks;
        out.aux[0] += e.instances;
        if (e.failures > 0)
          out.fail(model_id(m), e.schema,
                   std::to_string(e.failures) + " failing instance(s), first: " +
                       e.witness);
      }
      return;
    }
    // DP is IS5-only: a CK countermodel must exist within three worlds.
    ++out.checks;
    const CountermodelSearch res =
        find_axiom_countermodel("DP", 0, EnumBounds{3, 2, true, false});
    if (res.found)
      out.aux[1] = 1;
    else
      out.fail("", "DP", "no CK countermodel found within 3 worlds");
  };

  const std::vector<CaseOutcome> cases =
      run_parallel(models.size() + 1, opt.threads, work);
  std::uint64_t aux[4] = {0, 0, 0, 0};
  SuiteResult r = aggregate("axioms", cases, aux);
  r.counters["instances_checked"] = aux[0];
  r.counters["dp_countermodel_found"] = aux[1];
  r.counters["ck_models"] = ck_count;
  r.counters["is5_models"] = models.size() - ck_count;
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult run_frames(const SuiteOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<KripkeModel> models =
      model_corpus_is5(opt.seed, opt.is5_models, opt.is5_worlds, 0);

  auto work = [&](std::size_t i, CaseOutcome& out) {
    if (i < models.size()) {
      const KripkeModel& m = models[i];
      ++out.checks;
      if (!relation_transitive(compose_pre_modal(m)))
        out.fail(model_id(m), "", "pre;modal is not transitive on an IS5 model");
      return;
    }
    if (i == models.size()) {
      // Composed-relation transitivity over every enumerated IS5 model.
      enumerate_models(EnumBounds{opt.max_worlds, 0, false, true},
                       [&](const KripkeModel& m) {
                         ++out.checks;
                         ++out.aux[0];
                         if (!relation_transitive(compose_pre_modal(m)))
                           out.fail(model_id(m), "",
                                    "pre;modal is not transitive on an IS5 model");
                         return true;
                       });
      return;
    }
    // Confluence equivalence on every enumerated infallible model whose
    // modal relation is an equivalence.
    enumerate_models(EnumBounds{opt.max_worlds, 0, false, false},
                     [&](const KripkeModel& m) {
                       if (!modal_is_equivalence(m)) return true;
                       ++out.checks;
                       ++out.aux[1];
                       if (forward_confluent(m) != backward_confluent(m))
                         out.fail(model_id(m), "",
                                  "forward and backward confluence disagree");
                       return true;
                     });
  };

  const std::vector<CaseOutcome> cases =
      run_parallel(models.size() + 2, opt.threads, work);
  std::uint64_t aux[4] = {0, 0, 0, 0};
  SuiteResult r = aggregate("frames", cases, aux);
  r.counters["generated_is5_models"] = models.size();
  r.counters["enumerated_is5_models"] = aux[0];
  r.counters["equivalence_models"] = aux[1];
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult run_monotone(const SuiteOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<KripkeModel> models;
  for (KripkeModel& m : model_corpus_ck(opt.seed, 1))
    if (m.size() <= 3) models.push_back(std::move(m));
  const std::vector<FormulaPtr> pos = open_formula_corpus(true);
  const std::vector<FormulaPtr> negf = open_formula_corpus(false);

  auto work = [&](std::size_t i, CaseOutcome& out) {
    const KripkeModel& m = models[i];
    for (const FormulaPtr& f : pos) {
      ++out.checks;
      const MonotoneReport rep = check_monotone(m, {}, "X", f, 128);
      out.aux[0] += static_cast<std::uint64_t>(rep.pairs_checked);
      if (!rep.monotone)
        out.fail(model_id(m), print(f), "not monotone: " + rep.witness);
    }
    for (const FormulaPtr& f : negf) {
      ++out.checks;
      const MonotoneReport rep = check_monotone(m, {}, "X", f, 128);
      out.aux[0] += static_cast<std::uint64_t>(rep.pairs_checked);
      if (!rep.antitone)
        out.fail(model_id(m), print(f), "not antitone: " + rep.witness);
    }
  };

  const std::vector<CaseOutcome> cases = run_parallel(models.size(), opt.threads, work);
  std::uint64_t aux[4] = {0, 0, 0, 0};
  SuiteResult r = aggregate("monotone", cases, aux);
  r.counters["pairs_checked"] = aux[0];
  r.counters["models"] = models.size();
  r.counters["positive_formulas"] = pos.size();
  r.counters["negative_formulas"] = negf.size();
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult run_approximants(const SuiteOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<KripkeModel> models;
  for (KripkeModel& m : model_corpus_ck(opt.seed, 1))
    if (m.size() <= 3) models.push_back(std::move(m));
  std::vector<FormulaPtr> formulas;
  for (const FormulaPtr& f : formula_corpus())
    if (!is_modal(f)) formulas.push_back(f);

  auto work = [&](std::size_t i, CaseOutcome& out) {
    const KripkeModel& m = models[i];
    const std::size_t n = m.size();

    // Visit every binder subformula under the ambient assignment closing its
    // enclosing binders' variables.
    std::function<void(const FormulaPtr&, VarAssignment&, const FormulaPtr&)> visit =
        [&](const FormulaPtr& f, VarAssignment& rho, const FormulaPtr& root) {
          if (!f) return;
          if (f->kind() == Kind::Mu || f->kind() == Kind::Nu) {
            ++out.checks;
            const std::vector<WorldSet> chain =
                iterate_approximants(m, rho, f->kind(), f->name(), f->lhs());
            const WorldSet limit = chain.back();
            bool bad = false;
            if (chain.size() > n + 2) {
              bad = true;
              out.fail(model_id(m), print(root),
                       "chain of " + print(f) + " took " +
                           std::to_string(chain.size() - 1) + " applications");
            }
            VarAssignment rho2 = rho;
            rho2[f->name()] = limit;
            if (!(evaluate(m, rho2, f->lhs()) == limit)) {
              bad = true;
              out.fail(model_id(m), print(root),
                       "approximant limit of " + print(f) + " is not a fixed point");
            }
            if (n <= 3) {
              for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
                const WorldSet a{mask};
                VarAssignment rho3 = rho;
                rho3[f->name()] = a;
                if (!(evaluate(m, rho3, f->lhs()) == a)) continue;
                const bool ok_extreme = f->kind() == Kind::Mu ? limit.subset_of(a)
                                                              : a.subset_of(limit);
                if (!ok_extreme) {
                  bad = true;
                  out.fail(model_id(m), print(root),
                           std::string(f->kind() == Kind::Mu ? "mu" : "nu") +
                               " limit of " + print(f) + " is not extremal");
                  break;
                }
              }
            }
            (void)bad;
            visit(f->lhs(), rho2, root);
            return;
          }
          visit(f->lhs(), rho, root);
          visit(f->rhs(), rho, root);
        };

    for (const FormulaPtr& f : formulas) {
      VarAssignment rho;
      visit(f, rho, f);
    }
  };

  const std::vector<CaseOutcome> cases = run_parallel(models.size(), opt.threads, work);
  std::uint64_t aux[4] = {0, 0, 0, 0};
  SuiteResult r = aggregate("approximants", cases, aux);
  r.counters["models"] = models.size();
  r.counters["binder_formulas"] = formulas.size();
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult run_nonequiv(const SuiteOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<KripkeModel> models;
  for (KripkeModel& m : model_corpus_ck(opt.seed, 1))
    if (m.size() <= 3) models.push_back(std::move(m));

  auto separated = [](const KripkeModel& m, const FormulaPtr& a, const FormulaPtr& b,
                      std::string* where) {
    Evaluator ev(m);
    const WorldSet va = ev.evaluate(a);
    const WorldSet vb = ev.evaluate(b);
    if (va == vb) return false;
    if (where) {
      for (int w : m.all())
        if (va.contains(w) != vb.contains(w)) {
          *where = "world '" + m.worlds[static_cast<std::size_t>(w)] + "' of " +
                   model_id(m);
          break;
        }
    }
    return true;
  };

  auto work = [&](std::size_t i, CaseOutcome& out) {
    if (i == 0 || i == 1) {
      const FormulaPtr a = i == 0 ? parse("~ <> ~ P") : parse("P");
      const FormulaPtr b = i == 0 ? parse("[] P") : parse("~ ~ P");
      ++out.checks;
      bool found = false;
      enumerate_models(EnumBounds{3, 1, true, false}, [&](const KripkeModel& m) {
        if (separated(m, a, b, nullptr)) {
          found = true;
          return false;
        }
        return true;
      });
      if (found)
        out.aux[i] = 1;
      else
        out.fail("", print(a) + " vs " + print(b),
                 "no separating CK model found within 3 worlds");
      return;
    }
    const KripkeModel& m = models[i - 2];
    Evaluator ev(m);
    ++out.checks;
    if (!(ev.evaluate(parse("nu X. P")) == ev.evaluate(parse("P"))))
      out.fail(model_id(m), "nu X. P", "differs from P");
    ++out.checks;
    if (!(ev.evaluate(parse("~ (mu X. ~ P)")) == ev.evaluate(parse("~ ~ P"))))
      out.fail(model_id(m), "~ (mu X. ~ P)", "differs from ~ ~ P");
  };

  const std::vector<CaseOutcome> cases =
      run_parallel(models.size() + 2, opt.threads, work);
  std::uint64_t aux[4] = {0, 0, 0, 0};
  SuiteResult r = aggregate("nonequiv", cases, aux);
  r.counters["box_separation_found"] = aux[0];
  r.counters["negneg_separation_found"] = aux[1];
  r.counters["models"] = models.size();
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "thm32") return run_thm32(opt);
  if (name == "collapse") return run_collapse(opt);
  if (name == "heredity") return run_heredity(opt);
  if (name == "axioms") return run_axioms(opt);
  if (name == "frames") return run_frames(opt);
  if (name == "monotone") return run_monotone(opt);
  if (name == "approximants") return run_approximants(opt);
  if (name == "nonequiv") return run_nonequiv(opt);
  throw std::invalid_argument("unknown suite: " + name);
}

std::string suite_to_json(const SuiteResult& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["cases"] = r.cases;
  j["failures"] = r.failures;
  j["ok"] = r.ok();
  nlohmann::ordered_json counters = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.counters) counters[k] = v;
  j["counters"] = counters;
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();
  for (const SuiteCase& w : r.witnesses) {
    nlohmann::ordered_json e;
    e["model"] = w.model;
    e["formula"] = w.formula;
    e["detail"] = w.detail;
    witnesses.push_back(e);
  }
  j["witnesses"] = witnesses;
  return j.dump(2);
}

std::string suite_to_text(const SuiteResult& r) {
  std::string out = "suite " + r.suite + ": " + std::to_string(r.cases) + " checks, " +
                    std::to_string(r.failures) + " failures -> " +
                    (r.ok() ? "OK" : "FAIL") + "\n";
  for (const auto& [k, v] : r.counters)
    out += "  " + k + " = " + std::to_string(v) + "\n";
  for (const SuiteCase& w : r.witnesses)
    out += "  witness: " + w.model + " | " + w.formula + " | " + w.detail + "\n";
  return out;
}

}  // namespace ckmu
