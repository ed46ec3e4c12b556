// Acceptance harness: runs the full randomized/enumerated suites at their
// default sizes and prints one PASS/FAIL line per acceptance criterion.
// Exit status 0 iff all criteria pass.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "ckmu/corpus.hpp"

namespace {

/// Wall-clock budget for the semantics/game agreement sweep, in seconds.
constexpr double kAgreementBudgetSeconds = 300.0;

int g_index = 0;
int g_passed = 0;

std::string fmt1(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

void emit(const std::string& name, bool pass, const std::string& detail) {
  ++g_index;
  if (pass) ++g_passed;
  std::printf("[%d/9] %s: %s (%s)\n", g_index, name.c_str(), pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

void emit_error(const std::string& name, const std::string& what) {
  emit(name, false, "suite aborted: " + what);
}

std::uint64_t counter(const ckmu::SuiteResult& r, const char* key) {
  const auto it = r.counters.find(key);
  return it == r.counters.end() ? 0 : it->second;
}

}  // namespace

int main() {
  using ckmu::SuiteOptions;
  using ckmu::SuiteResult;

  // The documented default suite sizes, restated explicitly.
  SuiteOptions opt;
  opt.seed = 1;
  opt.max_worlds = 3;
  opt.random_cases = 1000;
  opt.random_worlds = 6;
  opt.is5_models = 200;
  opt.is5_worlds = 5;
  opt.depth = 1;
  opt.threads = 0;

  const std::string agreement_name =
      "game and denotational semantics agree at every corpus world";
  const std::string strategy_name =
      "computed winning strategies pass the independent verifier";
  try {
    const SuiteResult t = ckmu::run_suite("thm32", opt);
    const std::uint64_t mismatches = counter(t, "xcheck_mismatches");
    const std::uint64_t bad_strategies = counter(t, "strategy_failures");
    emit(agreement_name,
         t.ok() && mismatches == 0 && t.seconds <= kAgreementBudgetSeconds,
         std::to_string(t.cases) + " checks, " + std::to_string(mismatches) +
             " mismatches, " + fmt1(t.seconds) + "s of " +
             fmt1(kAgreementBudgetSeconds) + "s budget");
    emit(strategy_name, t.ok() && bad_strategies == 0,
         std::to_string(t.cases) + " strategies verified, " +
             std::to_string(bad_strategies) + " rejected");
  } catch (const std::exception& e) {
    emit_error(agreement_name, e.what());
    emit_error(strategy_name, e.what());
  }

  struct Criterion {
    const char* suite;
    std::string name;
    bool (*extra)(const SuiteResult&);
    std::string (*detail)(const SuiteResult&);
  };
  const Criterion rest[] = {
      {"monotone", "positive open formulas are monotone and negative ones antitone",
       [](const SuiteResult& r) { return counter(r, "pairs_checked") > 0; },
       [](const SuiteResult& r) {
         return std::to_string(counter(r, "pairs_checked")) + " assignment pairs over " +
                std::to_string(counter(r, "models")) + " models";
       }},
      {"approximants",
       "approximant chains stabilize within |W|+1 steps to extremal fixed points",
       [](const SuiteResult& r) { return r.cases > 0; },
       [](const SuiteResult& r) {
         return std::to_string(r.cases) + " binder chains over " +
                std::to_string(counter(r, "models")) + " models";
       }},
      {"collapse",
       "two-step fixed-point elimination preserves denotations on IS5 models only",
       [](const SuiteResult& r) { return counter(r, "ck_counterexample_disagrees") == 1; },
       [](const SuiteResult& r) {
         return std::to_string(counter(r, "trace_steps_checked")) +
                " elimination steps checked, CK counterexample disagrees";
       }},
      {"heredity",
       "modal truths are hereditary along the composed relation on IS5 models",
       [](const SuiteResult& r) { return counter(r, "ck_violation_found") == 1; },
       [](const SuiteResult& r) {
         return std::to_string(counter(r, "pairs_checked")) +
                " pairs checked, CK violation exhibited";
       }},
      {"frames", "generated and enumerated frames satisfy the confluence laws",
       [](const SuiteResult& r) { return counter(r, "equivalence_models") > 0; },
       [](const SuiteResult& r) {
         return std::to_string(counter(r, "generated_is5_models")) + " generated + " +
                std::to_string(counter(r, "enumerated_is5_models")) + " enumerated + " +
                std::to_string(counter(r, "equivalence_models")) + " equivalence models";
       }},
      {"axioms", "the axiom and rule catalog is sound on its model classes",
       [](const SuiteResult& r) { return counter(r, "dp_countermodel_found") == 1; },
       [](const SuiteResult& r) {
         return std::to_string(counter(r, "instances_checked")) +
                " instances checked, distribution countermodel found";
       }},
      {"nonequiv", "classical modal equivalences are refuted by constructive countermodels",
       [](const SuiteResult& r) {
         return counter(r, "box_separation_found") == 1 &&
                counter(r, "negneg_separation_found") == 1;
       },
       [](const SuiteResult& r) {
         return std::to_string(r.cases) + " checks, both separations witnessed";
       }},
  };

  for (const Criterion& c : rest) {
    try {
      const SuiteResult r = ckmu::run_suite(c.suite, opt);
      emit(c.name, r.ok() && c.extra(r), c.detail(r));
    } catch (const std::exception& e) {
      emit_error(c.name, e.what());
    }
  }

  std::printf("acceptance: %d/9\n", g_passed);
  return g_passed == 9 ? 0 : 1;
}
