// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT
//
// Command-line front end. Subcommands map 1:1 onto the library surface:
// check / game / xcheck drive one model+formula, collapse rewrites formulas,
// validate-model / gen / axioms / arena-dot / corpus cover models, axiom
// soundness, visualization, and the property suites.
//
// Exit codes: 0 = success (property holds / all checks pass), 1 = the checked
// property fails, 2 = usage, parse, or model errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ckmu/collapse.hpp"
#include "ckmu/corpus.hpp"
#include "ckmu/formula.hpp"
#include "ckmu/game.hpp"
#include "ckmu/kripke.hpp"
#include "ckmu/semantics.hpp"
#include "ckmu/solver.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

/// Controlled exit with a message on stderr.
struct ExitError {
  int code;
  std::string message;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExitError{2, "cannot open file: " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExitError{2, "cannot write file: " + path};
  out << text;
}

ckmu::KripkeModel load_model(const std::string& path) {
  return ckmu::model_from_json(slurp(path));
}

ckmu::KripkeModel load_valid_model(const std::string& path) {
  ckmu::KripkeModel m = load_model(path);
  const std::vector<std::string> bad = ckmu::validate_ck(m);
  if (!bad.empty())
    throw ExitError{2, "invalid CK model '" + path + "': " + bad.front()};
  return m;
}

int world_or_throw(const ckmu::KripkeModel& m, const std::string& name) {
  const int w = m.world_index(name);
  if (w < 0) throw ExitError{2, "unknown world: " + name};
  return w;
}

/// Formula from --formula text or --formula-file path (exactly one), parsed
/// and brought into well-named form.
ckmu::FormulaPtr formula_arg(const std::string& text, const std::string& file,
                             bool require_closed = true) {
  if (text.empty() == file.empty())
    throw ExitError{2, "provide exactly one of --formula and --formula-file"};
  std::string source = text;
  if (!file.empty()) {
    source = slurp(file);
    while (!source.empty() && (source.back() == '\n' || source.back() == '\r'))
      source.pop_back();
  }
  ckmu::FormulaPtr f = ckmu::parse(source);
  if (require_closed && !f->is_closed())
    throw ExitError{2, "formula must be closed (no free fixed-point variables)"};
  if (!ckmu::is_well_named(f)) f = ckmu::well_name(f);
  return f;
}

std::string set_to_text(const ckmu::KripkeModel& m, ckmu::WorldSet s) {
  std::string out = "{";
  bool first = true;
  for (int w : s) {
    if (!first) out += ", ";
    out += m.worlds[static_cast<std::size_t>(w)];
    first = false;
  }
  return out + "}";
}

ordered_json set_to_json(const ckmu::KripkeModel& m, ckmu::WorldSet s) {
  ordered_json arr = ordered_json::array();
  for (int w : s) arr.push_back(m.worlds[static_cast<std::size_t>(w)]);
  return arr;
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

// ---- subcommands -------------------------------------------------------------------

int cmd_check(const std::string& model_path, const std::string& world,
              const std::string& ftext, const std::string& ffile, bool json) {
  const ckmu::KripkeModel m = load_valid_model(model_path);
  const ckmu::FormulaPtr f = formula_arg(ftext, ffile);
  const int w = world_or_throw(m, world);
  ckmu::Evaluator ev(m);
  const ckmu::WorldSet denotation = ev.evaluate(f);
  const bool holds = denotation.contains(w);
  if (json) {
    ordered_json j;
    j["model"] = ckmu::model_id(m);
    j["world"] = world;
    j["formula"] = ckmu::print(f);
    j["holds"] = holds;
    j["denotation"] = set_to_json(m, denotation);
    emit(j);
  } else {
    std::cout << ckmu::print(f) << (holds ? " holds at '" : " does not hold at '")
              << world << "'\n"
              << "denotation: " << set_to_text(m, denotation) << "\n";
  }
  return holds ? 0 : 1;
}

int cmd_game(const std::string& model_path, const std::string& world,
             const std::string& ftext, const std::string& ffile,
             const std::string& strategy_out, bool json) {
  const ckmu::KripkeModel m = load_valid_model(model_path);
  const ckmu::FormulaPtr f = formula_arg(ftext, ffile);
  const int w = world_or_throw(m, world);
  ckmu::ArenaBuilder builder;
  const ckmu::Arena a = builder.build(m, w, f);
  const ckmu::SolveResult r = ckmu::solve(a);
  const ckmu::Player winner = r.winner_of[0];
  const std::string payload = ckmu::strategy_to_json(a, r);
  if (!strategy_out.empty()) spill(strategy_out, payload + "\n");
  if (json) {
    ordered_json j;
    j["model"] = ckmu::model_id(m);
    j["world"] = world;
    j["formula"] = ckmu::print(f);
    j["winner"] = winner == ckmu::Player::I ? "I" : "II";
    j["positions"] = a.size();
    j["strategy"] = ordered_json::parse(payload);
    emit(j);
  } else {
    std::cout << "winner at '" << world << "': player "
              << (winner == ckmu::Player::I ? "I" : "II") << "\n"
              << "positions: " << a.size() << "\n";
    if (!strategy_out.empty())
      std::cout << "strategy written to: " << strategy_out << "\n";
  }
  return winner == ckmu::Player::I ? 0 : 1;
}

int cmd_xcheck(const std::string& model_path, const std::string& ftext,
               const std::string& ffile, const std::string& world, bool json) {
  const ckmu::KripkeModel m = load_valid_model(model_path);
  const ckmu::FormulaPtr f = formula_arg(ftext, ffile);
  ckmu::XCheckResult r;
  if (world.empty()) {
    r = ckmu::xcheck(m, f);
  } else {
    r = ckmu::xcheck(m, f, {world_or_throw(m, world)});
  }
  if (json) {
    ordered_json j;
    j["model"] = ckmu::model_id(m);
    j["formula"] = ckmu::print(f);
    ordered_json entries = ordered_json::array();
    for (const ckmu::XCheckEntry& e : r.entries) {
      ordered_json one;
      one["world"] = m.worlds[static_cast<std::size_t>(e.world)];
      one["semantics"] = e.semantics;
      one["game"] = e.game == ckmu::Player::I ? "I" : "II";
      one["agree"] = e.agree;
      entries.push_back(one);
    }
    j["entries"] = entries;
    j["all_agree"] = r.all_agree;
    emit(j);
  } else {
    for (const ckmu::XCheckEntry& e : r.entries)
      std::cout << m.worlds[static_cast<std::size_t>(e.world)]
                << ": semantics=" << (e.semantics ? "true" : "false")
                << " game=" << (e.game == ckmu::Player::I ? "I" : "II")
                << " agree=" << (e.agree ? "yes" : "no") << "\n";
    std::cout << "all agree: " << (r.all_agree ? "yes" : "no") << "\n";
  }
  return r.all_agree ? 0 : 1;
}

int cmd_collapse(const std::string& ftext, const std::string& ffile, bool trace,
                 bool json) {
  const ckmu::FormulaPtr f = formula_arg(ftext, ffile);
  const ckmu::CollapseTrace tr = ckmu::collapse(f);
  if (json) {
    ordered_json j;
    j["input"] = ckmu::print(tr.input);
    j["result"] = ckmu::print(tr.result);
    ordered_json steps = ordered_json::array();
    for (const ckmu::CollapseStep& s : tr.steps) {
      ordered_json one;
      one["before"] = ckmu::print(s.before);
      one["redex"] = ckmu::print(s.redex);
      one["replacement"] = ckmu::print(s.replacement);
      one["after"] = ckmu::print(s.after);
      steps.push_back(one);
    }
    j["steps"] = steps;
    emit(j);
  } else {
    if (trace) {
      std::cout << "input: " << ckmu::print(tr.input) << "\n";
      std::size_t i = 0;
      for (const ckmu::CollapseStep& s : tr.steps) {
        std::cout << "step " << ++i << ": " << ckmu::print(s.redex) << "  =>  "
                  << ckmu::print(s.replacement) << "\n"
                  << "  after: " << ckmu::print(s.after) << "\n";
      }
    }
    std::cout << "result: " << ckmu::print(tr.result) << "\n";
  }
  return 0;
}

int cmd_validate(const std::string& model_path, bool is5, bool repair, bool json) {
  const ckmu::KripkeModel m = load_model(model_path);
  std::vector<std::string> violations = ckmu::validate_ck(m);
  if (is5)
    for (std::string& v : ckmu::validate_is5(m)) violations.push_back(std::move(v));
  if (!repair) {
    if (json) {
      ordered_json j;
      j["valid"] = violations.empty();
      j["worlds"] = m.size();
      j["is5_checked"] = is5;
      j["violations"] = violations;
      emit(j);
    } else if (violations.empty()) {
      std::cout << "valid " << (is5 ? "IS5" : "CK") << " model: " << m.size()
                << " world(s), " << m.valuation.size() << " proposition(s)\n";
    } else {
      std::cout << "invalid " << (is5 ? "IS5" : "CK") << " model:\n";
      for (const std::string& v : violations) std::cout << "  - " << v << "\n";
    }
    return violations.empty() ? 0 : 1;
  }
  const ckmu::KripkeModel rm = ckmu::close_repair(m);
  std::vector<std::string> after = ckmu::validate_ck(rm);
  if (is5)
    for (std::string& v : ckmu::validate_is5(rm)) after.push_back(std::move(v));
  if (json) {
    ordered_json j;
    j["valid"] = violations.empty();
    j["violations"] = violations;
    j["repaired"] = ordered_json::parse(ckmu::model_to_json(rm));
    j["repaired_valid"] = after.empty();
    j["repaired_violations"] = after;
    emit(j);
  } else {
    for (const std::string& v : violations) std::cerr << "repairing: " << v << "\n";
    std::cout << ckmu::model_to_json(rm) << "\n";
  }
  return after.empty() ? 0 : 1;
}

int cmd_gen(bool want_is5, bool want_ck, std::uint64_t seed, int max_worlds,
            int props, const std::string& out, bool json) {
  if (want_is5 == want_ck)
    throw ExitError{2, "provide exactly one of --is5 and --ck"};
  const ckmu::GenBounds bounds{max_worlds, props};
  const ckmu::KripkeModel m =
      want_is5 ? ckmu::gen_is5(seed, bounds) : ckmu::gen_ck(seed, bounds);
  const std::string text = ckmu::model_to_json(m);
  if (!out.empty()) {
    spill(out, text + "\n");
    if (json) {
      ordered_json j;
      j["id"] = ckmu::model_id(m);
      j["worlds"] = m.size();
      j["path"] = out;
      emit(j);
    } else {
      std::cout << "wrote model " << ckmu::model_id(m) << ": " << m.size()
                << " world(s) -> " << out << "\n";
    }
  } else {
    std::cout << text << "\n";
  }
  return 0;
}

int cmd_axioms(const std::string& model_path, int depth, bool is5_only, bool json) {
  const ckmu::KripkeModel m = load_valid_model(model_path);
  std::vector<std::string> subset;
  if (is5_only) {
    if (!ckmu::validate_is5(m).empty())
      throw ExitError{2, "--is5-only requires a valid IS5 model"};
    for (const ckmu::AxiomSchema& s : ckmu::axiom_catalog().axioms)
      if (s.model_class == ckmu::ModelClass::IS5) subset.push_back(s.name);
  }
  ckmu::AxiomReport rep;
  try {
    rep = ckmu::check_axioms(m, depth, subset);
  } catch (const ckmu::ModelError& e) {
    throw ExitError{2, e.what()};
  }
  const bool model_is5 = ckmu::validate_is5(m).empty();
  if (json) {
    ordered_json j;
    j["model"] = ckmu::model_id(m);
    j["is5"] = model_is5;
    j["depth"] = depth;
    ordered_json entries = ordered_json::array();
    for (const ckmu::AxiomReport::Entry& e : rep.entries) {
      ordered_json one;
      one["schema"] = e.schema;
      one["rule"] = e.is_rule;
      one["applicable"] = e.applicable;
      one["instances"] = e.instances;
      one["failures"] = e.failures;
      if (e.failures > 0) one["witness"] = e.witness;
      entries.push_back(one);
    }
    j["entries"] = entries;
    j["ok"] = rep.ok;
    emit(j);
  } else {
    std::cout << "model: " << ckmu::model_id(m) << (model_is5 ? " (IS5)" : " (CK)")
              << ", instantiation depth " << depth << "\n";
    for (const ckmu::AxiomReport::Entry& e : rep.entries) {
      std::cout << (e.is_rule ? "rule " : "axiom ") << e.schema << ": ";
      if (!e.applicable) {
        std::cout << "not applicable\n";
        continue;
      }
      std::cout << e.instances << " instance(s), " << e.failures << " failure(s)\n";
      if (e.failures > 0) std::cout << "  first failure: " << e.witness << "\n";
    }
    std::cout << (rep.ok ? "all applicable schemas sound\n"
                         : "FAIL: some schemas have failing instances\n");
  }
  return rep.ok ? 0 : 1;
}

int cmd_arena_dot(const std::string& model_path, const std::string& world,
                  const std::string& ftext, const std::string& ffile,
                  const std::string& out, bool json) {
  const ckmu::KripkeModel m = load_valid_model(model_path);
  const ckmu::FormulaPtr f = formula_arg(ftext, ffile);
  const int w = world_or_throw(m, world);
  ckmu::ArenaBuilder builder;
  const ckmu::Arena a = builder.build(m, w, f);
  const std::string dot = ckmu::arena_to_dot(a);
  if (!out.empty()) spill(out, dot);
  if (json) {
    ordered_json j;
    j["model"] = ckmu::model_id(m);
    j["world"] = world;
    j["formula"] = ckmu::print(f);
    j["positions"] = a.size();
    if (out.empty())
      j["dot"] = dot;
    else
      j["path"] = out;
    emit(j);
  } else if (out.empty()) {
    std::cout << dot;
  } else {
    std::cout << "arena with " << a.size() << " position(s) -> " << out << "\n";
  }
  return 0;
}

int cmd_corpus(const std::string& suite, const ckmu::SuiteOptions& opt, bool json) {
  ckmu::SuiteResult res;
  try {
    res = ckmu::run_suite(suite, opt);
  } catch (const std::invalid_argument& e) {
    throw ExitError{2, e.what()};
  }
  if (json)
    std::cout << ckmu::suite_to_json(res) << "\n";
  else
    std::cout << ckmu::suite_to_text(res);
  return res.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ckmu — model checker for the constructive modal mu-calculus"};
  app.require_subcommand(1);
  int rc = 0;

  // Shared option storage. Each subcommand binds the fields it uses.
  std::string model_path, world, ftext, ffile, out_path, suite;
  bool json = false, trace = false, is5 = false, ck = false, repair = false;
  bool is5_only = false;
  std::uint64_t seed = 1;
  int max_worlds = 6, props = 1, depth = 1;
  ckmu::SuiteOptions opt;

  auto add_model = [&](CLI::App* s) {
    s->add_option("--model", model_path, "model JSON file")->required();
  };
  auto add_formula = [&](CLI::App* s) {
    s->add_option("--formula", ftext, "formula text");
    s->add_option("--formula-file", ffile, "file containing the formula");
  };
  auto add_json = [&](CLI::App* s) {
    s->add_flag("--json", json, "machine-readable output");
  };

  CLI::App* c_check = app.add_subcommand("check", "evaluate a formula at a world");
  add_model(c_check);
  c_check->add_option("--world", world, "world name")->required();
  add_formula(c_check);
  add_json(c_check);
  c_check->callback([&] { rc = cmd_check(model_path, world, ftext, ffile, json); });

  CLI::App* c_game =
      app.add_subcommand("game", "solve the evaluation game at a world");
  add_model(c_game);
  c_game->add_option("--world", world, "world name")->required();
  add_formula(c_game);
  c_game->add_option("--strategy-out", out_path, "write the winner's strategy here");
  add_json(c_game);
  c_game->callback(
      [&] { rc = cmd_game(model_path, world, ftext, ffile, out_path, json); });

  CLI::App* c_xcheck = app.add_subcommand(
      "xcheck", "cross-check semantics against the game at every world");
  add_model(c_xcheck);
  add_formula(c_xcheck);
  c_xcheck->add_option("--world", world, "restrict to one world");
  add_json(c_xcheck);
  c_xcheck->callback([&] { rc = cmd_xcheck(model_path, ftext, ffile, world, json); });

  CLI::App* c_collapse =
      app.add_subcommand("collapse", "eliminate fixed points by two-step unrolling");
  add_formula(c_collapse);
  c_collapse->add_flag("--trace", trace, "print every rewrite step");
  add_json(c_collapse);
  c_collapse->callback([&] { rc = cmd_collapse(ftext, ffile, trace, json); });

  CLI::App* c_validate =
      app.add_subcommand("validate-model", "check the model laws");
  add_model(c_validate);
  c_validate->add_flag("--is5", is5, "also check the IS5 laws");
  c_validate->add_flag("--repair", repair, "emit the closure-repaired model");
  add_json(c_validate);
  c_validate->callback([&] { rc = cmd_validate(model_path, is5, repair, json); });

  CLI::App* c_gen = app.add_subcommand("gen", "generate a seeded random model");
  c_gen->add_flag("--is5", is5, "generate an IS5 model");
  c_gen->add_flag("--ck", ck, "generate a CK model");
  c_gen->add_option("--seed", seed, "RNG seed");
  c_gen->add_option("--max-worlds", max_worlds, "world bound")->default_val(6);
  c_gen->add_option("--props", props, "number of propositions")->default_val(1);
  c_gen->add_option("--out", out_path, "write the model here");
  add_json(c_gen);
  c_gen->callback(
      [&] { rc = cmd_gen(is5, ck, seed, max_worlds, props, out_path, json); });

  CLI::App* c_axioms =
      app.add_subcommand("axioms", "check axiom and rule soundness on a model");
  add_model(c_axioms);
  c_axioms->add_option("--depth", depth, "instantiation depth (0, 1 or 2)")
      ->default_val(1);
  c_axioms->add_flag("--is5-only", is5_only,
                     "check only the IS5-specific schemas (model must be IS5)");
  add_json(c_axioms);
  c_axioms->callback([&] { rc = cmd_axioms(model_path, depth, is5_only, json); });

  CLI::App* c_dot =
      app.add_subcommand("arena-dot", "render the evaluation arena as Graphviz");
  add_model(c_dot);
  c_dot->add_option("--world", world, "world name")->required();
  add_formula(c_dot);
  c_dot->add_option("--out", out_path, "write the DOT file here");
  add_json(c_dot);
  c_dot->callback(
      [&] { rc = cmd_arena_dot(model_path, world, ftext, ffile, out_path, json); });

  CLI::App* c_corpus = app.add_subcommand("corpus", "run a property suite");
  c_corpus
      ->add_option("--suite", suite,
                   "one of: thm32, collapse, heredity, axioms, frames")
      ->required()
      ->check(CLI::IsMember({"thm32", "collapse", "heredity", "axioms", "frames"}));
  c_corpus->add_option("--seed", opt.seed, "RNG seed");
  c_corpus->add_option("--max-worlds", opt.max_worlds, "exhaustive world bound");
  c_corpus->add_option("--cases", opt.random_cases, "randomized cases (thm32)");
  c_corpus->add_option("--is5-models", opt.is5_models, "generated IS5 model count");
  c_corpus->add_option("--depth", opt.depth, "axiom instantiation depth");
  c_corpus->add_option("--threads", opt.threads, "worker threads (0 = auto)");
  add_json(c_corpus);
  c_corpus->callback([&] { rc = cmd_corpus(suite, opt, json); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ExitError& e) {
    if (!e.message.empty()) std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const ckmu::ParseError& e) {
    std::cerr << "error: formula syntax error at offset " << e.offset << ": "
              << e.what() << "\n";
    return 2;
  } catch (const ckmu::FormulaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ckmu::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
