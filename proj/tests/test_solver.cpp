// Parity-game solver: winners, strategies, the independent verifier, and the
// semantics/game cross-check (including the deviation regression models).

#include <algorithm>
#include <string>
#include <vector>

#include "ckmu/game.hpp"
#include "ckmu/kripke.hpp"
#include "ckmu/semantics.hpp"
#include "ckmu/solver.hpp"
#include "doctest.h"

using namespace ckmu;

namespace {

KripkeModel m1() {
  KripkeModel m;
  m.worlds = {"w0", "w1"};
  m.pre = {WorldSet::universe(2), WorldSet::single(1)};
  m.modal = {WorldSet{}, WorldSet{}};
  m.valuation["P"] = WorldSet::single(1);
  return m;
}

/// Fallible world b above a, modal edges a ~> b and b ~> b. The least fixed
/// point of <> stays empty here while its two-step unrolling does not.
KripkeModel fallible_pair() {
  KripkeModel m;
  m.worlds = {"a", "b"};
  m.fallible = WorldSet::single(1);
  m.pre = {WorldSet::single(0), WorldSet::single(1)};
  m.modal = {WorldSet::single(1), WorldSet::single(1)};
  m.valuation["P"] = WorldSet::single(1);
  return m;
}

}  // namespace

TEST_CASE("stuck owner loses immediately") {
  const KripkeModel m = m1();
  // <w0, P, V>: verifier owns the false proposition and is stuck.
  const Arena a = build_arena(m, 0, parse("P"));
  REQUIRE(a.size() == 1);
  const SolveResult r = solve(a);
  CHECK(r.winner_of[0] == Player::II);
  CHECK(r.strategy_II.region == std::vector<int>{0});
  CHECK(r.strategy_II.choice.empty());
  CHECK(r.strategy_I.region.empty());
  CHECK(verify_strategy(a, r.strategy_I).ok);
  CHECK(verify_strategy(a, r.strategy_II).ok);

  const Arena b = build_arena(m, 1, parse("P"));
  CHECK(solve(b).winner_of[0] == Player::I);
}

TEST_CASE("negation game on the chain picks the tight challenge") {
  const KripkeModel m = m1();
  const Arena a = build_arena(m, 0, parse("~ P"));
  const SolveResult r = solve(a);
  CHECK(r.winner_of[0] == Player::II);  // II sends the play to <w1, P, R>
  CHECK(r.strategy_II.choice.at(0) == 2);
  CHECK(verify_strategy(a, r.strategy_I).ok);
  CHECK(verify_strategy(a, r.strategy_II).ok);
}

TEST_CASE("every position gets exactly one winner and both strategies verify") {
  const KripkeModel m = m1();
  for (const char* text : {"P \\/ ~P", "~~P", "mu X. P \\/ <> X", "nu X. [] X",
                           "mu X. <> X", "P -> P", "[] P", "<> top"}) {
    CAPTURE(text);
    const Arena a = build_arena(m, 0, parse(text));
    const SolveResult r = solve(a);
    REQUIRE(r.winner_of.size() == a.size());
    const StrategyCheck cI = verify_strategy(a, r.strategy_I);
    const StrategyCheck cII = verify_strategy(a, r.strategy_II);
    CHECK_MESSAGE(cI.ok, cI.reason);
    CHECK_MESSAGE(cII.ok, cII.reason);
    // Regions partition the positions.
    CHECK(r.strategy_I.region.size() + r.strategy_II.region.size() == a.size());
  }
}

TEST_CASE("verifier rejects doctored strategies") {
  KripkeModel m = m1();
  m.modal = {WorldSet::single(1), WorldSet::single(1)};
  const Arena a = build_arena(m, 0, parse("nu X. <> X"));
  const SolveResult r = solve(a);
  REQUIRE(r.winner_of[0] == Player::I);

  // Claiming the opponent's region fails.
  Strategy wrong = r.strategy_I;
  wrong.player = Player::II;
  CHECK_FALSE(verify_strategy(a, wrong).ok);

  // Dropping a choice fails.
  Strategy incomplete = r.strategy_I;
  REQUIRE(!incomplete.choice.empty());
  incomplete.choice.erase(incomplete.choice.begin());
  CHECK_FALSE(verify_strategy(a, incomplete).ok);

  // Redirecting a choice to a non-successor fails.
  Strategy illegal = r.strategy_I;
  const int key = illegal.choice.begin()->first;
  int bogus = -1;
  for (int q = 0; q < static_cast<int>(a.size()); ++q) {
    const auto& ms = a.moves[key];
    if (std::find(ms.begin(), ms.end(), q) == ms.end()) {
      bogus = q;
      break;
    }
  }
  REQUIRE(bogus >= 0);
  illegal.choice[key] = bogus;
  CHECK_FALSE(verify_strategy(a, illegal).ok);
}

TEST_CASE("verifier catches wrong-parity cycles") {
  KripkeModel m = m1();
  m.modal = {WorldSet::single(1), WorldSet::single(1)};
  // mu X. <> X diverges, so player II wins everywhere; handing the same
  // region and choices to player I must trip the cycle check.
  const Arena a = build_arena(m, 0, parse("mu X. <> X"));
  const SolveResult r = solve(a);
  REQUIRE(r.winner_of[0] == Player::II);
  Strategy forged;
  forged.player = Player::I;
  forged.region = r.strategy_II.region;
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (a.owner[p] == Player::I && !a.moves[p].empty())
      forged.choice[static_cast<int>(p)] = a.moves[p].front();
  }
  const StrategyCheck c = verify_strategy(a, forged);
  CHECK_FALSE(c.ok);
}

TEST_CASE("xcheck agrees with the evaluator on the chain") {
  const KripkeModel m = m1();
  for (const char* text :
       {"P", "~P", "P \\/ ~P", "~~P", "[] P", "<> P", "mu X. P \\/ <> X",
        "nu X. [] X", "nu X. mu Y. <> (X \\/ Y)"}) {
    CAPTURE(text);
    const XCheckResult r = xcheck(m, parse(text));
    CHECK(r.all_agree);
    CHECK(r.entries.size() == 2);
  }
}

TEST_CASE("xcheck regression: least fixed point at a fallible world") {
  // The game must refute mu X. <> X everywhere on the fallible pair, exactly
  // as the approximants do — a blanket fallible-wins rule would break this.
  const KripkeModel m = fallible_pair();
  REQUIRE(validate_ck(m).empty());
  Evaluator ev(m);
  CHECK(ev.evaluate(parse("mu X. <> X")) == WorldSet{});
  CHECK(ev.evaluate(parse("<> <> bot")) == WorldSet::universe(2));

  const XCheckResult r = xcheck(m, parse("mu X. <> X"));
  CHECK(r.all_agree);
  const Arena a = build_arena(m, 0, parse("mu X. <> X"));
  CHECK(solve(a).winner_of[0] == Player::II);
}

TEST_CASE("xcheck regression: negation challenges skip fallible worlds") {
  // v <= fallible u with V(P) = {u}: ~P holds at v because the only
  // P-witness above v is fallible; the refuter may not use it.
  KripkeModel m;
  m.worlds = {"v", "u"};
  m.fallible = WorldSet::single(1);
  m.pre = {WorldSet::universe(2), WorldSet::single(1)};
  m.modal = {WorldSet{}, WorldSet::single(1)};
  m.valuation["P"] = WorldSet::single(1);
  REQUIRE(validate_ck(m).empty());

  Evaluator ev(m);
  CHECK(ev.evaluate(parse("~P")) == WorldSet::universe(2));
  CHECK(xcheck(m, parse("~P")).all_agree);
  CHECK(xcheck(m, parse("~ ~ P")).all_agree);

  // At v the negation position's only challenge is v itself.
  const Arena a = build_arena(m, 0, parse("~ P"));
  REQUIRE(a.moves[0].size() == 1);
  CHECK(solve(a).winner_of[0] == Player::I);
}

TEST_CASE("xcheck across fallible worlds for fixed-point-free formulas") {
  const KripkeModel m = fallible_pair();
  for (const char* text :
       {"bot", "~P", "P /\\ ~P", "[] bot", "<> bot", "P -> bot", "~ <> top"}) {
    CAPTURE(text);
    const XCheckResult r = xcheck(m, parse(text));
    CHECK(r.all_agree);
    CHECK(r.entries[1].semantics);  // the fallible world satisfies everything
  }
}

TEST_CASE("strategy JSON names the winner and its choices") {
  const KripkeModel m = m1();
  const Arena a = build_arena(m, 0, parse("~ P"));
  const SolveResult r = solve(a);
  const std::string s = strategy_to_json(a, r);
  CHECK(s.find("\"winner\": \"II\"") != std::string::npos);
  CHECK(s.find("⟨w0, ~P, V⟩") != std::string::npos);
  CHECK(s.find("⟨w1, P, R⟩") != std::string::npos);
}
