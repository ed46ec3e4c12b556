// Evaluation-game arenas: structure, ownership, priorities, rendering.

#include <algorithm>
#include <string>

#include "ckmu/game.hpp"
#include "ckmu/kripke.hpp"
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

int max_priority(const Arena& a) {
  return *std::max_element(a.priority.begin(), a.priority.end());
}

}  // namespace

TEST_CASE("negation arena on the chain") {
  const KripkeModel m = m1();
  const Arena a = build_arena(m, 0, parse("~ P"));

  // <w0, ~P, V> branches to <u, P, R> for the non-fallible u >= w0.
  REQUIRE(a.size() == 3);
  CHECK(a.positions[0].role_of_I == Role::V);
  CHECK(a.owner[0] == Player::II);  // refuter-role player picks the challenge
  CHECK(a.moves[0] == std::vector<int>{1, 2});
  CHECK(a.positions[1].role_of_I == Role::R);
  CHECK(a.positions[2].role_of_I == Role::R);

  // <w0, P, R>: P false, so the verifier-role player (II) is stuck.
  CHECK(a.owner[1] == Player::II);
  CHECK(a.moves[1].empty());
  // <w1, P, R>: P true, so the refuter-role player (I) is stuck.
  CHECK(a.owner[2] == Player::I);
  CHECK(a.moves[2].empty());

  CHECK(max_priority(a) == 0);  // no binders anywhere
  CHECK(a.render(0) == "⟨w0, ~P, V⟩");
}

TEST_CASE("conjunction and disjunction ownership") {
  const KripkeModel m = m1();
  const Arena a = build_arena(m, 0, parse("P \\/ ~P"));
  CHECK(a.owner[0] == Player::I);  // verifier picks the disjunct
  const Arena b = build_arena(m, 0, parse("P /\\ ~P"));
  CHECK(b.owner[0] == Player::II);  // refuter picks the conjunct
}

TEST_CASE("modal positions unfold through auxiliary climbs") {
  KripkeModel m = m1();
  m.modal = {WorldSet::single(1), WorldSet::single(1)};
  const Arena a = build_arena(m, 0, parse("<> P"));

  // Initial diamond position: refuter-role climbs the preorder first.
  CHECK(a.owner[0] == Player::II);
  REQUIRE(a.moves[0].size() == 2);
  const Position& aux = a.positions[a.moves[0][0]];
  CHECK(aux.aux == Position::Aux::Dia);
  // At the auxiliary position the verifier-role player picks the successor.
  CHECK(a.owner[a.moves[0][0]] == Player::I);

  const Arena b = build_arena(m, 0, parse("[] P"));
  CHECK(b.owner[0] == Player::II);
  const Position& baux = b.positions[b.moves[0][0]];
  CHECK(baux.aux == Position::Aux::Box);
  CHECK(b.owner[b.moves[0][0]] == Player::II);
}

TEST_CASE("implication hands the verifier the branch point") {
  const KripkeModel m = m1();
  const Arena a = build_arena(m, 0, parse("P -> P"));
  CHECK(a.owner[0] == Player::II);  // refuter climbs the preorder
  const int branch = a.moves[0][0];
  CHECK(a.positions[branch].aux == Position::Aux::Imp);
  CHECK(a.owner[branch] == Player::I);
  // Two choices: challenge the antecedent (role swap) or claim the consequent.
  CHECK(a.moves[branch].size() == 2);
}

TEST_CASE("binder priorities follow the fixed-point table") {
  const KripkeModel m = m1();

  // Single nu owned by player I: priority 2.
  const Arena a = build_arena(m, 0, parse("nu X. [] X"));
  CHECK(max_priority(a) == 2);

  // nu outer (priority 4, player I), mu inner (priority 1, player II).
  KripkeModel k = m1();
  k.modal = {WorldSet::single(1), WorldSet::single(1)};
  const Arena b = build_arena(k, 0, parse("nu X. mu Y. <> (X \\/ Y)"));
  CHECK(max_priority(b) == 4);
  bool saw1 = false;
  for (std::size_t p = 0; p < b.size(); ++p)
    if (b.priority[p] == 1) saw1 = true;
  CHECK(saw1);

  // Under a negation the roles swap: the nu binder lands with player II.
  const Arena c = build_arena(m, 0, parse("~ (nu X. [] X)"));
  bool saw_odd = false;
  for (std::size_t p = 0; p < c.size(); ++p)
    if (c.priority[p] == 1) saw_odd = true;
  CHECK(saw_odd);
  CHECK(max_priority(c) == 1);
}

TEST_CASE("arena construction demands closed well-named input") {
  const KripkeModel m = m1();
  CHECK_THROWS_AS(build_arena(m, 0, parse("mu X. <> X \\/ <> X")), FormulaError);
  CHECK_THROWS_AS(build_arena(m, 0, mu("X", disj(var("X"), dia(var("X"))))),
                  FormulaError);  // unguarded occurrence
}

TEST_CASE("builder reuse produces identical arenas") {
  const KripkeModel m = m1();
  ArenaBuilder builder;
  const Arena a = builder.build(m, 0, parse("mu X. P \\/ <> X"));
  const Arena b = builder.build(m, 0, parse("mu X. P \\/ <> X"));
  REQUIRE(a.size() == b.size());
  for (std::size_t p = 0; p < a.size(); ++p) {
    CHECK(a.positions[p] == b.positions[p]);
    CHECK(a.owner[p] == b.owner[p]);
    CHECK(a.priority[p] == b.priority[p]);
    CHECK(a.moves[p] == b.moves[p]);
  }
  const Arena c = builder.build(m, 1, parse("~ P"));
  CHECK(c.size() == 2);  // only w1 >= w1
}

TEST_CASE("dot output shows owners and priorities") {
  const KripkeModel m = m1();
  const Arena a = build_arena(m, 0, parse("nu X. [] X"));
  const std::string dot = arena_to_dot(a);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("p=2") != std::string::npos);  // the nu binder's priority

  // ~P at w0 has positions for both owners: the challenge positions belong
  // to II (diamonds), the true proposition at w1 to I (box).
  const std::string dot2 = arena_to_dot(build_arena(m, 0, parse("~ P")));
  CHECK(dot2.find("box") != std::string::npos);
  CHECK(dot2.find("diamond") != std::string::npos);
}
