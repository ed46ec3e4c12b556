// Kripke models: world sets, validation, generators, enumeration, JSON.

#include <string>
#include <vector>

#include "ckmu/kripke.hpp"
#include "doctest.h"

using namespace ckmu;

namespace {

/// Two worlds, pre = refl + w0<=w1, no modal edges, V(P) = {w1}.
KripkeModel m1() {
  KripkeModel m;
  m.worlds = {"w0", "w1"};
  m.pre = {WorldSet::universe(2), WorldSet::single(1)};
  m.modal = {WorldSet{}, WorldSet{}};
  m.valuation["P"] = WorldSet::single(1);
  return m;
}

}  // namespace

TEST_CASE("world set operations") {
  WorldSet s = WorldSet::single(0) | WorldSet::single(2);
  CHECK(s.count() == 2);
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(1));
  CHECK(s.subset_of(WorldSet::universe(3)));
  CHECK_FALSE(WorldSet::universe(3).subset_of(s));
  CHECK((s & WorldSet::single(2)) == WorldSet::single(2));
  CHECK((s - WorldSet::single(2)) == WorldSet::single(0));
  CHECK(s.complement(3) == WorldSet::single(1));
  std::vector<int> seen;
  for (int w : s) seen.push_back(w);
  CHECK(seen == std::vector<int>{0, 2});
}

TEST_CASE("validate_ck accepts the fixture and reports law violations") {
  CHECK(validate_ck(m1()).empty());

  KripkeModel bad = m1();
  bad.valuation["P"] = WorldSet::single(0);  // not up-closed along pre
  const std::vector<std::string> v = validate_ck(bad);
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().find("P") != std::string::npos);

  KripkeModel irrefl = m1();
  irrefl.pre[1] = WorldSet{};  // pre not reflexive at w1
  CHECK_FALSE(validate_ck(irrefl).empty());

  KripkeModel fal = m1();
  fal.fallible = WorldSet::single(1);  // w1 fallible but has no modal successor
  CHECK_FALSE(validate_ck(fal).empty());
}

TEST_CASE("validate_is5 wants an equivalence modal relation and confluence") {
  CHECK_FALSE(validate_is5(m1()).empty());  // modal not reflexive

  KripkeModel m = m1();
  m.modal = {WorldSet::single(0), WorldSet::single(1)};
  CHECK(validate_ck(m).empty());
  CHECK(validate_is5(m).empty());  // identity classes are confluent under any pre

  m.modal = {WorldSet::universe(2), WorldSet::universe(2)};
  CHECK(validate_is5(m).empty());

  // Three worlds, classes {a, c} and {b}, a <= b: a ~ c and a <= b demand
  // some x >= c in b's class, but b's class is {b} and c <= b fails.
  KripkeModel m3;
  m3.worlds = {"a", "b", "c"};
  m3.pre = {WorldSet{0b011}, WorldSet::single(1), WorldSet::single(2)};
  m3.modal = {WorldSet{0b101}, WorldSet::single(1), WorldSet{0b101}};
  m3.valuation["P"] = WorldSet::single(1);
  CHECK(validate_ck(m3).empty());
  CHECK_FALSE(validate_is5(m3).empty());
  CHECK_FALSE(forward_confluent(m3));
}

TEST_CASE("confluence directions are independent") {
  // w0 <= w1, single modal edge w0 ~> w1: the climb from w0 to w1 strands
  // the forward square (w1 has no modal successor), the backward square
  // closes through w0 itself.
  KripkeModel m = m1();
  m.modal = {WorldSet::single(1), WorldSet{}};
  CHECK_FALSE(forward_confluent(m));
  CHECK(backward_confluent(m));

  // Single modal edge w1 ~> w0: forward squares close (nothing above w1),
  // but w0's preorder climb to w1 has no modal preimage above w1.
  m.modal = {WorldSet{}, WorldSet::single(0)};
  CHECK(forward_confluent(m));
  CHECK_FALSE(backward_confluent(m));
}

TEST_CASE("composed relation and transitivity helper") {
  KripkeModel m = m1();
  m.modal = {WorldSet::single(1), WorldSet{}};
  const std::vector<WorldSet> comp = compose_pre_modal(m);
  // w0: climbs to w0 or w1, modal edges only from w0 -> {w1}.
  CHECK(comp[0] == WorldSet::single(1));
  CHECK(comp[1] == WorldSet{});
  CHECK(relation_transitive(comp));
  CHECK(relation_transitive(m.pre));
}

TEST_CASE("close_repair restores the closure laws") {
  KripkeModel m = m1();
  m.valuation["P"] = WorldSet::single(0);  // violates monotonicity
  m.pre = {WorldSet::single(1) | WorldSet::single(0), WorldSet{}};  // irreflexive at w1
  const KripkeModel r = close_repair(m);
  CHECK(validate_ck(r).empty());
  CHECK(r.valuation.at("P").contains(1));  // up-closed now
}

TEST_CASE("enumerate_models hits the pinned 1-world count") {
  std::uint64_t n = 0;
  const std::uint64_t total =
      enumerate_models(EnumBounds{1, 0, false, false}, [&](const KripkeModel& m) {
        CHECK(validate_ck(m).empty());
        ++n;
        return true;
      });
  CHECK(total == 2);  // modal edge absent or present
  CHECK(n == 2);

  // Early stop: callback returning false ends the walk.
  std::uint64_t seen = 0;
  enumerate_models(EnumBounds{2, 1, true, false}, [&](const KripkeModel&) {
    ++seen;
    return seen < 5;
  });
  CHECK(seen == 5);
}

TEST_CASE("enumerated IS5 models pass validate_is5") {
  std::uint64_t n = 0;
  enumerate_models(EnumBounds{2, 1, false, true}, [&](const KripkeModel& m) {
    CHECK(validate_is5(m).empty());
    ++n;
    return true;
  });
  CHECK(n > 0);
}

TEST_CASE("generators are deterministic per seed and always valid") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const KripkeModel a = gen_ck(seed, GenBounds{6, 2});
    const KripkeModel b = gen_ck(seed, GenBounds{6, 2});
    CHECK(model_to_json(a) == model_to_json(b));
    CHECK(validate_ck(a).empty());
    CHECK(a.size() <= 6);
    CHECK(a.valuation.count("P") == 1);
    CHECK(a.valuation.count("Q") == 1);

    const KripkeModel i = gen_is5(seed, GenBounds{5, 1});
    CHECK(validate_is5(i).empty());
    CHECK(i.fallible.empty());
    CHECK(i.size() <= 5);
  }
  CHECK(model_to_json(gen_ck(1, GenBounds{6, 1})) !=
        model_to_json(gen_ck(2, GenBounds{6, 1})));
}

TEST_CASE("model JSON round trips and ids are stable") {
  const KripkeModel m = m1();
  const std::string text = model_to_json(m);
  const KripkeModel back = model_from_json(text);
  CHECK(model_to_json(back) == text);
  CHECK(model_id(back) == model_id(m));
  CHECK(back.world_index("w1") == 1);
  CHECK(back.world_index("nope") == -1);

  CHECK_THROWS_AS(model_from_json("{}"), ModelError);
  CHECK_THROWS_AS(model_from_json("not json"), ModelError);
  CHECK_THROWS_AS(model_from_json(R"({"worlds":["a"],"fallible":[],"pre":[["a","b"]],"modal":[],"valuation":{}})"),
                  ModelError);  // unknown world in a relation
}
