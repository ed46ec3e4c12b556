// Formula syntax: parser, printer, polarity, well-naming, fixed-point table.

#include <set>
#include <string>
#include <vector>

#include "ckmu/formula.hpp"
#include "doctest.h"

using namespace ckmu;

TEST_CASE("parse/print round trips") {
  for (const char* text : {
           "P",
           "top",
           "bot",
           "~P",
           "~~P",
           "[] P",
           "<> (P /\\ Q)",
           "P /\\ Q \\/ R",
           "P -> Q -> R",
           "nu X. [] X",
           "mu X. P \\/ <> X",
           "nu X. mu Y. <> (X \\/ Y)",
           "(mu X. <> X) \\/ P",
           "~ (nu X. [] X)",
       }) {
    const FormulaPtr f = parse(text);
    const std::string printed = print(f);
    CHECK(equal(parse(printed), f));
    CHECK(print(parse(printed)) == printed);
  }
  CHECK(print(parse("nu X. [] X")) == "nu X. [] X");
  CHECK(print(parse("~ ~ P")) == "~~P");
}

TEST_CASE("implication is right associative, /\\ binds tighter than \\/") {
  CHECK(equal(parse("P -> Q -> R"), imp(prop("P"), imp(prop("Q"), prop("R")))));
  CHECK(equal(parse("P \\/ Q /\\ R"), disj(prop("P"), conj(prop("Q"), prop("R")))));
  CHECK(equal(parse("P /\\ Q \\/ R"), disj(conj(prop("P"), prop("Q")), prop("R"))));
}

TEST_CASE("binder scope extends maximally right") {
  const FormulaPtr f = parse("mu X. P \\/ <> X");
  REQUIRE(f->kind() == Kind::Mu);
  CHECK(equal(f->lhs(), disj(prop("P"), dia(var("X")))));
}

TEST_CASE("parse errors carry offsets") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("P /\\"), ParseError);
  CHECK_THROWS_AS(parse("(P"), ParseError);
  CHECK_THROWS_AS(parse("mu . P"), ParseError);
  CHECK_THROWS_AS(parse("mu top. P"), ParseError);
  try {
    parse("P \\/ )");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.offset == 5);
  }
}

TEST_CASE("binders require their variable positive") {
  CHECK_THROWS_AS(parse("mu X. ~X"), FormulaError);
  CHECK_THROWS_AS(parse("nu X. X -> P"), FormulaError);
  CHECK_NOTHROW(parse("mu X. (X -> P) -> P"));
  CHECK_NOTHROW(parse("nu X. P"));  // vacuous occurrence is fine
}

TEST_CASE("polarity of a variable") {
  CHECK(polarity(var("X"), "X") == Polarity::Positive);
  CHECK(polarity(neg(var("X")), "X") == Polarity::Negative);
  CHECK(polarity(imp(imp(var("X"), prop("P")), prop("P")), "X") ==
        Polarity::Positive);
  CHECK(polarity(prop("P"), "X") == Polarity::Both);
  CHECK(polarity(conj(var("X"), neg(var("X"))), "X") == Polarity::Neither);
  CHECK(polarity(box(dia(var("X"))), "X") == Polarity::Positive);
}

TEST_CASE("structural equality and hashing") {
  const FormulaPtr a = parse("mu X. P \\/ <> X");
  const FormulaPtr b = parse("mu X. P \\/ <> X");
  CHECK(equal(a, b));
  CHECK(a->hash() == b->hash());
  CHECK_FALSE(equal(a, parse("nu X. P \\/ <> X")));
}

TEST_CASE("substitution is capture avoiding") {
  // (nu Y. X /\ <> Y)[X := Y] would capture Y.
  const FormulaPtr f = nu("Y", conj(var("X"), dia(var("Y"))));
  CHECK_THROWS_AS(substitute(f, "X", var("Y")), FormulaError);
  const FormulaPtr g = substitute(f, "X", prop("Q"));
  CHECK(equal(g, nu("Y", conj(prop("Q"), dia(var("Y"))))));
  // No free occurrence: substitution is the identity.
  CHECK(equal(substitute(parse("nu X. [] X"), "X", prop("Q")), parse("nu X. [] X")));
}

TEST_CASE("guardedness and well-naming") {
  CHECK(is_guarded(parse("nu X. [] X")));
  CHECK_FALSE(is_guarded(parse("mu X. X")));
  CHECK_FALSE(is_guarded(parse("mu X. P \\/ X")));
  CHECK(is_guarded(parse("nu X. P")));  // vacuously

  CHECK(is_well_named(parse("nu X. mu Y. <> (X \\/ Y)")));
  CHECK_FALSE(is_well_named(parse("mu X. <> X \\/ <> X")));       // two occurrences
  CHECK_FALSE(is_well_named(parse("(nu X. [] X) /\\ (mu X. <> X)")));  // reused name
  CHECK_FALSE(is_well_named(parse("nu X. mu X. <> X")));          // shadowing

  CHECK_THROWS_AS(well_name(parse("mu X. X")), FormulaError);  // unguarded
}

TEST_CASE("well_name splits duplicated occurrences into nested binders") {
  const FormulaPtr f = mu("X", conj(dia(var("X")), dia(var("X"))));
  const FormulaPtr w = well_name(f);
  CHECK(is_well_named(w));
  CHECK(equal(w, mu("X", mu("X_1", conj(dia(var("X")), dia(var("X_1")))))));
}

TEST_CASE("well_name renames reused binder names apart") {
  const FormulaPtr w = well_name(parse("(nu X. [] X) /\\ (mu X. <> X)"));
  CHECK(is_well_named(w));
  CHECK(print(w) == "(nu X. [] X) /\\ (mu X_1. <> X_1)");
}

TEST_CASE("fixed-point table is sorted outermost (largest) first") {
  const FormulaPtr f = parse("mu X. nu Y. [] X /\\ <> Y");
  const FixpointTable t = fixpoint_table(f);
  REQUIRE(t.size() == 2);
  CHECK(t[0].kind == Kind::Mu);
  CHECK(t[0].var == "X");
  CHECK(t[0].parity == 0);
  CHECK(t[1].kind == Kind::Nu);
  CHECK(t[1].var == "Y");
  CHECK(t[1].parity == 0);
  CHECK(t[0].size > t[1].size);

  const FixpointTable tn = fixpoint_table(parse("~ (nu X. [] (P /\\ X))"));
  REQUIRE(tn.size() == 1);
  CHECK(tn[0].parity == 1);
}

TEST_CASE("formula accessors") {
  const FormulaPtr f = parse("mu X. P \\/ <> X");
  CHECK(f->is_closed());
  CHECK(f->size() == 5);
  CHECK_FALSE(is_modal(f));
  CHECK(is_modal(parse("[] (P -> <> Q)")));
  CHECK(prop_names(parse("Q /\\ [] P")) == std::set<std::string>{"P", "Q"});
  CHECK_FALSE(parse("mu X. <> X")->lhs()->is_closed());
  CHECK(parse("[] <> P")->modal_binder_depth() == 2);
  CHECK(parse("nu X. [] (X /\\ P)")->modal_binder_depth() == 2);
}
