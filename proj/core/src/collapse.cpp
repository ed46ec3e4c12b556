// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT

#include "ckmu/collapse.hpp"

#include <algorithm>
#include <unordered_set>

namespace ckmu {

namespace {

bool contains_binder(const FormulaPtr& f) {
  if (!f) return false;
  if (f->kind() == Kind::Mu || f->kind() == Kind::Nu) return true;
  return contains_binder(f->lhs()) || contains_binder(f->rhs());
}

struct RewriteOut {
  FormulaPtr rewritten;
  FormulaPtr redex;
  FormulaPtr replacement;
  std::vector<FormulaPtr> enclosing;  ///< binders on the path, innermost first
};

/// Rewrite the leftmost innermost binder (pre-order first binder whose body
/// is fixed-point-free). Returns false when f is already modal.
bool rewrite_rec(const FormulaPtr& f, RewriteOut& out) {
  switch (f->kind()) {
    case Kind::Prop:
    case Kind::Var:
    case Kind::Bot:
    case Kind::Top:
      return false;
    case Kind::Neg:
      if (!rewrite_rec(f->lhs(), out)) return false;
      out.rewritten = neg(out.rewritten);
      return true;
    case Kind::Box:
      if (!rewrite_rec(f->lhs(), out)) return false;
      out.rewritten = box(out.rewritten);
      return true;
    case Kind::Dia:
      if (!rewrite_rec(f->lhs(), out)) return false;
      out.rewritten = dia(out.rewritten);
      return true;
    case Kind::And:
    case Kind::Or:
    case Kind::Imp: {
      FormulaPtr l = f->lhs(), r = f->rhs();
      bool in_left = rewrite_rec(l, out);
      if (in_left) {
        l = out.rewritten;
      } else {
        if (!rewrite_rec(r, out)) return false;
        r = out.rewritten;
      }
      out.rewritten = f->kind() == Kind::And  ? conj(l, r)
                      : f->kind() == Kind::Or ? disj(l, r)
                                              : imp(l, r);
      return true;
    }
    case Kind::Mu:
    case Kind::Nu: {
      const FormulaPtr& body = f->lhs();
      if (contains_binder(body)) {
        if (!rewrite_rec(body, out))
          throw FormulaError("internal error: binder body lost its fixed points");
        out.enclosing.push_back(f);
        out.rewritten = f->kind() == Kind::Mu ? mu(f->name(), out.rewritten)
                                              : nu(f->name(), out.rewritten);
        return true;
      }
      const FormulaPtr seed = f->kind() == Kind::Nu ? top() : bot();
      const FormulaPtr once = substitute(body, f->name(), seed);
      out.redex = f;
      out.replacement = substitute(body, f->name(), once);
      out.rewritten = out.replacement;
      return true;
    }
  }
  return false;  // unreachable
}

void require_collapse_input(const FormulaPtr& f) {
  if (!f) throw FormulaError("collapse: null formula");
  if (!f->is_closed()) throw FormulaError("collapse requires a closed formula");
  if (!is_well_named(f))
    throw FormulaError("collapse requires a well-named formula (apply well_name first)");
}

void check_size_guard(const FormulaPtr& f, std::size_t guard) {
  if (f->size() > guard)
    throw FormulaError("collapse exceeded the size guard (" + std::to_string(guard) +
                       " nodes)");
}

}  // namespace

CollapseTrace collapse(const FormulaPtr& f, std::size_t size_guard) {
  require_collapse_input(f);
  CollapseTrace t;
  t.input = f;
  FormulaPtr cur = f;
  while (true) {
    RewriteOut out;
    if (!rewrite_rec(cur, out)) break;
    check_size_guard(out.rewritten, size_guard);
    t.steps.push_back({cur, out.redex, out.replacement, out.rewritten});
    cur = out.rewritten;
  }
  t.result = cur;
  return t;
}

CollapseReport check_collapse_semantics(const KripkeModel& m, const FormulaPtr& f,
                                        std::size_t size_guard) {
  require_collapse_input(f);
  CollapseReport rep;
  Evaluator ev(m);
  FormulaPtr cur = f;
  while (true) {
    RewriteOut out;
    if (!rewrite_rec(cur, out)) break;
    check_size_guard(out.rewritten, size_guard);

    // Close the redex's enclosing binder variables: walking outermost-in,
    // each variable denotes its binder's fixed point under the bindings
    // accumulated so far.
    std::reverse(out.enclosing.begin(), out.enclosing.end());
    VarAssignment rho;
    for (const FormulaPtr& b : out.enclosing) rho[b->name()] = ev.evaluate(b, rho);

    const WorldSet left = ev.evaluate(out.redex, rho);
    const WorldSet right = ev.evaluate(out.replacement, rho);
    ++rep.steps_checked;
    if (!(left == right) && rep.ok) {
      rep.ok = false;
      rep.witness = "step " + std::to_string(rep.steps_checked) + ": ||" +
                    print(out.redex) + "|| != ||" + print(out.replacement) + "||";
    }
    cur = out.rewritten;
  }
  if (rep.ok && !(ev.evaluate(f) == ev.evaluate(cur))) {
    rep.ok = false;
    rep.witness = "||" + print(f) + "|| != ||" + print(cur) + "|| after collapse";
  }
  return rep;
}

bool two_step_stable(const KripkeModel& m, const FormulaPtr& binder) {
  if (!binder || (binder->kind() != Kind::Mu && binder->kind() != Kind::Nu))
    throw FormulaError("two_step_stable expects a mu or nu formula");
  if (!binder->is_closed())
    throw FormulaError("two_step_stable expects a closed binder");
  const FormulaPtr& body = binder->lhs();
  const std::string& x = binder->name();
  const FormulaPtr seed = binder->kind() == Kind::Nu ? top() : bot();
  const FormulaPtr once = substitute(body, x, seed);
  const FormulaPtr twice = substitute(body, x, once);
  const FormulaPtr thrice = substitute(body, x, twice);
  Evaluator ev(m);
  return ev.evaluate(twice) == ev.evaluate(thrice);
}

HeredityReport check_heredity(const KripkeModel& m, const FormulaPtr& f) {
  HeredityReport rep;
  Evaluator ev(m);
  const std::vector<WorldSet> comp = compose_pre_modal(m);
  const FormulaPtr modalized[2] = {box(f), dia(f)};
  for (const FormulaPtr& g : modalized) {
    const WorldSet s = ev.evaluate(g);
    for (int w : m.all()) {
      if (!s.contains(w)) continue;
      for (int v : comp[static_cast<std::size_t>(w)]) {
        ++rep.pairs_checked;
        if (!s.contains(v)) {
          rep.ok = false;
          if (rep.witness.empty())
            rep.witness = print(g) + " holds at '" + m.worlds[static_cast<std::size_t>(w)] +
                          "' but not at '" + m.worlds[static_cast<std::size_t>(v)] +
                          "' downstream";
        }
      }
    }
  }
  return rep;
}

// ---- axiom and rule soundness ------------------------------------------------------

namespace {

FormulaPtr b_kbox(const std::vector<FormulaPtr>& a) {
  return imp(box(imp(a[0], a[1])), imp(box(a[0]), box(a[1])));
}
FormulaPtr b_kdia(const std::vector<FormulaPtr>& a) {
  return imp(box(imp(a[0], a[1])), imp(dia(a[0]), dia(a[1])));
}
FormulaPtr b_fs(const std::vector<FormulaPtr>& a) {
  return imp(imp(dia(a[0]), box(a[1])), box(imp(a[0], a[1])));
}
FormulaPtr b_dp(const std::vector<FormulaPtr>& a) {
  return imp(dia(disj(a[0], a[1])), disj(dia(a[0]), dia(a[1])));
}
FormulaPtr b_n(const std::vector<FormulaPtr>&) { return neg(dia(bot())); }
FormulaPtr b_t(const std::vector<FormulaPtr>& a) {
  return conj(imp(box(a[0]), a[0]), imp(a[0], dia(a[0])));
}
FormulaPtr b_4(const std::vector<FormulaPtr>& a) {
  return conj(imp(box(a[0]), box(box(a[0]))), imp(dia(dia(a[0])), dia(a[0])));
}
FormulaPtr b_5(const std::vector<FormulaPtr>& a) {
  return conj(imp(dia(a[0]), box(dia(a[0]))), imp(dia(box(a[0])), box(a[0])));
}
FormulaPtr b_nufp(const std::vector<FormulaPtr>& a) {
  const FormulaPtr fix = nu("X", a[0]);
  return imp(fix, substitute(a[0], "X", fix));
}
FormulaPtr b_mufp(const std::vector<FormulaPtr>& a) {
  const FormulaPtr fix = mu("X", a[0]);
  return imp(substitute(a[0], "X", fix), fix);
}

RuleInstance r_nec(const std::vector<FormulaPtr>& a) { return {{a[0]}, box(a[0])}; }
RuleInstance r_mp(const std::vector<FormulaPtr>& a) {
  return {{a[0], imp(a[0], a[1])}, a[1]};
}
RuleInstance r_nuind(const std::vector<FormulaPtr>& a) {
  return {{imp(a[1], substitute(a[0], "X", a[1]))}, imp(a[1], nu("X", a[0]))};
}
RuleInstance r_muind(const std::vector<FormulaPtr>& a) {
  return {{imp(substitute(a[0], "X", a[1]), a[1])}, imp(mu("X", a[0]), a[1])};
}

std::vector<FormulaPtr> grow(std::vector<FormulaPtr> atoms, int depth) {
  if (depth < 0 || depth > 2)
    throw FormulaError("instantiation depth must be 0, 1, or 2");
  std::vector<FormulaPtr> out = std::move(atoms);
  std::unordered_set<std::string> seen;
  for (const FormulaPtr& f : out) seen.insert(print(f));
  for (int d = 0; d < depth; ++d) {
    const std::vector<FormulaPtr> base = out;
    auto add = [&](FormulaPtr f) {
      if (seen.insert(print(f)).second) out.push_back(std::move(f));
    };
    for (const FormulaPtr& a : base) {
      add(neg(a));
      add(box(a));
      add(dia(a));
    }
    for (const FormulaPtr& a : base)
      for (const FormulaPtr& b : base) {
        add(conj(a, b));
        add(disj(a, b));
        add(imp(a, b));
      }
  }
  return out;
}

template <class F>
void for_each_instance(const std::vector<SlotKind>& slots,
                       const std::vector<FormulaPtr>& plain,
                       const std::vector<FormulaPtr>& bodies, F&& fn) {
  auto source = [&](SlotKind k) -> const std::vector<FormulaPtr>& {
    return k == SlotKind::Plain ? plain : bodies;
  };
  std::vector<FormulaPtr> args;
  switch (slots.size()) {
    case 0:
      fn(args);
      return;
    case 1:
      args.resize(1);
      for (const FormulaPtr& a : source(slots[0])) {
        args[0] = a;
        fn(args);
      }
      return;
    case 2:
      args.resize(2);
      for (const FormulaPtr& a : source(slots[0]))
        for (const FormulaPtr& b : source(slots[1])) {
          args[0] = a;
          args[1] = b;
          fn(args);
        }
      return;
    default:
      throw FormulaError("schemas with more than two slots are not supported");
  }
}

}  // namespace

const AxiomCatalog& axiom_catalog() {
  static const AxiomCatalog cat = [] {
    AxiomCatalog c;
    c.axioms = {
        {"K[]", ModelClass::CK, {SlotKind::Plain, SlotKind::Plain}, &b_kbox},
        {"K<>", ModelClass::CK, {SlotKind::Plain, SlotKind::Plain}, &b_kdia},
        {"FS", ModelClass::IS5, {SlotKind::Plain, SlotKind::Plain}, &b_fs},
        {"DP", ModelClass::IS5, {SlotKind::Plain, SlotKind::Plain}, &b_dp},
        {"N", ModelClass::IS5, {}, &b_n},
        {"T", ModelClass::IS5, {SlotKind::Plain}, &b_t},
        {"4", ModelClass::IS5, {SlotKind::Plain}, &b_4},
        {"5", ModelClass::IS5, {SlotKind::Plain}, &b_5},
        {"nuFP", ModelClass::CK, {SlotKind::Body}, &b_nufp},
        {"muFP", ModelClass::CK, {SlotKind::Body}, &b_mufp},
    };
    c.rules = {
        {"Nec", {SlotKind::Plain}, &r_nec},
        {"MP", {SlotKind::Plain, SlotKind::Plain}, &r_mp},
        {"nuInd", {SlotKind::Body, SlotKind::Plain}, &r_nuind},
        {"muInd", {SlotKind::Body, SlotKind::Plain}, &r_muind},
    };
    return c;
  }();
  return cat;
}

std::vector<FormulaPtr> instantiation_slot(int depth) {
  return grow({prop("P"), prop("Q"), top(), bot()}, depth);
}

std::vector<FormulaPtr> instantiation_bodies(int depth) {
  std::vector<FormulaPtr> all = grow({var("X"), prop("P"), prop("Q"), top(), bot()}, depth);
  std::vector<FormulaPtr> out;
  for (FormulaPtr& f : all) {
    const Polarity p = polarity(f, "X");
    if (p == Polarity::Positive || p == Polarity::Both) out.push_back(std::move(f));
  }
  return out;
}

AxiomReport check_axioms(const KripkeModel& m, int depth,
                         const std::vector<std::string>& subset) {
  if (!m.valuation.count("P") || !m.valuation.count("Q"))
    throw ModelError("check_axioms requires propositions 'P' and 'Q' in the model");
  const bool is5 = validate_is5(m).empty();
  const std::vector<FormulaPtr> plain = instantiation_slot(depth);
  const std::vector<FormulaPtr> bodies = instantiation_bodies(depth);
  Evaluator ev(m);
  const WorldSet all = m.all();
  auto valid = [&](const FormulaPtr& f) { return ev.evaluate(f) == all; };
  auto wanted = [&](const std::string& name) {
    return subset.empty() ||
           std::find(subset.begin(), subset.end(), name) != subset.end();
  };

  AxiomReport rep;
  const AxiomCatalog& cat = axiom_catalog();
  for (const AxiomSchema& s : cat.axioms) {
    if (!wanted(s.name)) continue;
    AxiomReport::Entry e;
    e.schema = s.name;
    if (s.model_class == ModelClass::IS5 && !is5) {
      e.applicable = false;
      rep.entries.push_back(std::move(e));
      continue;
    }
    for_each_instance(s.slots, plain, bodies, [&](const std::vector<FormulaPtr>& args) {
      const FormulaPtr inst = s.build(args);
      ++e.instances;
      if (!valid(inst)) {
        ++e.failures;
        if (e.witness.empty()) e.witness = print(inst);
      }
    });
    if (e.failures > 0) rep.ok = false;
    rep.entries.push_back(std::move(e));
  }
  for (const RuleSchema& s : cat.rules) {
    if (!wanted(s.name)) continue;
    AxiomReport::Entry e;
    e.schema = s.name;
    e.is_rule = true;
    for_each_instance(s.slots, plain, bodies, [&](const std::vector<FormulaPtr>& args) {
      const RuleInstance inst = s.build(args);
      ++e.instances;
      for (const FormulaPtr& p : inst.premises)
        if (!valid(p)) return;  // rule not triggered on this model
      if (!valid(inst.conclusion)) {
        ++e.failures;
        if (e.witness.empty()) e.witness = print(inst.conclusion);
      }
    });
    if (e.failures > 0) rep.ok = false;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

CountermodelSearch find_axiom_countermodel(const std::string& schema, int depth,
                                           const EnumBounds& bounds) {
  const AxiomCatalog& cat = axiom_catalog();
  const AxiomSchema* found = nullptr;
  for (const AxiomSchema& s : cat.axioms)
    if (s.name == schema) found = &s;
  if (!found) throw FormulaError("unknown axiom schema: " + schema);

  // Instances must only mention propositions the enumerated models valuate.
  std::set<std::string> available;
  if (bounds.props >= 1) available.insert("P");
  if (bounds.props >= 2) available.insert("Q");
  std::vector<FormulaPtr> instances;
  for_each_instance(found->slots, instantiation_slot(depth), instantiation_bodies(depth),
                    [&](const std::vector<FormulaPtr>& args) {
                      FormulaPtr inst = found->build(args);
                      const std::set<std::string> used = prop_names(inst);
                      if (std::includes(available.begin(), available.end(), used.begin(),
                                        used.end()))
                        instances.push_back(std::move(inst));
                    });

  CountermodelSearch res;
  enumerate_models(bounds, [&](const KripkeModel& m) {
    Evaluator ev(m);
    for (const FormulaPtr& inst : instances) {
      const WorldSet v = ev.evaluate(inst);
      if (!(v == m.all())) {
        res.found = true;
        res.model = m;
        res.instance = inst;
        for (int w : m.all())
          if (!v.contains(w)) {
            res.world = w;
            break;
          }
        return false;
      }
    }
    return true;
  });
  return res;
}

}  // namespace ckmu
