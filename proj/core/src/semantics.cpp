// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT

#include "ckmu/semantics.hpp"

#include <random>

namespace ckmu {

std::size_t Evaluator::KeyHash::operator()(const Key& k) const {
  std::size_t h = std::hash<const void*>{}(k.node);
  for (std::uint64_t v : k.env)
    h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

WorldSet Evaluator::evaluate(const FormulaPtr& f, const VarAssignment& rho) {
  VarAssignment scratch = rho;
  return eval(f, scratch);
}

WorldSet Evaluator::fixpoint(const FormulaPtr& f, VarAssignment& rho) {
  const std::string& x = f->name();
  const std::size_t n = m_.size();

  WorldSet a = f->kind() == Kind::Mu ? WorldSet{} : m_.all();
  auto it = rho.find(x);
  const bool had = it != rho.end();
  const WorldSet old = had ? it->second : WorldSet{};

  // Positivity of x in the body makes the step monotone, so the chain from
  // bottom (mu) or top (nu) is monotone and stabilizes within |W| steps.
  for (std::size_t step = 0; step <= n + 1; ++step) {
    rho[x] = a;
    WorldSet b = eval(f->lhs(), rho);
    if (b == a) {
      if (had)
        rho[x] = old;
      else
        rho.erase(x);
      return a;
    }
    a = b;
  }
  throw ModelError("internal error: fixed-point iteration did not stabilize for " + print(f));
}

WorldSet Evaluator::eval(const FormulaPtr& f, VarAssignment& rho) {
  switch (f->kind()) {
    case Kind::Top:
      return m_.all();
    case Kind::Bot:
      return m_.fallible;
    case Kind::Prop: {
      auto it = m_.valuation.find(f->name());
      if (it == m_.valuation.end())
        throw ModelError("proposition '" + f->name() + "' has no valuation in this model");
      return it->second;
    }
    case Kind::Var: {
      auto it = rho.find(f->name());
      if (it == rho.end())
        throw ModelError("variable '" + f->name() + "' is not bound by the assignment");
      return it->second;
    }
    default:
      break;
  }

  // Composite node: consult the memo keyed by node identity plus the values
  // of its free variables.
  Key key{f.get(), {}};
  {
    const auto& fv = f->free_vars();
    key.env.reserve(fv.size());
    for (const auto& v : fv) {
      auto it = rho.find(v);
      if (it == rho.end())
        throw ModelError("variable '" + v + "' is not bound by the assignment");
      key.env.push_back(it->second.bits);
    }
  }
  if (auto hit = memo_.find(key); hit != memo_.end()) return hit->second;

  WorldSet out;
  const std::size_t n = m_.size();
  switch (f->kind()) {
    case Kind::Neg: {
      // w |= ~phi iff every preorder successor satisfying phi is fallible.
      const WorldSet s = eval(f->lhs(), rho);
      const WorldSet bad = s - m_.fallible;
      for (std::size_t w = 0; w < n; ++w)
        if (!m_.pre[w].intersects(bad)) out.insert(static_cast<int>(w));
      break;
    }
    case Kind::And:
      out = eval(f->lhs(), rho) & eval(f->rhs(), rho);
      break;
    case Kind::Or:
      out = eval(f->lhs(), rho) | eval(f->rhs(), rho);
      break;
    case Kind::Imp: {
      const WorldSet a = eval(f->lhs(), rho);
      const WorldSet b = eval(f->rhs(), rho);
      const WorldSet bad = a - b;
      for (std::size_t w = 0; w < n; ++w)
        if (!m_.pre[w].intersects(bad)) out.insert(static_cast<int>(w));
      break;
    }
    case Kind::Box: {
      // w |= []phi iff every v above w has all modal successors in phi.
      const WorldSet s = eval(f->lhs(), rho);
      WorldSet rows;  // worlds whose modal row lies inside s
      for (std::size_t v = 0; v < n; ++v)
        if (m_.modal[v].subset_of(s)) rows.insert(static_cast<int>(v));
      for (std::size_t w = 0; w < n; ++w)
        if (m_.pre[w].subset_of(rows)) out.insert(static_cast<int>(w));
      break;
    }
    case Kind::Dia: {
      // w |= <>phi iff every v above w has some modal successor in phi.
      const WorldSet s = eval(f->lhs(), rho);
      WorldSet rows;
      for (std::size_t v = 0; v < n; ++v)
        if (m_.modal[v].intersects(s)) rows.insert(static_cast<int>(v));
      for (std::size_t w = 0; w < n; ++w)
        if (m_.pre[w].subset_of(rows)) out.insert(static_cast<int>(w));
      break;
    }
    case Kind::Mu:
    case Kind::Nu:
      out = fixpoint(f, rho);
      break;
    default:
      throw ModelError("internal error: unhandled formula kind");
  }

  memo_.emplace(std::move(key), out);
  pinned_.push_back(f);
  return out;
}

WorldSet evaluate(const KripkeModel& m, const VarAssignment& rho, const FormulaPtr& f) {
  Evaluator ev(m);
  return ev.evaluate(f, rho);
}

std::vector<WorldSet> iterate_approximants(const KripkeModel& m, const VarAssignment& rho,
                                           Kind kind, const std::string& x,
                                           const FormulaPtr& body) {
  if (kind != Kind::Mu && kind != Kind::Nu)
    throw FormulaError("iterate_approximants requires Kind::Mu or Kind::Nu");
  Polarity p = polarity(body, x);
  if (p != Polarity::Positive && p != Polarity::Both)
    throw FormulaError("variable '" + x + "' is not positive in '" + print(body) + "'");

  Evaluator ev(m);
  std::vector<WorldSet> chain{kind == Kind::Mu ? WorldSet{} : m.all()};
  for (std::size_t step = 0; step <= m.size() + 1; ++step) {
    VarAssignment r = rho;
    r[x] = chain.back();
    WorldSet next = ev.evaluate(body, r);
    chain.push_back(next);
    if (next == chain[chain.size() - 2]) return chain;
  }
  throw ModelError("internal error: approximant chain did not stabilize");
}

MonotoneReport check_monotone(const KripkeModel& m, const VarAssignment& rho,
                              const std::string& x, const FormulaPtr& f, int trials) {
  MonotoneReport rep;
  Evaluator ev(m);
  auto value = [&](WorldSet a) {
    VarAssignment r = rho;
    r[x] = a;
    return ev.evaluate(f, r);
  };
  auto describe = [&](WorldSet a, WorldSet b, const char* what) {
    return std::string(what) + " violated at A=" + std::to_string(a.bits) +
           " B=" + std::to_string(b.bits);
  };
  auto probe = [&](WorldSet a, WorldSet b) {
    const WorldSet fa = value(a);
    const WorldSet fb = value(b);
    ++rep.pairs_checked;
    if (rep.monotone && !fa.subset_of(fb)) {
      rep.monotone = false;
      if (rep.witness.empty()) rep.witness = describe(a, b, "monotonicity");
    }
    if (rep.antitone && !fb.subset_of(fa)) {
      rep.antitone = false;
      if (rep.witness.empty()) rep.witness = describe(a, b, "antitonicity");
    }
  };

  const std::size_t n = m.size();
  if (n <= 8) {
    // All pairs A subset of B: enumerate B, then subsets of B.
    const std::uint64_t top = (1ULL << n) - 1;
    for (std::uint64_t b = 0; b <= top; ++b) {
      std::uint64_t a = b;
      while (true) {
        probe(WorldSet{a}, WorldSet{b});
        if (a == 0) break;
        a = (a - 1) & b;
      }
    }
  } else {
    std::mt19937_64 rng(0x5eedULL ^ (static_cast<std::uint64_t>(trials) << 8));
    for (int t = 0; t < trials; ++t) {
      const WorldSet u = m.all();
      WorldSet a{rng() & u.bits};
      WorldSet b{(a.bits | rng()) & u.bits};
      probe(a, b);
    }
  }
  return rep;
}

}  // namespace ckmu
