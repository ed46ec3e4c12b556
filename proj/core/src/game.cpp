// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT

#include "ckmu/game.hpp"

#include <algorithm>
#include <deque>

namespace ckmu {

// ---- fixed-point ownership and priorities ------------------------------------

std::vector<Player> fixpoint_owner(const FixpointTable& table) {
  std::vector<Player> out;
  out.reserve(table.size());
  for (const auto& e : table) {
    const Role at_binder = (e.parity % 2 == 0) ? Role::V : Role::R;
    const bool player_I = (at_binder == Role::V && e.kind == Kind::Nu) ||
                          (at_binder == Role::R && e.kind == Kind::Mu);
    out.push_back(player_I ? Player::I : Player::II);
  }
  return out;
}

std::vector<int> assign_priorities(const FixpointTable& table,
                                   const std::vector<Player>& owners) {
  if (table.size() != owners.size())
    throw FormulaError("assign_priorities: table and ownership sizes differ");
  const int n = static_cast<int>(table.size());
  std::vector<int> out;
  out.reserve(table.size());
  for (int i = 0; i < n; ++i) {
    const int base = 2 * (n - i);  // outermost entry gets the largest base
    out.push_back(owners[static_cast<std::size_t>(i)] == Player::I ? base : base - 1);
  }
  return out;
}

// ---- arena construction --------------------------------------------------------

namespace {

Player owner_of(Role row, Role role_of_I) {
  return row == role_of_I ? Player::I : Player::II;
}

}  // namespace

Arena ArenaBuilder::build(const KripkeModel& m, int world, const FormulaPtr& f) {
  if (!f->is_closed())
    throw FormulaError("game arenas require a closed formula: " + print(f));
  if (!is_well_named(f))
    throw FormulaError("game arenas require a well-named formula: " + print(f));
  if (world < 0 || static_cast<std::size_t>(world) >= m.size())
    throw ModelError("world index out of range");

  Arena a;
  a.model = &m;
  a.root = f;
  a.subf = subformulas(f);

  // Structural subformula index.
  std::unordered_map<const Formula*, int, StructHash, StructEq> index;
  index.reserve(a.subf.size() * 2);
  for (std::size_t i = 0; i < a.subf.size(); ++i)
    index.emplace(a.subf[i].get(), static_cast<int>(i));
  auto idx_of = [&](const FormulaPtr& g) { return index.find(g.get())->second; };

  // Binder bookkeeping: variable name -> (binder index, kind, priority).
  const FixpointTable table = fixpoint_table(f);
  const std::vector<Player> fp_owner = fixpoint_owner(table);
  const std::vector<int> fp_priority = assign_priorities(table, fp_owner);
  std::vector<int> priority_of_subf(a.subf.size(), 0);
  struct BinderInfo {
    int subf_index;
    Kind kind;
  };
  std::unordered_map<std::string, BinderInfo> binder_of_var;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const int bi = idx_of(table[i].binder);
    priority_of_subf[static_cast<std::size_t>(bi)] = fp_priority[i];
    binder_of_var[table[i].var] = {bi, table[i].kind};
  }

  // Epoch-stamped dense position lookup.
  const std::size_t n = m.size();
  const std::size_t slots = a.subf.size() * n * 4 * 2;
  if (lookup_.size() < slots) lookup_.resize(slots, {0, -1});
  ++epoch_;
  auto key_of = [&](const Position& p) {
    return ((static_cast<std::size_t>(p.formula) * n + static_cast<std::size_t>(p.world)) * 4 +
            static_cast<std::size_t>(p.aux)) * 2 +
           (p.role_of_I == Role::R ? 1 : 0);
  };
  auto get_or_create = [&](const Position& p) {
    auto& slot = lookup_[key_of(p)];
    if (slot.first != epoch_) {
      slot = {epoch_, static_cast<int>(a.positions.size())};
      a.positions.push_back(p);
      a.owner.push_back(Player::I);
      a.priority.push_back(0);
      a.moves.emplace_back();
    }
    return slot.second;
  };

  get_or_create(Position{Position::Aux::Main, world, idx_of(f), Role::V});

  // BFS over reachable positions; every dequeued position gets its owner,
  // priority, and normatively ordered move list.
  for (std::size_t qi = 0; qi < a.positions.size(); ++qi) {
    const Position p = a.positions[qi];  // copy: a.positions grows below
    const Role q = p.role_of_I;
    const FormulaPtr& g = a.subf[static_cast<std::size_t>(p.formula)];
    Role row = Role::V;
    std::vector<int> out;  // a.moves may reallocate while positions appear

    switch (p.aux) {
      case Position::Aux::Main:
        switch (g->kind()) {
          case Kind::Prop: {
            auto it = m.valuation.find(g->name());
            if (it == m.valuation.end())
              throw ModelError("proposition '" + g->name() +
                               "' has no valuation in this model");
            row = it->second.contains(p.world) ? Role::R : Role::V;
            break;  // terminal
          }
          case Kind::Top:
            row = Role::R;  // never refutable: the R-role player is stuck
            break;
          case Kind::Bot:
            // bot behaves as a proposition holding exactly at fallible worlds.
            row = m.fallible.contains(p.world) ? Role::R : Role::V;
            break;
          case Kind::Var: {
            const BinderInfo& b = binder_of_var.find(g->name())->second;
            row = b.kind == Kind::Mu ? Role::V : Role::R;
            out.push_back(get_or_create({Position::Aux::Main, p.world, b.subf_index, q}));
            break;
          }
          case Kind::Mu:
          case Kind::Nu:
            row = g->kind() == Kind::Mu ? Role::V : Role::R;
            out.push_back(get_or_create(
                {Position::Aux::Main, p.world, idx_of(g->lhs()), q}));
            break;
          case Kind::And:
          case Kind::Or:
            row = g->kind() == Kind::And ? Role::R : Role::V;
            out.push_back(get_or_create(
                {Position::Aux::Main, p.world, idx_of(g->lhs()), q}));
            out.push_back(get_or_create(
                {Position::Aux::Main, p.world, idx_of(g->rhs()), q}));
            break;
          case Kind::Neg:
            // The R-role player picks a non-fallible preorder successor and
            // the roles swap; at a fallible successor the subformula holds
            // harmlessly, so such challenges are not offered.
            row = Role::R;
            for (int u : m.pre[static_cast<std::size_t>(p.world)] - m.fallible)
              out.push_back(get_or_create(
                  {Position::Aux::Main, u, idx_of(g->lhs()), flip(q)}));
            break;
          case Kind::Imp:
            row = Role::R;
            for (int u : m.pre[static_cast<std::size_t>(p.world)])
              out.push_back(get_or_create({Position::Aux::Imp, u, p.formula, q}));
            break;
          case Kind::Box:
            row = Role::R;
            for (int u : m.pre[static_cast<std::size_t>(p.world)])
              out.push_back(get_or_create(
                  {Position::Aux::Box, u, idx_of(g->lhs()), q}));
            break;
          case Kind::Dia:
            row = Role::R;
            for (int u : m.pre[static_cast<std::size_t>(p.world)])
              out.push_back(get_or_create(
                  {Position::Aux::Dia, u, idx_of(g->lhs()), q}));
            break;
        }
        break;

      case Position::Aux::Dia:
        row = Role::V;  // the V-role player picks the modal successor
        for (int u : m.modal[static_cast<std::size_t>(p.world)])
          out.push_back(get_or_create({Position::Aux::Main, u, p.formula, q}));
        break;

      case Position::Aux::Box:
        row = Role::R;  // the R-role player picks the modal successor
        for (int u : m.modal[static_cast<std::size_t>(p.world)])
          out.push_back(get_or_create({Position::Aux::Main, u, p.formula, q}));
        break;

      case Position::Aux::Imp: {
        // The V-role player either challenges the antecedent (roles swap) or
        // defends the consequent here.
        row = Role::V;
        out.push_back(get_or_create(
            {Position::Aux::Main, p.world, idx_of(g->lhs()), flip(q)}));
        out.push_back(get_or_create(
            {Position::Aux::Main, p.world, idx_of(g->rhs()), q}));
        break;
      }
    }

    a.owner[qi] = owner_of(row, q);
    if (p.aux == Position::Aux::Main &&
        (g->kind() == Kind::Mu || g->kind() == Kind::Nu))
      a.priority[qi] = priority_of_subf[static_cast<std::size_t>(p.formula)];

    // Normative move order: ascending world, then subformula index.
    std::sort(out.begin(), out.end(), [&](int x, int y) {
      const Position& px = a.positions[static_cast<std::size_t>(x)];
      const Position& py = a.positions[static_cast<std::size_t>(y)];
      auto tup = [](const Position& pp) {
        return std::tuple(pp.world, pp.formula, static_cast<int>(pp.aux),
                          static_cast<int>(pp.role_of_I));
      };
      return tup(px) < tup(py);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    a.moves[qi] = std::move(out);
  }

  return a;
}

Arena build_arena(const KripkeModel& m, int world, const FormulaPtr& f) {
  ArenaBuilder b;
  return b.build(m, world, f);
}

// ---- rendering ------------------------------------------------------------------

std::string Arena::render(int p) const {
  const Position& pos = positions[static_cast<std::size_t>(p)];
  const std::string& w = model->worlds[static_cast<std::size_t>(pos.world)];
  const FormulaPtr& g = subf[static_cast<std::size_t>(pos.formula)];
  const char* q = pos.role_of_I == Role::V ? "V" : "R";
  switch (pos.aux) {
    case Position::Aux::Main:
      return "⟨" + w + ", " + print(g) + ", " + q + "⟩";
    case Position::Aux::Dia:
      return "⟨⟨" + w + "⟩, " + print(g) + ", " + q + "⟩";
    case Position::Aux::Box:
      return "⟨[" + w + "], " + print(g) + ", " + q + "⟩";
    case Position::Aux::Imp:
      return "⟨" + w + ", " + print(g->lhs()) + " ? " + print(g->rhs()) +
             ", " + q + "⟩";
  }
  return {};
}

std::string arena_to_dot(const Arena& a) {
  auto esc = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out;
  };
  std::string dot = "digraph arena {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::string label = a.render(static_cast<int>(i));
    if (a.priority[i] > 0) label += " p=" + std::to_string(a.priority[i]);
    dot += "  n" + std::to_string(i) + " [label=\"" + esc(label) + "\", shape=" +
           (a.owner[i] == Player::I ? "box" : "diamond") + "];\n";
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int t : a.moves[i])
      dot += "  n" + std::to_string(i) + " -> n" + std::to_string(t) + ";\n";
  dot += "}\n";
  return dot;
}

}  // namespace ckmu
