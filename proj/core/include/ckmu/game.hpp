// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT
//
// Evaluation-game arenas. A position pairs a world with a subformula and a
// record of which abstract role (Verifier / Refuter) player I currently
// plays; negations and implication antecedents swap the roles. Modalities
// unfold in two steps through auxiliary positions: the Refuter-role player
// first climbs the preorder, then the owner of the modality picks a modal
// successor. Binder and variable positions carry parity-game priorities
// derived from the fixed-point table; everything else has priority 0.

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ckmu/formula.hpp"
#include "ckmu/kripke.hpp"

namespace ckmu {

enum class Player : std::uint8_t { I, II };

inline Player opponent(Player p) { return p == Player::I ? Player::II : Player::I; }

/// Abstract game role: V tries to establish the formula, R to refute it.
enum class Role : std::uint8_t { V, R };

inline Role flip(Role q) { return q == Role::V ? Role::R : Role::V; }

/// Game position. `formula` indexes Arena::subf: the current subformula at a
/// Main position, the modal body at a Dia/Box auxiliary position, and the
/// implication itself at an Imp auxiliary position.
struct Position {
  enum class Aux : std::uint8_t { Main, Dia, Box, Imp };
  Aux aux = Aux::Main;
  int world = 0;
  int formula = 0;
  Role role_of_I = Role::V;
  bool operator==(const Position&) const = default;
};

/// Explicit game arena over one model, world, and closed well-named formula.
/// positions[0] is the initial position; moves are in the normative order
/// (ascending world, then subformula index), so rendering is reproducible.
struct Arena {
  const KripkeModel* model = nullptr;
  FormulaPtr root;
  std::vector<FormulaPtr> subf;        ///< distinct subformulas, pre-order
  std::vector<Position> positions;     ///< discovery (BFS) order
  std::vector<Player> owner;           ///< owner per position
  std::vector<int> priority;           ///< parity-game priority per position
  std::vector<std::vector<int>> moves; ///< successor position indices

  std::size_t size() const { return positions.size(); }

  /// Human-readable position: ⟨v, psi, Q⟩ at Main positions, ⟨⟨v⟩, psi, Q⟩ /
  /// ⟨[v], psi, Q⟩ after a Dia/Box preorder climb, ⟨v, psi ? theta, Q⟩ at an
  /// implication branch point. Q is the role player I holds.
  std::string render(int p) const;
};

/// Which player regenerates each binder: the player holding the Verifier
/// role at the binder wins by regenerating nu and loses by regenerating mu,
/// so ownership is I exactly when role-parity and binder kind agree.
std::vector<Player> fixpoint_owner(const FixpointTable& table);

/// Priorities for the table's binders: outermost first, bases 2n, 2n-2, ...;
/// an entry keeps its (even) base when owned by player I, and steps down to
/// base-1 when owned by player II. Injective, outer binders dominate, and
/// the parity of each priority matches its owner.
std::vector<int> assign_priorities(const FixpointTable& table,
                                   const std::vector<Player>& owners);

/// Reusable arena builder (scratch buffers persist across builds, which
/// matters when cross-checking millions of small arenas).
class ArenaBuilder {
 public:
  /// Build the arena for (m, world, f). f must be closed and well-named;
  /// world must be a valid index; propositions must have valuations.
  Arena build(const KripkeModel& m, int world, const FormulaPtr& f);

 private:
  std::vector<std::pair<std::uint32_t, int>> lookup_;  // epoch-stamped key -> index
  std::uint32_t epoch_ = 0;
};

/// One-shot convenience wrapper around ArenaBuilder.
Arena build_arena(const KripkeModel& m, int world, const FormulaPtr& f);

/// Graphviz rendering: owner I as box, owner II as diamond, priorities > 0
/// annotated in the label.
std::string arena_to_dot(const Arena& a);

}  // namespace ckmu
