// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT
//
// Parity-game solving for evaluation arenas: recursive attractor
// decomposition computing both winning regions with positional strategies,
// an independent strategy verifier, and the semantics/game cross-check.
// Convention: a stuck player loses; player I wins an infinite play iff the
// highest priority seen infinitely often is even.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "ckmu/game.hpp"
#include "ckmu/semantics.hpp"

namespace ckmu {

/// Positional strategy claim: `player` wins every position in `region`
/// (ascending indices) using `choice` on the positions they own.
struct Strategy {
  Player player = Player::I;
  std::vector<int> region;
  std::map<int, int> choice;
};

/// Complete solution of an arena: a winner per position and a verified-shape
/// strategy for each player on their region.
struct SolveResult {
  std::vector<Player> winner_of;
  Strategy strategy_I;
  Strategy strategy_II;

  Player winner_at(int pos) const { return winner_of[static_cast<std::size_t>(pos)]; }
  const Strategy& strategy(Player p) const {
    return p == Player::I ? strategy_I : strategy_II;
  }
};

/// Solve the arena (Zielonka-style recursion with attractor decomposition;
/// stuck positions lose for their owner). Deterministic: strategy choices
/// always take the first viable successor in the normative move order.
SolveResult solve(const Arena& a);

struct StrategyCheck {
  bool ok = true;
  std::string reason;  ///< first failure, human-readable
};

/// Verify a strategy claim on its region: the owner's choices are legal and
/// stay in the region, the opponent cannot leave the region, every dead end
/// is the opponent's, and no reachable cycle has its dominant priority
/// against the claimed player (checked per priority via SCC analysis of the
/// strategy-restricted subgraph).
StrategyCheck verify_strategy(const Arena& a, const Strategy& s);

/// Agreement between denotational truth and game winner at one world.
struct XCheckEntry {
  int world = 0;
  bool semantics = false;   ///< world is in the denotation
  Player game = Player::I;  ///< winner of the evaluation game
  bool agree = false;
};

struct XCheckResult {
  std::vector<XCheckEntry> entries;
  bool all_agree = true;
};

/// Cross-check the evaluator against the solved game at the given worlds
/// (default: every world). The model must be valid and f closed well-named.
XCheckResult xcheck(const KripkeModel& m, const FormulaPtr& f);
XCheckResult xcheck(const KripkeModel& m, const FormulaPtr& f,
                    const std::vector<int>& worlds);

/// Strategy file payload: the winner at the initial position plus that
/// player's choices on their region, rendered position to rendered position.
std::string strategy_to_json(const Arena& a, const SolveResult& r);

}  // namespace ckmu
