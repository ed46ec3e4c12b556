// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT
//
// Bi-relational Kripke models: an intuitionistic preorder (pre) and a modal
// accessibility relation (modal) over a finite set of worlds, a set of
// fallible worlds where falsum holds, and a monotone valuation. IS5 models
// are the infallible, modally-equivalent, confluent special case.

#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckmu {

/// Error raised for malformed, invalid, or unrepairable models.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Set of worlds as a 64-bit mask; world indices are 0..63.
struct WorldSet {
  std::uint64_t bits = 0;

  static constexpr std::size_t max_worlds = 64;

  static WorldSet universe(std::size_t n) {
    return {n >= 64 ? ~0ULL : ((1ULL << n) - 1)};
  }
  static WorldSet single(int w) { return {1ULL << w}; }

  bool contains(int w) const { return (bits >> w) & 1; }
  void insert(int w) { bits |= 1ULL << w; }
  void erase(int w) { bits &= ~(1ULL << w); }

  bool empty() const { return bits == 0; }
  int count() const { return std::popcount(bits); }

  bool subset_of(WorldSet o) const { return (bits & ~o.bits) == 0; }
  bool intersects(WorldSet o) const { return (bits & o.bits) != 0; }

  WorldSet operator|(WorldSet o) const { return {bits | o.bits}; }
  WorldSet operator&(WorldSet o) const { return {bits & o.bits}; }
  WorldSet operator-(WorldSet o) const { return {bits & ~o.bits}; }
  WorldSet& operator|=(WorldSet o) { bits |= o.bits; return *this; }
  WorldSet& operator&=(WorldSet o) { bits &= o.bits; return *this; }
  bool operator==(const WorldSet&) const = default;

  /// Complement within an n-world universe.
  WorldSet complement(std::size_t n) const { return universe(n) - *this; }

  /// Ascending iteration over member indices: for (int w : set) ...
  struct iterator {
    std::uint64_t rest;
    int operator*() const { return std::countr_zero(rest); }
    iterator& operator++() { rest &= rest - 1; return *this; }
    bool operator!=(const iterator& o) const { return rest != o.rest; }
  };
  iterator begin() const { return {bits}; }
  iterator end() const { return {0}; }
};

/// A bi-relational Kripke model. Relations are stored row-wise:
/// pre[w] is the set of preorder successors of w (w itself included once the
/// model is valid), modal[w] the set of modal successors.
struct KripkeModel {
  std::vector<std::string> worlds;            ///< names; index is the world id
  WorldSet fallible;                          ///< worlds where bot holds
  std::vector<WorldSet> pre;                  ///< intuitionistic preorder
  std::vector<WorldSet> modal;                ///< modal accessibility
  std::map<std::string, WorldSet> valuation;  ///< proposition -> worlds

  std::size_t size() const { return worlds.size(); }

  /// Index of a world name, or -1 if the name is unknown.
  int world_index(const std::string& name) const;

  WorldSet all() const { return WorldSet::universe(size()); }
};

// ---- validation --------------------------------------------------------------

/// Check the model laws: well-formed shape; pre reflexive and transitive;
/// valuation monotone along pre; fallible worlds upward closed, closed under
/// modal successors, contained in every valuation, and modally serial.
/// Returns human-readable violations with witnesses; empty means valid.
std::vector<std::string> validate_ck(const KripkeModel& m);

/// IS5 laws on top of the CK laws: no fallible worlds; modal an equivalence;
/// the two relations forward and backward confluent.
std::vector<std::string> validate_is5(const KripkeModel& m);

/// Forward confluence: w R v and w pre w' imply some v' with v pre v', w' R v'.
bool forward_confluent(const KripkeModel& m);

/// Backward confluence: w R v and v pre v' imply some w' with w pre w', w' R v'.
/// Implemented independently of forward_confluent (its own quantifier loops).
bool backward_confluent(const KripkeModel& m);

/// Row-wise composition pre;modal: result[w] = { u | exists v: w pre v R u }.
std::vector<WorldSet> compose_pre_modal(const KripkeModel& m);

/// Is a row-wise relation transitive?
bool relation_transitive(const std::vector<WorldSet>& rel);

// ---- closure / repair ---------------------------------------------------------

/// Repair a structurally well-formed model into a valid CK-model:
/// reflexive-transitive closure of pre, upward/modal saturation of the
/// fallible set, fallible worlds added to every valuation, valuations closed
/// upward. Idempotent. Throws ModelError if a fallible world ends up with no
/// modal successor (seriality cannot be repaired by closure) or the input
/// shape is broken.
KripkeModel close_repair(const KripkeModel& m);

// ---- generators ----------------------------------------------------------------

struct GenBounds {
  int max_worlds = 6;
  int props = 1;
};

/// Deterministic random CK-model: random relations and seeds, then closure;
/// fallible worlds are granted a modal self-loop when seriality demands it.
/// Always returns a model that passes validate_ck.
KripkeModel gen_ck(std::uint64_t seed, const GenBounds& bounds);

/// Deterministic random IS5-model built from disjoint unions of
/// class-by-layer grids (modal classes are rows, pre is the product
/// preorder), then a validated random enrichment of pre. Always returns a
/// model that passes validate_is5.
KripkeModel gen_is5(std::uint64_t seed, const GenBounds& bounds);

// ---- exhaustive enumeration -----------------------------------------------------

struct EnumBounds {
  int max_worlds = 3;      ///< enumerate 1..max_worlds worlds (supported to 4)
  int props = 1;           ///< exactly this many propositions (P, then Q)
  bool allow_fallible = true;
  bool is5_only = false;
};

/// Enumerate every valid model within the bounds, in a fixed deterministic
/// order, invoking fn on each; fn returns false to stop early. Returns the
/// number of models visited. Valuations range over all monotone assignments,
/// relations over all law-abiding combinations.
std::uint64_t enumerate_models(const EnumBounds& bounds,
                               const std::function<bool(const KripkeModel&)>& fn);

// ---- serialization -----------------------------------------------------------

/// Parse the JSON model format:
///   { "worlds": [names...], "fallible": [names...],
///     "pre": [[from,to]...], "modal": [[from,to]...],
///     "valuation": { prop: [names...] } }
/// All five keys are required, unknown keys are rejected, and every world
/// reference must name a declared world. With repair=true the result is
/// passed through close_repair. Model laws are otherwise not enforced here;
/// run validate_ck / validate_is5 on the result. Throws ModelError on
/// malformed input.
KripkeModel model_from_json(const std::string& text, bool repair = false);

/// Canonical JSON rendering (stable key and element order, 2-space indent).
std::string model_to_json(const KripkeModel& m);

/// Stable content fingerprint used to identify models in reports.
std::string model_id(const KripkeModel& m);

}  // namespace ckmu
