// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT

#include "ckmu/solver.hpp"

#include <algorithm>
#include <array>
#include <deque>

#include "json.hpp"

namespace ckmu {

namespace {

int pidx(Player p) { return p == Player::I ? 0 : 1; }

/// Recursive attractor decomposition with explicit dead-end peeling and
/// positional strategy extraction. Winning sets are exchanged through the
/// member arrays win/strat; each position's final values are written by the
/// call that last (re)assigns it.
class Zielonka {
 public:
  explicit Zielonka(const Arena& a) : a_(a), n_(a.size()) {
    preds_.resize(n_);
    for (std::size_t p = 0; p < n_; ++p)
      for (int t : a_.moves[p]) preds_[static_cast<std::size_t>(t)].push_back(static_cast<int>(p));
    win.assign(n_, Player::I);
    strat[0].assign(n_, -1);
    strat[1].assign(n_, -1);
  }

  void run() {
    std::vector<char> all(n_, 1);
    solve_set(all);
  }

  std::vector<Player> win;
  std::array<std::vector<int>, 2> strat;

 private:
  const Arena& a_;
  std::size_t n_;
  std::vector<std::vector<int>> preds_;

  bool has_move_in(const std::vector<char>& s, std::size_t p) const {
    for (int t : a_.moves[p])
      if (s[static_cast<std::size_t>(t)]) return true;
    return false;
  }

  /// Attractor of `seeds` for player j within s. Fills rank with BFS layers
  /// (seeds at 0, -1 outside) and returns the members. Opponent positions
  /// enter when all their moves inside s lead in — vacuously for opponent
  /// dead ends.
  std::vector<int> attract(const std::vector<char>& s, Player j,
                           const std::vector<int>& seeds,
                           std::vector<int>& rank) const {
    rank.assign(n_, -1);
    std::vector<int> cnt(n_, 0);
    for (std::size_t p = 0; p < n_; ++p)
      if (s[p])
        for (int t : a_.moves[p])
          if (s[static_cast<std::size_t>(t)]) ++cnt[p];

    std::vector<int> out;
    std::deque<int> queue;
    auto add = [&](int p, int r) {
      rank[static_cast<std::size_t>(p)] = r;
      out.push_back(p);
      queue.push_back(p);
    };
    for (int sd : seeds) add(sd, 0);
    // Opponent dead ends are attracted outright (their owner is stuck).
    for (std::size_t p = 0; p < n_; ++p)
      if (s[p] && rank[p] < 0 && a_.owner[p] != j && cnt[p] == 0) add(static_cast<int>(p), 0);

    while (!queue.empty()) {
      const int q = queue.front();
      queue.pop_front();
      for (int p : preds_[static_cast<std::size_t>(q)]) {
        const auto up = static_cast<std::size_t>(p);
        if (!s[up] || rank[up] >= 0) continue;
        if (a_.owner[up] == j) {
          add(p, rank[static_cast<std::size_t>(q)] + 1);
        } else if (--cnt[up] == 0) {
          add(p, rank[static_cast<std::size_t>(q)] + 1);
        }
      }
    }
    return out;
  }

  /// Strategy for the attracting player on attractor members above rank 0:
  /// the first move (normative order) that descends strictly in rank.
  void attractor_strategy(Player j, const std::vector<int>& members,
                          const std::vector<int>& rank) {
    for (int p : members) {
      const auto up = static_cast<std::size_t>(p);
      if (a_.owner[up] != j || rank[up] == 0) continue;
      for (int t : a_.moves[up])
        if (rank[static_cast<std::size_t>(t)] >= 0 &&
            rank[static_cast<std::size_t>(t)] < rank[up]) {
          strat[static_cast<std::size_t>(pidx(j))][up] = t;
          break;
        }
    }
  }

  void solve_set(std::vector<char> s) {
    // Dead-end peeling: a stuck owner loses immediately; the opponent's
    // attractor to those positions is final. (Attractor removal cannot
    // create new dead ends, but hand-built arenas may start with several.)
    for (bool peeled = true; peeled;) {
      peeled = false;
      for (Player j : {Player::I, Player::II}) {
        std::vector<int> dead;
        for (std::size_t p = 0; p < n_; ++p)
          if (s[p] && a_.owner[p] == j && !has_move_in(s, p)) dead.push_back(static_cast<int>(p));
        if (dead.empty()) continue;
        const Player o = opponent(j);
        std::vector<int> rank;
        std::vector<int> members = attract(s, o, dead, rank);
        for (int p : members) {
          win[static_cast<std::size_t>(p)] = o;
          s[static_cast<std::size_t>(p)] = 0;
        }
        attractor_strategy(o, members, rank);
        peeled = true;
      }
    }

    int d = -1;
    for (std::size_t p = 0; p < n_; ++p)
      if (s[p]) d = std::max(d, a_.priority[p]);
    if (d < 0) return;  // empty subgame

    const Player i = (d % 2 == 0) ? Player::I : Player::II;
    const Player o = opponent(i);

    std::vector<int> z;
    for (std::size_t p = 0; p < n_; ++p)
      if (s[p] && a_.priority[p] == d) z.push_back(static_cast<int>(p));

    std::vector<int> rank_a;
    const std::vector<int> amembers = attract(s, i, z, rank_a);

    std::vector<char> rest = s;
    for (int p : amembers) rest[static_cast<std::size_t>(p)] = 0;
    solve_set(rest);

    std::vector<int> wopp;
    for (std::size_t p = 0; p < n_; ++p)
      if (rest[p] && win[p] == o) wopp.push_back(static_cast<int>(p));

    if (wopp.empty()) {
      // i wins everything here: the attractor pulls play back to the top
      // priority d (i's parity) or play stays in the recursively-won rest.
      for (int p : amembers) win[static_cast<std::size_t>(p)] = i;
      attractor_strategy(i, amembers, rank_a);
      for (int p : z) {
        const auto up = static_cast<std::size_t>(p);
        if (a_.owner[up] != i) continue;
        for (int t : a_.moves[up])
          if (s[static_cast<std::size_t>(t)]) {
            strat[static_cast<std::size_t>(pidx(i))][up] = t;
            break;
          }
      }
    } else {
      std::vector<int> rank_b;
      const std::vector<int> bmembers = attract(s, o, wopp, rank_b);
      for (int p : bmembers) win[static_cast<std::size_t>(p)] = o;
      attractor_strategy(o, bmembers, rank_b);  // seeds keep their recursive choices
      std::vector<char> rest2 = s;
      for (int p : bmembers) rest2[static_cast<std::size_t>(p)] = 0;
      solve_set(rest2);
    }
  }
};

}  // namespace

SolveResult solve(const Arena& a) {
  Zielonka z(a);
  z.run();

  SolveResult r;
  r.winner_of = std::move(z.win);
  r.strategy_I.player = Player::I;
  r.strategy_II.player = Player::II;
  for (std::size_t p = 0; p < a.size(); ++p) {
    const Player w = r.winner_of[p];
    Strategy& s = w == Player::I ? r.strategy_I : r.strategy_II;
    s.region.push_back(static_cast<int>(p));
    if (a.owner[p] == w && !a.moves[p].empty()) {
      const int choice = z.strat[static_cast<std::size_t>(pidx(w))][p];
      if (choice < 0)
        throw ModelError("internal error: winner has no strategy choice at " +
                         a.render(static_cast<int>(p)));
      s.choice[static_cast<int>(p)] = choice;
    }
  }
  return r;
}

// ---- strategy verification -----------------------------------------------------

namespace {

/// Iterative Tarjan SCC over the strategy-restricted subgraph induced by
/// `nodes` (with `edges(p)` enumerating that subgraph's successors).
/// Reports whether any SCC both contains a node satisfying `dominant` and
/// carries an internal edge (a genuine cycle).
class SccCycleProbe {
 public:
  template <class Edges, class Dominant>
  static bool has_bad_cycle(const std::vector<int>& nodes, std::size_t n,
                            Edges&& edges, Dominant&& dominant) {
    std::vector<int> low(n, 0), dfn(n, -1);
    std::vector<char> member(n, 0), on_stack(n, 0);
    for (int p : nodes) member[static_cast<std::size_t>(p)] = 1;
    std::vector<int> stack, comp_of_node(n, -1);
    int counter = 0, comps = 0;

    struct Frame {
      int node;
      std::size_t next_edge;
    };
    for (int root : nodes) {
      if (dfn[static_cast<std::size_t>(root)] >= 0) continue;
      std::vector<Frame> call{{root, 0}};
      dfn[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
      stack.push_back(root);
      on_stack[static_cast<std::size_t>(root)] = 1;
      while (!call.empty()) {
        Frame& fr = call.back();
        const auto u = static_cast<std::size_t>(fr.node);
        const auto& succ = edges(fr.node);
        if (fr.next_edge < succ.size()) {
          const int v = succ[fr.next_edge++];
          const auto uv = static_cast<std::size_t>(v);
          if (!member[uv]) continue;
          if (dfn[uv] < 0) {
            dfn[uv] = low[uv] = counter++;
            stack.push_back(v);
            on_stack[uv] = 1;
            call.push_back({v, 0});
          } else if (on_stack[uv]) {
            low[u] = std::min(low[u], dfn[uv]);
          }
          continue;
        }
        if (low[u] == dfn[u]) {
          while (true) {
            const int w = stack.back();
            stack.pop_back();
            on_stack[static_cast<std::size_t>(w)] = 0;
            comp_of_node[static_cast<std::size_t>(w)] = comps;
            if (w == fr.node) break;
          }
          ++comps;
        }
        call.pop_back();
        if (!call.empty()) {
          const auto pu = static_cast<std::size_t>(call.back().node);
          low[pu] = std::min(low[pu], low[u]);
        }
      }
    }

    // An SCC is cyclic iff it has an internal edge (self-loops included).
    std::vector<char> cyclic(static_cast<std::size_t>(comps), 0);
    std::vector<char> has_dominant(static_cast<std::size_t>(comps), 0);
    for (int p : nodes) {
      const int c = comp_of_node[static_cast<std::size_t>(p)];
      if (dominant(p)) has_dominant[static_cast<std::size_t>(c)] = 1;
      for (int t : edges(p)) {
        if (!member[static_cast<std::size_t>(t)]) continue;
        if (comp_of_node[static_cast<std::size_t>(t)] == c) cyclic[static_cast<std::size_t>(c)] = 1;
      }
    }
    for (int c = 0; c < comps; ++c)
      if (cyclic[static_cast<std::size_t>(c)] && has_dominant[static_cast<std::size_t>(c)])
        return true;
    return false;
  }
};

}  // namespace

StrategyCheck verify_strategy(const Arena& a, const Strategy& s) {
  const std::size_t n = a.size();
  std::vector<char> in_region(n, 0);
  for (int p : s.region) {
    if (p < 0 || static_cast<std::size_t>(p) >= n)
      return {false, "region references a position outside the arena"};
    in_region[static_cast<std::size_t>(p)] = 1;
  }

  // Edges of the strategy-restricted subgraph: the owner follows the choice,
  // the opponent may do anything.
  std::vector<std::vector<int>> edges(n);
  for (int p : s.region) {
    const auto up = static_cast<std::size_t>(p);
    if (a.owner[up] == s.player) {
      if (a.moves[up].empty())
        return {false, "dead end owned by the claimed winner at " + a.render(p)};
      auto it = s.choice.find(p);
      if (it == s.choice.end())
        return {false, "no strategy choice at owned position " + a.render(p)};
      const int t = it->second;
      if (std::find(a.moves[up].begin(), a.moves[up].end(), t) == a.moves[up].end())
        return {false, "illegal strategy move at " + a.render(p)};
      if (!in_region[static_cast<std::size_t>(t)])
        return {false, "strategy leaves the claimed region at " + a.render(p)};
      edges[up].push_back(t);
    } else {
      for (int t : a.moves[up]) {
        if (!in_region[static_cast<std::size_t>(t)])
          return {false, "opponent can leave the claimed region at " + a.render(p)};
        edges[up].push_back(t);
      }
      // An opponent dead end is a win for the claimed player: fine.
    }
  }

  // No cycle whose dominant priority has the opponent's parity: for each
  // wrongly-signed priority d, restrict to priorities <= d and look for a
  // cyclic SCC containing a d-node — such an SCC yields a play with
  // dominant priority exactly d.
  std::vector<int> prios;
  for (int p : s.region) prios.push_back(a.priority[static_cast<std::size_t>(p)]);
  std::sort(prios.begin(), prios.end());
  prios.erase(std::unique(prios.begin(), prios.end()), prios.end());
  const int good_parity = s.player == Player::I ? 0 : 1;
  for (int d : prios) {
    if (d % 2 == good_parity) continue;
    std::vector<int> nodes;
    for (int p : s.region)
      if (a.priority[static_cast<std::size_t>(p)] <= d) nodes.push_back(p);
    auto edge_fn = [&](int p) -> const std::vector<int>& {
      return edges[static_cast<std::size_t>(p)];
    };
    auto dom_fn = [&](int p) { return a.priority[static_cast<std::size_t>(p)] == d; };
    if (SccCycleProbe::has_bad_cycle(nodes, n, edge_fn, dom_fn))
      return {false,
              "a reachable cycle has dominant priority " + std::to_string(d) +
                  ", which favors the opponent"};
  }
  return {true, ""};
}

// ---- semantics/game cross-check ---------------------------------------------------

XCheckResult xcheck(const KripkeModel& m, const FormulaPtr& f,
                    const std::vector<int>& worlds) {
  Evaluator ev(m);
  const WorldSet truth = ev.evaluate(f);
  ArenaBuilder builder;
  XCheckResult out;
  for (int w : worlds) {
    Arena a = builder.build(m, w, f);
    SolveResult r = solve(a);
    XCheckEntry e;
    e.world = w;
    e.semantics = truth.contains(w);
    e.game = r.winner_of[0];
    e.agree = (e.game == Player::I) == e.semantics;
    out.all_agree = out.all_agree && e.agree;
    out.entries.push_back(e);
  }
  return out;
}

XCheckResult xcheck(const KripkeModel& m, const FormulaPtr& f) {
  std::vector<int> worlds;
  for (std::size_t w = 0; w < m.size(); ++w) worlds.push_back(static_cast<int>(w));
  return xcheck(m, f, worlds);
}

std::string strategy_to_json(const Arena& a, const SolveResult& r) {
  nlohmann::ordered_json j;
  const Player w = r.winner_of[0];
  j["winner"] = w == Player::I ? "I" : "II";
  nlohmann::ordered_json st = nlohmann::ordered_json::object();
  const Strategy& s = r.strategy(w);
  for (const auto& [p, t] : s.choice) st[a.render(p)] = a.render(t);
  j["strategy"] = st;
  return j.dump(2);
}

}  // namespace ckmu
