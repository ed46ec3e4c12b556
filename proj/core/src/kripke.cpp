// ckmu — constructive modal mu-calculus model checker
// SPDX-License-Identifier: MIT

#include "ckmu/kripke.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ckmu {

int KripkeModel::world_index(const std::string& name) const {
  for (std::size_t i = 0; i < worlds.size(); ++i)
    if (worlds[i] == name) return static_cast<int>(i);
  return -1;
}

// ---- validation ----------------------------------------------------------

namespace {

/// Structural sanity only (sizes, ranges, name uniqueness). Law checks make
/// no sense on a model whose rows are missing or out of range.
std::vector<std::string> shape_violations(const KripkeModel& m) {
  std::vector<std::string> out;
  const std::size_t n = m.size();
  if (n == 0) {
    out.push_back("model has no worlds");
    return out;
  }
  if (n > WorldSet::max_worlds) {
    out.push_back("model has more than 64 worlds");
    return out;
  }
  std::set<std::string> seen;
  for (const auto& w : m.worlds) {
    if (w.empty()) out.push_back("world names must be non-empty");
    if (!seen.insert(w).second) out.push_back("duplicate world name '" + w + "'");
  }
  if (m.pre.size() != n || m.modal.size() != n) {
    out.push_back("relation rows do not match the world count");
    return out;
  }
  const WorldSet u = m.all();
  if (!m.fallible.subset_of(u)) out.push_back("fallible set references unknown worlds");
  for (std::size_t w = 0; w < n; ++w)
    if (!m.pre[w].subset_of(u) || !m.modal[w].subset_of(u)) {
      out.push_back("relation rows reference unknown worlds");
      return out;
    }
  for (const auto& [p, s] : m.valuation)
    if (!s.subset_of(u))
      out.push_back("valuation of '" + p + "' references unknown worlds");
  return out;
}

}  // namespace

std::vector<std::string> validate_ck(const KripkeModel& m) {
  std::vector<std::string> out = shape_violations(m);
  if (!out.empty()) return out;
  const std::size_t n = m.size();
  auto name = [&](int w) { return m.worlds[static_cast<std::size_t>(w)]; };

  for (std::size_t w = 0; w < n; ++w)
    if (!m.pre[w].contains(static_cast<int>(w)))
      out.push_back("pre is not reflexive at '" + name(static_cast<int>(w)) + "'");

  for (std::size_t w = 0; w < n; ++w)
    for (int v : m.pre[w])
      if (!m.pre[v].subset_of(m.pre[w])) {
        int u = *(m.pre[v] - m.pre[w]).begin();
        out.push_back("pre is not transitive: '" + name(static_cast<int>(w)) +
                      "' pre '" + name(v) + "' pre '" + name(u) + "' but not '" +
                      name(static_cast<int>(w)) + "' pre '" + name(u) + "'");
      }

  for (const auto& [p, s] : m.valuation)
    for (int w : s)
      if (!m.pre[w].subset_of(s)) {
        int v = *(m.pre[w] - s).begin();
        out.push_back("valuation of '" + p + "' is not monotone: '" + name(w) +
                      "' pre '" + name(v) + "' but '" + name(v) + "' lacks '" + p + "'");
      }

  for (int w : m.fallible) {
    if (!m.pre[w].subset_of(m.fallible)) {
      int v = *(m.pre[w] - m.fallible).begin();
      out.push_back("fallible set is not upward closed: '" + name(w) + "' pre '" +
                    name(v) + "'");
    }
    if (!m.modal[w].subset_of(m.fallible)) {
      int v = *(m.modal[w] - m.fallible).begin();
      out.push_back("fallible set is not closed under modal successors: '" +
                    name(w) + "' modal '" + name(v) + "'");
    }
    if (m.modal[w].empty())
      out.push_back("fallible world '" + name(w) + "' has no modal successor");
  }

  for (const auto& [p, s] : m.valuation)
    if (!m.fallible.subset_of(s)) {
      int w = *(m.fallible - s).begin();
      out.push_back("fallible world '" + name(w) + "' is missing from the valuation of '" +
                    p + "'");
    }

  return out;
}

bool forward_confluent(const KripkeModel& m) {
  // w R v and w pre w2 demand some v2 with v pre v2 and w2 R v2.
  for (std::size_t w = 0; w < m.size(); ++w)
    for (int v : m.modal[w])
      for (int w2 : m.pre[w])
        if ((m.pre[v] & m.modal[w2]).empty()) return false;
  return true;
}

bool backward_confluent(const KripkeModel& m) {
  // w R v and v pre v2 demand some w2 with w pre w2 and w2 R v2.
  for (std::size_t w = 0; w < m.size(); ++w)
    for (int v : m.modal[w])
      for (int v2 : m.pre[v]) {
        bool found = false;
        for (int w2 : m.pre[w])
          if (m.modal[w2].contains(v2)) {
            found = true;
            break;
          }
        if (!found) return false;
      }
  return true;
}

std::vector<std::string> validate_is5(const KripkeModel& m) {
  std::vector<std::string> out = validate_ck(m);
  if (!shape_violations(m).empty()) return out;
  const std::size_t n = m.size();
  auto name = [&](int w) { return m.worlds[static_cast<std::size_t>(w)]; };

  if (!m.fallible.empty())
    out.push_back("IS5 models admit no fallible worlds");

  for (std::size_t w = 0; w < n; ++w)
    if (!m.modal[w].contains(static_cast<int>(w)))
      out.push_back("modal is not reflexive at '" + name(static_cast<int>(w)) + "'");
  for (std::size_t w = 0; w < n; ++w)
    for (int v : m.modal[w])
      if (!m.modal[v].contains(static_cast<int>(w)))
        out.push_back("modal is not symmetric: '" + name(static_cast<int>(w)) +
                      "' modal '" + name(v) + "' but not conversely");
  for (std::size_t w = 0; w < n; ++w)
    for (int v : m.modal[w])
      if (!m.modal[v].subset_of(m.modal[w])) {
        int u = *(m.modal[v] - m.modal[w]).begin();
        out.push_back("modal is not transitive: '" + name(static_cast<int>(w)) +
                      "' modal '" + name(v) + "' modal '" + name(u) + "'");
      }

  if (!forward_confluent(m))
    out.push_back("relations are not forward confluent");
  if (!backward_confluent(m))
    out.push_back("relations are not backward confluent");

  return out;
}

std::vector<WorldSet> compose_pre_modal(const KripkeModel& m) {
  std::vector<WorldSet> rel(m.size());
  for (std::size_t w = 0; w < m.size(); ++w)
    for (int v : m.pre[w]) rel[w] |= m.modal[v];
  return rel;
}

bool relation_transitive(const std::vector<WorldSet>& rel) {
  for (std::size_t w = 0; w < rel.size(); ++w)
    for (int v : rel[w])
      if (!rel[v].subset_of(rel[w])) return false;
  return true;
}

// ---- closure / repair ------------------------------------------------------

namespace {

void close_preorder(std::vector<WorldSet>& pre) {
  for (std::size_t w = 0; w < pre.size(); ++w) pre[w].insert(static_cast<int>(w));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t w = 0; w < pre.size(); ++w)
      for (int v : pre[w])
        if (!pre[v].subset_of(pre[w])) {
          pre[w] |= pre[v];
          changed = true;
        }
  }
}

void saturate_fallible(KripkeModel& m) {
  bool changed = true;
  while (changed) {
    WorldSet f = m.fallible;
    for (int w : m.fallible) f |= m.pre[w] | m.modal[w];
    changed = f != m.fallible;
    m.fallible = f;
  }
}

}  // namespace

KripkeModel close_repair(const KripkeModel& in) {
  {
    auto shape = shape_violations(in);
    if (!shape.empty())
      throw ModelError("cannot repair a malformed model: " + shape.front());
  }
  KripkeModel m = in;
  close_preorder(m.pre);
  saturate_fallible(m);

  for (int w : m.fallible)
    if (m.modal[w].empty())
      throw ModelError("cannot repair model: fallible world '" +
                       m.worlds[static_cast<std::size_t>(w)] +
                       "' has no modal successor");

  for (auto& [p, s] : m.valuation) {
    s |= m.fallible;
    WorldSet up;
    for (int w : s) up |= m.pre[w];
    s = up;  // pre is reflexive, so up contains s
  }

  auto v = validate_ck(m);
  if (!v.empty())
    throw ModelError("internal error: close_repair left a violation: " + v.front());
  return m;
}

// ---- generators --------------------------------------------------------------

namespace {

bool coin(std::mt19937_64& rng, double p) {
  return rng() < static_cast<std::uint64_t>(p * 18446744073709551615.0);
}

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::string prop_name(int i) {
  static const char* names[] = {"P", "Q", "R", "S"};
  if (i < 4) return names[i];
  return "P" + std::to_string(i);
}

std::vector<std::string> world_names(int n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

}  // namespace

KripkeModel gen_ck(std::uint64_t seed, const GenBounds& bounds) {
  std::mt19937_64 rng(seed);
  const int max_w = std::clamp(bounds.max_worlds, 1, 64);
  const int n = 1 + static_cast<int>(pick(rng, static_cast<std::uint64_t>(max_w)));

  KripkeModel m;
  m.worlds = world_names(n);
  m.pre.assign(static_cast<std::size_t>(n), {});
  m.modal.assign(static_cast<std::size_t>(n), {});

  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      if (v != w && coin(rng, 0.3)) m.pre[static_cast<std::size_t>(w)].insert(v);
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      if (coin(rng, 0.35)) m.modal[static_cast<std::size_t>(w)].insert(v);
  for (int w = 0; w < n; ++w)
    if (coin(rng, 0.15)) m.fallible.insert(w);
  for (int p = 0; p < bounds.props; ++p) {
    WorldSet s;
    for (int w = 0; w < n; ++w)
      if (coin(rng, 0.4)) s.insert(w);
    m.valuation[prop_name(p)] = s;
  }

  // Closure can only enlarge the fallible set, so close first, then grant
  // each fallible world a modal self-loop when seriality would otherwise be
  // unrepairable; the self-loop stays inside the fallible set.
  close_preorder(m.pre);
  saturate_fallible(m);
  for (int w : m.fallible)
    if (m.modal[w].empty()) m.modal[w].insert(w);

  return close_repair(m);
}

KripkeModel gen_is5(std::uint64_t seed, const GenBounds& bounds) {
  std::mt19937_64 rng(seed);
  const int max_w = std::clamp(bounds.max_worlds, 1, 64);
  const int target = 1 + static_cast<int>(pick(rng, static_cast<std::uint64_t>(max_w)));

  // Disjoint class-by-layer grids: within a component, modal classes are the
  // rows and pre is the product of a preorder on classes with a preorder on
  // layers — forward and backward confluent by construction.
  KripkeModel m;
  int remaining = target;
  while (remaining > 0) {
    const int k = 1 + static_cast<int>(pick(rng, static_cast<std::uint64_t>(std::min(3, remaining))));
    const int lmax = std::max(1, std::min(2, remaining / k));
    int l = 1 + static_cast<int>(pick(rng, static_cast<std::uint64_t>(lmax)));
    while (k * l > remaining) --l;
    if (l < 1) break;

    std::vector<WorldSet> classes(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (a != b && coin(rng, 0.4)) classes[static_cast<std::size_t>(a)].insert(b);
    close_preorder(classes);

    std::vector<WorldSet> layers(static_cast<std::size_t>(l));
    for (int a = 0; a < l; ++a)
      for (int b = 0; b < l; ++b)
        if (a != b && coin(rng, 0.4)) layers[static_cast<std::size_t>(a)].insert(b);
    close_preorder(layers);

    const int base = static_cast<int>(m.size());
    for (int c = 0; c < k; ++c)
      for (int j = 0; j < l; ++j) {
        m.worlds.push_back("w" + std::to_string(base + c * l + j));
        m.pre.push_back({});
        m.modal.push_back({});
      }
    auto idx = [&](int c, int j) { return base + c * l + j; };
    for (int c = 0; c < k; ++c)
      for (int j = 0; j < l; ++j) {
        auto& prow = m.pre[static_cast<std::size_t>(idx(c, j))];
        auto& mrow = m.modal[static_cast<std::size_t>(idx(c, j))];
        for (int c2 : classes[static_cast<std::size_t>(c)])
          for (int j2 : layers[static_cast<std::size_t>(j)]) prow.insert(idx(c2, j2));
        for (int j2 = 0; j2 < l; ++j2) mrow.insert(idx(c, j2));
      }
    remaining -= k * l;
  }

  // Random enrichment of pre, kept only when every IS5 law survives.
  const int n = static_cast<int>(m.size());
  for (int attempt = 0; attempt < 2 * n; ++attempt) {
    const int w = static_cast<int>(pick(rng, static_cast<std::uint64_t>(n)));
    const int v = static_cast<int>(pick(rng, static_cast<std::uint64_t>(n)));
    if (m.pre[static_cast<std::size_t>(w)].contains(v)) continue;
    KripkeModel trial = m;
    trial.pre[static_cast<std::size_t>(w)].insert(v);
    close_preorder(trial.pre);
    if (validate_is5(trial).empty()) m = std::move(trial);
  }

  for (int p = 0; p < bounds.props; ++p) {
    WorldSet up;
    for (int w = 0; w < n; ++w)
      if (coin(rng, 0.4)) up |= m.pre[static_cast<std::size_t>(w)];
    m.valuation[prop_name(p)] = up;
  }

  auto v = validate_is5(m);
  if (!v.empty())
    throw ModelError("internal error: gen_is5 produced a violation: " + v.front());
  return m;
}

// ---- exhaustive enumeration ---------------------------------------------------

std::uint64_t enumerate_models(const EnumBounds& bounds,
                               const std::function<bool(const KripkeModel&)>& fn) {
  if (bounds.max_worlds < 1 || bounds.max_worlds > 4)
    throw ModelError("enumeration supports between 1 and 4 worlds");
  if (bounds.props < 0 || bounds.props > 2)
    throw ModelError("enumeration supports at most 2 propositions");

  std::uint64_t count = 0;
  for (int n = 1; n <= bounds.max_worlds; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    std::vector<std::pair<int, int>> pairs;  // off-diagonal preorder edges
    for (int w = 0; w < n; ++w)
      for (int v = 0; v < n; ++v)
        if (v != w) pairs.emplace_back(w, v);

    KripkeModel m;
    m.worlds = world_names(n);

    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
      std::vector<WorldSet> pre(un);
      for (int w = 0; w < n; ++w) pre[static_cast<std::size_t>(w)].insert(w);
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if ((mask >> i) & 1) pre[static_cast<std::size_t>(pairs[i].first)].insert(pairs[i].second);

      bool transitive = true;
      for (std::size_t w = 0; w < un && transitive; ++w)
        for (int v : pre[w])
          if (!pre[v].subset_of(pre[w])) {
            transitive = false;
            break;
          }
      if (!transitive) continue;

      // Monotone world sets under this preorder, ascending by mask.
      std::vector<WorldSet> upsets;
      for (std::uint64_t s = 0; s < (1ULL << n); ++s) {
        WorldSet set{s};
        bool up = true;
        for (int w : set)
          if (!pre[static_cast<std::size_t>(w)].subset_of(set)) {
            up = false;
            break;
          }
        if (up) upsets.push_back(set);
      }

      m.pre = pre;
      const int nm = n * n;
      for (std::uint64_t mmask = 0; mmask < (1ULL << nm); ++mmask) {
        m.modal.assign(un, {});
        for (int w = 0; w < n; ++w)
          m.modal[static_cast<std::size_t>(w)] =
              WorldSet{(mmask >> (w * n)) & ((1ULL << n) - 1)};

        for (const WorldSet f : upsets) {
          if (!bounds.allow_fallible && !f.empty()) continue;
          if (bounds.is5_only && !f.empty()) continue;
          bool ok = true;
          for (int w : f) {
            if (!m.modal[static_cast<std::size_t>(w)].subset_of(f) ||
                m.modal[static_cast<std::size_t>(w)].empty()) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          m.fallible = f;

          // Valuation tuples over upsets containing the fallible set.
          std::vector<WorldSet> vals;
          for (WorldSet s : upsets)
            if (f.subset_of(s)) vals.push_back(s);

          const std::size_t reps = bounds.props == 0 ? 1
                                   : bounds.props == 1
                                       ? vals.size()
                                       : vals.size() * vals.size();
          for (std::size_t t = 0; t < reps; ++t) {
            m.valuation.clear();
            if (bounds.props >= 1) m.valuation["P"] = vals[t % vals.size()];
            if (bounds.props >= 2) m.valuation["Q"] = vals[t / vals.size()];

            if (bounds.is5_only && !validate_is5(m).empty()) continue;
            ++count;
            if (!fn(m)) return count;
          }
        }
      }
    }
  }
  return count;
}

// ---- serialization -------------------------------------------------------------

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

WorldSet names_to_set(const json& arr, const KripkeModel& m, const std::string& where) {
  if (!arr.is_array()) throw ModelError("'" + where + "' must be an array of world names");
  WorldSet out;
  for (const auto& el : arr) {
    if (!el.is_string())
      throw ModelError("'" + where + "' must contain world names (strings)");
    int w = m.world_index(el.get<std::string>());
    if (w < 0)
      throw ModelError("unknown world '" + el.get<std::string>() + "' in '" + where + "'");
    out.insert(w);
  }
  return out;
}

void edges_into_rows(const json& arr, KripkeModel& m, std::vector<WorldSet>& rows,
                     const std::string& where) {
  if (!arr.is_array()) throw ModelError("'" + where + "' must be an array of [from, to] pairs");
  for (const auto& el : arr) {
    if (!el.is_array() || el.size() != 2 || !el[0].is_string() || !el[1].is_string())
      throw ModelError("'" + where + "' entries must be [from, to] pairs of world names");
    int from = m.world_index(el[0].get<std::string>());
    int to = m.world_index(el[1].get<std::string>());
    if (from < 0) throw ModelError("unknown world '" + el[0].get<std::string>() + "' in '" + where + "'");
    if (to < 0) throw ModelError("unknown world '" + el[1].get<std::string>() + "' in '" + where + "'");
    rows[static_cast<std::size_t>(from)].insert(to);
  }
}

}  // namespace

KripkeModel model_from_json(const std::string& text, bool repair) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("invalid model JSON: ") + e.what());
  }
  if (!j.is_object()) throw ModelError("model must be a JSON object");

  static const char* required[] = {"worlds", "fallible", "pre", "modal", "valuation"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const char* r : required) known = known || key == r;
    if (!known) throw ModelError("unknown key '" + key + "' in model");
  }
  for (const char* r : required)
    if (!j.contains(r)) throw ModelError(std::string("missing key '") + r + "' in model");

  KripkeModel m;
  const json& jw = j.at("worlds");
  if (!jw.is_array() || jw.empty())
    throw ModelError("'worlds' must be a non-empty array of names");
  for (const auto& el : jw) {
    if (!el.is_string() || el.get<std::string>().empty())
      throw ModelError("'worlds' must contain non-empty names");
    m.worlds.push_back(el.get<std::string>());
  }
  if (m.size() > WorldSet::max_worlds) throw ModelError("model has more than 64 worlds");
  {
    std::set<std::string> seen(m.worlds.begin(), m.worlds.end());
    if (seen.size() != m.worlds.size()) throw ModelError("duplicate world names");
  }

  m.pre.assign(m.size(), {});
  m.modal.assign(m.size(), {});
  m.fallible = names_to_set(j.at("fallible"), m, "fallible");
  edges_into_rows(j.at("pre"), m, m.pre, "pre");
  edges_into_rows(j.at("modal"), m, m.modal, "modal");

  const json& jv = j.at("valuation");
  if (!jv.is_object()) throw ModelError("'valuation' must be an object");
  for (const auto& [p, arr] : jv.items()) {
    if (p.empty()) throw ModelError("valuation keys must be non-empty proposition names");
    m.valuation[p] = names_to_set(arr, m, "valuation of '" + p + "'");
  }

  return repair ? close_repair(m) : m;
}

std::string model_to_json(const KripkeModel& m) {
  ordered_json j;
  j["worlds"] = m.worlds;
  json fall = json::array();
  for (int w : m.fallible) fall.push_back(m.worlds[static_cast<std::size_t>(w)]);
  j["fallible"] = fall;
  json pre = json::array();
  for (std::size_t w = 0; w < m.size(); ++w)
    for (int v : m.pre[w])
      pre.push_back(json::array({m.worlds[w], m.worlds[static_cast<std::size_t>(v)]}));
  j["pre"] = pre;
  json modal = json::array();
  for (std::size_t w = 0; w < m.size(); ++w)
    for (int v : m.modal[w])
      modal.push_back(json::array({m.worlds[w], m.worlds[static_cast<std::size_t>(v)]}));
  j["modal"] = modal;
  ordered_json val = ordered_json::object();
  for (const auto& [p, s] : m.valuation) {
    json arr = json::array();
    for (int w : s) arr.push_back(m.worlds[static_cast<std::size_t>(w)]);
    val[p] = arr;
  }
  j["valuation"] = val;
  return j.dump(2);
}

std::string model_id(const KripkeModel& m) {
  const std::string s = model_to_json(m);
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ckmu
