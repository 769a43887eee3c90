#pragma once

#include <algorithm>
#include <vector>

#include "mci/common.hpp"
#include "mci/graph.hpp"
#include "mci/imset.hpp"
#include "mci/vertexset.hpp"

namespace mci {

struct HeadTail {
  VSet head = 0;
  VSet tail = 0;
  bool operator==(const HeadTail&) const = default;
};

inline bool is_collider_connecting(const Admg& g, VSet c) {
  return c != 0 && g.co(c, c) == c;
}

// All connected vertex sets of the bidirected part, each enumerated once.
inline std::vector<VSet> connected_sib_sets(const Admg& g) {
  std::vector<VSet> out;
  auto rec = [&](auto&& self, VSet cur, VSet banned) -> void {
    out.push_back(cur);
    VSet frontier = g.sib(cur, g.all()) & ~cur & ~banned;
    VSet skip = 0;
    for (Vertex w : vertices(frontier)) {
      self(self, cur | bit(w), banned | skip);
      skip |= bit(w);
    }
  };
  for (Vertex v = 0; v < g.p(); ++v) rec(rec, bit(v), full_set(v));
  return out;
}

// Collider-connecting sets as a sibling-connected core together with any
// core parents that are neither in the core nor siblings of it. Each set
// has exactly one such decomposition, so no duplicates arise.
inline std::vector<VSet> collider_connecting_sets_by_core(const Admg& g) {
  std::vector<VSet> out;
  for (VSet k : connected_sib_sets(g)) {
    VSet eligible = g.pa(k, g.all()) & ~k & ~g.sib(k, g.all());
    for (VSet p : subsets_of(eligible)) out.push_back(k | p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<VSet> collider_connecting_sets(const Admg& g) {
  if (g.p() > 12) return collider_connecting_sets_by_core(g);
  std::vector<VSet> out;
  for (VSet c = 1; c != 0 && c <= g.all(); ++c)
    if (is_collider_connecting(g, c)) out.push_back(c);
  return out;
}

// Parameterizing-set family of a graph: heads with their tails and the
// bitmask membership table of the induced family.
struct ParamFamily {
  std::vector<HeadTail> headTails;  // ascending by head mask
  std::vector<VSet> sets;           // ascending
  std::vector<char> table;          // indicator over all subsets
  int maxSize = 0;

  bool is_param(VSet s) const { return table[s] != 0; }
};

inline std::vector<VSet> heads(const Admg& g) {
  std::vector<char> seen(std::size_t{1} << g.p(), 0);
  std::vector<VSet> out;
  for (VSet c : collider_connecting_sets(g)) {
    VSet h = g.barren(c);
    if (h != 0 && !seen[h]) {
      seen[h] = 1;
      out.push_back(h);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_head(const Admg& g, VSet h) {
  if (h == 0 || !is_subset(h, g.all())) return false;
  VSet a = g.an(h);
  VSet c = g.co(h, a);
  return is_collider_connecting(g, c) && g.barren(c) == h;
}

inline VSet tail(const Admg& g, VSet h) {
  if (!is_head(g, h)) throw ValidationError("set is not a head of the graph");
  VSet a = g.an(h);
  return g.co(h, a) & ~h;
}

inline ParamFamily parameterizing_sets(const Admg& g) {
  ParamFamily f;
  f.table.assign(std::size_t{1} << g.p(), 0);
  for (VSet h : heads(g)) {
    VSet t = g.co(h, g.an(h)) & ~h;
    f.headTails.push_back({h, t});
    for (VSet sub : subsets_of(t)) f.table[h | sub] = 1;
  }
  for (VSet s = 1; s != 0 && s <= g.all(); ++s)
    if (f.table[s]) {
      f.sets.push_back(s);
      f.maxSize = std::max(f.maxSize, set_size(s));
    }
  return f;
}

inline std::vector<VSet> constrained_sets(const Admg& g) {
  ParamFamily f = parameterizing_sets(g);
  std::vector<VSet> out;
  for (VSet s = 1; s != 0 && s <= g.all(); ++s)
    if (!f.is_param(s)) out.push_back(s);
  return out;
}

// m_g: indicator of parameterizing sets plus the empty set.
inline Imset m_imset(const Admg& g) {
  ParamFamily f = parameterizing_sets(g);
  Imset u(g.names);
  u[0] = 1;
  for (VSet s : f.sets) u[s] = 1;
  return u;
}

// n_g: indicator of constrained sets; m + n is the all-ones imset.
inline Imset n_imset(const Admg& g) {
  Imset u = m_imset(g);
  for (auto& x : u.v) x = 1 - x;
  return u;
}

// DAG characteristic imset; agrees with the m-connecting imset on DAGs.
// Sets of size below two are parameterizing by convention.
inline Imset characteristic_imset(const Admg& g) {
  for (Vertex v = 0; v < g.p(); ++v)
    if (g.sib_[v] != 0) throw ValidationError("characteristic imset requires a DAG");
  Imset u(g.names);
  for (VSet s = 0; s <= g.all(); ++s) {
    if (set_size(s) < 2) {
      u[s] = 1;
      continue;
    }
    for (Vertex a : vertices(s))
      if (is_subset(s & ~bit(a), g.pa_[a])) {
        u[s] = 1;
        break;
      }
  }
  return u;
}

// Head order: A <= B when A is contained in an(B). Returns the heads inside
// s that are maximal in this order, smallest-first lexicographically.
inline std::vector<VSet> maximal_heads_within(const Admg& g, const std::vector<VSet>& allHeads,
                                              VSet s) {
  std::vector<VSet> inside;
  for (VSet h : allHeads)
    if (is_subset(h, s)) inside.push_back(h);
  std::vector<VSet> out;
  for (VSet h : inside) {
    bool maximal = true;
    for (VSet h2 : inside)
      if (h2 != h && is_subset(h, g.an(h2)) && !is_subset(h2, g.an(h))) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(h);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

// Richardson partition of s into heads: maximal heads first, then the
// partition of what remains.
inline std::vector<VSet> richardson_partition(const Admg& g, VSet s) {
  std::vector<VSet> allHeads = heads(g);
  std::vector<VSet> out;
  VSet rest = s;
  while (rest != 0) {
    std::vector<VSet> phi = maximal_heads_within(g, allHeads, rest);
    if (phi.empty()) throw NumericalError("partition failed to progress");
    for (VSet h : phi) {
      out.push_back(h);
      rest &= ~h;
    }
  }
  return out;
}

// Factorization of the margin over an ancestral set into head-given-tail
// conditionals.
inline std::vector<HeadTail> head_factorization(const Admg& g, VSet a) {
  if (!g.is_ancestral_set(a)) throw ValidationError("factorization requires an ancestral set");
  std::vector<HeadTail> out;
  for (VSet h : richardson_partition(g, a)) out.push_back({h, tail(g, h)});
  return out;
}

}  // namespace mci
