#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mci/common.hpp"
#include "mci/vertexset.hpp"

namespace mci {

// Acyclic directed mixed graph. A pair of vertices may be joined by a
// directed edge, a bidirected edge, or both at once.
struct Admg {
  std::vector<std::string> names;
  std::vector<VSet> pa_;   // pa_[v] = parents of v
  std::vector<VSet> ch_;   // ch_[v] = children of v
  std::vector<VSet> sib_;  // sib_[v] = bidirected neighbours of v
  std::vector<Vertex> declared_order;  // empty when the input gave none

  Admg() = default;

  explicit Admg(std::vector<std::string> vertex_names) : names(std::move(vertex_names)) {
    if (static_cast<int>(names.size()) > kMaxVertices)
      throw ValidationError("too many vertices (limit " + std::to_string(kMaxVertices) + ")");
    pa_.assign(names.size(), 0);
    ch_.assign(names.size(), 0);
    sib_.assign(names.size(), 0);
  }

  explicit Admg(int p) : Admg(default_names(p)) {}

  static std::vector<std::string> default_names(int p) {
    std::vector<std::string> n;
    n.reserve(p);
    for (int i = 0; i < p; ++i) n.push_back("v" + std::to_string(i));
    return n;
  }

  int p() const { return static_cast<int>(names.size()); }
  VSet all() const { return full_set(p()); }

  Vertex index_of(const std::string& name) const {
    for (int i = 0; i < p(); ++i)
      if (names[i] == name) return i;
    return -1;
  }

  void add_directed(Vertex a, Vertex b) {
    if (a == b) throw ValidationError("self loop at '" + names[a] + "'");
    pa_[b] |= bit(a);
    ch_[a] |= bit(b);
  }

  void add_bidirected(Vertex a, Vertex b) {
    if (a == b) throw ValidationError("self loop at '" + names[a] + "'");
    sib_[a] |= bit(b);
    sib_[b] |= bit(a);
  }

  bool has_directed(Vertex a, Vertex b) const { return contains(ch_[a], b); }
  bool has_bidirected(Vertex a, Vertex b) const { return contains(sib_[a], b); }

  int directed_edge_count() const {
    int n = 0;
    for (Vertex v = 0; v < p(); ++v) n += set_size(ch_[v]);
    return n;
  }

  int bidirected_edge_count() const {
    int n = 0;
    for (Vertex v = 0; v < p(); ++v) n += set_size(sib_[v]);
    return n / 2;
  }

  // Adjacency functions of a set, restricted to the induced subgraph on m.
  // Callers pass s as a subset of m.
  VSet pa(VSet s, VSet m) const {
    VSet r = 0;
    for (Vertex v : vertices(s & m)) r |= pa_[v];
    return r & m;
  }
  VSet ch(VSet s, VSet m) const {
    VSet r = 0;
    for (Vertex v : vertices(s & m)) r |= ch_[v];
    return r & m;
  }
  VSet sib(VSet s, VSet m) const {
    VSet r = 0;
    for (Vertex v : vertices(s & m)) r |= sib_[v];
    return r & m;
  }
  VSet pa(VSet s) const { return pa(s, all()); }
  VSet ch(VSet s) const { return ch(s, all()); }
  VSet sib(VSet s) const { return sib(s, all()); }

  // Ancestors, descendants and districts are reflexive.
  VSet an(VSet s, VSet m) const {
    VSet r = s & m;
    for (;;) {
      VSet nxt = r | pa(r, m);
      if (nxt == r) return r;
      r = nxt;
    }
  }
  VSet de(VSet s, VSet m) const {
    VSet r = s & m;
    for (;;) {
      VSet nxt = r | ch(r, m);
      if (nxt == r) return r;
      r = nxt;
    }
  }
  VSet dis(VSet s, VSet m) const {
    VSet r = s & m;
    for (;;) {
      VSet nxt = r | sib(r, m);
      if (nxt == r) return r;
      r = nxt;
    }
  }
  VSet an(VSet s) const { return an(s, all()); }
  VSet de(VSet s) const { return de(s, all()); }
  VSet dis(VSet s) const { return dis(s, all()); }

  // Collider connectivity: b is in co(a) when some path from a to b has
  // arrowheads at every interior vertex.
  VSet co_one(Vertex a, VSet m) const {
    VSet r = 0;
    for (Vertex d : vertices((bit(a) | ch(bit(a), m)) & m)) {
      VSet dd = dis(bit(d), m);
      r |= dd | pa(dd, m);
    }
    return r & m;
  }

  // co is conjunctive over sets; co(empty, m) is all of m.
  VSet co(VSet s, VSet m) const {
    VSet r = m;
    for (Vertex v : vertices(s & m)) r &= co_one(v, m);
    return r;
  }
  VSet co(VSet s) const { return co(s, all()); }

  VSet markov_closure(Vertex b, VSet m) const { return co_one(b, m); }
  VSet markov_blanket(Vertex b, VSet m) const { return co_one(b, m) & ~bit(b); }

  // Barren subset: members that are not strict ancestors of any member.
  VSet barren(VSet b, VSet m) const {
    VSet strict = 0;
    for (Vertex v : vertices(b & m)) strict |= an(bit(v), m) & ~bit(v);
    return (b & m) & ~strict;
  }
  VSet barren(VSet b) const { return barren(b, all()); }

  bool is_ancestral_set(VSet a, VSet m) const { return pa(a, m) == (pa(a, m) & a); }
  bool is_ancestral_set(VSet a) const { return is_subset(pa(a, all()), a); }

  // All ancestral subsets of m, in ascending numeric order.
  std::vector<VSet> ancestral_sets(VSet m) const {
    std::vector<VSet> out;
    for (VSet a = 0;; a = (a - m) & m) {
      bool ok = true;
      for (Vertex v : vertices(a))
        if ((pa_[v] & m & ~a) != 0) {
          ok = false;
          break;
        }
      if (ok) out.push_back(a);
      if (a == m) break;
    }
    return out;
  }
  std::vector<VSet> ancestral_sets() const { return ancestral_sets(all()); }

  bool directed_acyclic() const {
    VSet done = 0;
    for (;;) {
      VSet nxt = done;
      for (Vertex v = 0; v < p(); ++v)
        if (!contains(done, v) && is_subset(pa_[v], done)) nxt |= bit(v);
      if (nxt == done) break;
      done = nxt;
    }
    return done == all();
  }

  void validate() const {
    if (!directed_acyclic()) throw ValidationError("directed part has a cycle");
  }

  Admg induced_subgraph(VSet a) const {
    std::vector<std::string> nn;
    std::vector<Vertex> remap(p(), -1);
    for (Vertex v : vertices(a)) {
      remap[v] = static_cast<Vertex>(nn.size());
      nn.push_back(names[v]);
    }
    Admg h(std::move(nn));
    for (Vertex v : vertices(a)) {
      for (Vertex u : vertices(pa_[v] & a)) h.add_directed(remap[u], remap[v]);
      for (Vertex u : vertices(sib_[v] & a))
        if (u < v) h.add_bidirected(remap[u], remap[v]);
    }
    for (Vertex v : declared_order)
      if (contains(a, v)) h.declared_order.push_back(remap[v]);
    return h;
  }

  // Marginalizes the vertices in l out of the graph, preserving the
  // independence model over the rest.
  Admg latent_project(VSet l) const {
    Admg g = *this;
    for (Vertex v : vertices(l & all())) {
      for (Vertex c : vertices(g.ch_[v])) {
        for (Vertex a : vertices(g.pa_[v] & ~bit(c)))
          if (a != c && !g.has_directed(a, c)) g.add_directed(a, c);
        for (Vertex a : vertices(g.sib_[v]))
          if (a != c && !g.has_bidirected(a, c)) g.add_bidirected(a, c);
        for (Vertex a : vertices(g.ch_[v]))
          if (a < c && !g.has_bidirected(a, c)) g.add_bidirected(a, c);
      }
      for (Vertex u = 0; u < g.p(); ++u) {
        g.pa_[u] &= ~bit(v);
        g.ch_[u] &= ~bit(v);
        g.sib_[u] &= ~bit(v);
      }
      g.pa_[v] = g.ch_[v] = g.sib_[v] = 0;
    }
    return g.induced_subgraph(all() & ~l);
  }

  bool operator==(const Admg& o) const = default;
};

// Total order over all vertices of a graph; seq lists vertices from
// smallest to largest.
struct TotalOrder {
  std::vector<Vertex> seq;
  std::vector<int> pos;

  explicit TotalOrder(std::vector<Vertex> s) : seq(std::move(s)) {
    pos.assign(seq.size(), -1);
    for (int i = 0; i < static_cast<int>(seq.size()); ++i) pos[seq[i]] = i;
  }

  int p() const { return static_cast<int>(seq.size()); }

  // Predecessors of b, inclusive.
  VSet pre(Vertex b) const {
    VSet r = 0;
    for (int i = 0; i <= pos[b]; ++i) r |= bit(seq[i]);
    return r;
  }

  Vertex max_of(VSet s) const {
    Vertex best = -1;
    for (Vertex v : vertices(s))
      if (best < 0 || pos[v] > pos[best]) best = v;
    return best;
  }

  Vertex min_of(VSet s) const {
    Vertex best = -1;
    for (Vertex v : vertices(s))
      if (best < 0 || pos[v] < pos[best]) best = v;
    return best;
  }

  VSet pre_set(VSet a) const { return a == 0 ? 0 : pre(max_of(a)); }
};

// A total order is consistent when no vertex precedes one of its ancestors.
inline bool order_consistent(const Admg& g, const TotalOrder& ord) {
  if (ord.p() != g.p()) return false;
  VSet seen = 0;
  for (Vertex v : ord.seq) {
    if (!is_subset(g.pa(bit(v)) & ~bit(v), seen)) return false;
    seen |= bit(v);
  }
  // pa-closure step order suffices: ancestors are transitive over parents.
  return true;
}

// Canonical consistent order: the declared one when present, otherwise a
// topological order breaking ties toward the lowest vertex index.
inline TotalOrder consistent_order(const Admg& g) {
  if (!g.declared_order.empty()) {
    if (static_cast<int>(g.declared_order.size()) != g.p())
      throw ValidationError("declared order must list every vertex exactly once");
    TotalOrder ord(g.declared_order);
    for (Vertex v = 0; v < g.p(); ++v)
      if (ord.pos[v] < 0) throw ValidationError("declared order must list every vertex exactly once");
    if (!order_consistent(g, ord))
      throw ValidationError("declared order is not consistent with the directed edges");
    return ord;
  }
  std::vector<Vertex> seq;
  VSet done = 0;
  for (int step = 0; step < g.p(); ++step) {
    Vertex pick = -1;
    for (Vertex v = 0; v < g.p(); ++v)
      if (!contains(done, v) && is_subset(g.pa_[v], done)) {
        pick = v;
        break;
      }
    if (pick < 0) throw ValidationError("directed part has a cycle");
    seq.push_back(pick);
    done |= bit(pick);
  }
  return TotalOrder(std::move(seq));
}

// Every consistent total order, in lexicographic order of the sequences.
inline std::vector<TotalOrder> all_consistent_orders(const Admg& g) {
  std::vector<TotalOrder> out;
  std::vector<Vertex> seq;
  auto rec = [&](auto&& self, VSet done) -> void {
    if (static_cast<int>(seq.size()) == g.p()) {
      out.emplace_back(seq);
      return;
    }
    for (Vertex v = 0; v < g.p(); ++v)
      if (!contains(done, v) && is_subset(g.pa_[v], done)) {
        seq.push_back(v);
        self(self, done | bit(v));
        seq.pop_back();
      }
  };
  rec(rec, 0);
  return out;
}

// Explains why g fails to be a directed maximal ancestral graph; empty
// string when it is one.
inline std::string directed_mag_violation(const Admg& g) {
  if (!g.directed_acyclic()) return "directed part has a cycle";
  for (Vertex v = 0; v < g.p(); ++v) {
    for (Vertex u : vertices(g.sib_[v] & (g.ch_[v] | g.pa_[v])))
      return "pair '" + g.names[u] + "','" + g.names[v] + "' joined by two edges";
    for (Vertex u : vertices(g.ch_[v] & g.pa_[v]))
      return "pair '" + g.names[u] + "','" + g.names[v] + "' joined by two edges";
  }
  for (Vertex v = 0; v < g.p(); ++v) {
    VSet anc = g.an(bit(v)) & ~bit(v);
    if ((g.sib_[v] & anc) != 0) {
      Vertex u = min_vertex(g.sib_[v] & anc);
      return "not ancestral: '" + g.names[u] + "' <-> '" + g.names[v] +
             "' with '" + g.names[u] + "' an ancestor of '" + g.names[v] + "'";
    }
  }
  // Maximality: no inducing path may join a non-adjacent pair. Interior
  // vertices of an inducing path are colliders lying in an({a,b}).
  for (Vertex a = 0; a < g.p(); ++a)
    for (Vertex b = a + 1; b < g.p(); ++b) {
      VSet adj = g.pa_[b] | g.ch_[b] | g.sib_[b];
      if (contains(adj, a)) continue;
      VSet anc = g.an(bit(a) | bit(b));
      // Walk states: vertices reached with an arrowhead at them. An interior
      // vertex needs arrowheads on both sides, so only bidirected edges
      // extend the walk; a directed edge u -> v reaches u at a tail, which
      // is only acceptable when u is the far endpoint.
      VSet frontier = (g.ch_[a] | g.sib_[a]) & ~bit(a);
      VSet seen = frontier;
      bool found = contains(frontier, b);
      while (!found && frontier != 0) {
        VSet nxt = 0;
        for (Vertex v : vertices(frontier))
          if (contains(anc, v)) {
            if (contains(g.pa_[v], b) || contains(g.sib_[v], b)) {
              found = true;
              break;
            }
            nxt |= g.sib_[v];
          }
        nxt &= ~seen & ~bit(a);
        seen |= nxt;
        frontier = nxt;
      }
      if (found)
        return "not maximal: inducing path joins non-adjacent pair '" +
               g.names[a] + "','" + g.names[b] + "'";
    }
  return "";
}

inline bool is_directed_mag(const Admg& g) { return directed_mag_violation(g).empty(); }

}  // namespace mci
