#pragma once

#include <string>
#include <vector>

#include "mci/common.hpp"
#include "mci/graph.hpp"
#include "mci/vertexset.hpp"

namespace mci {

// True when some path from a to b is m-connecting given c: non-colliders on
// the path avoid c and colliders are ancestors of c. Walk states are
// (vertex, arrived-with-arrowhead); restricted to the induced subgraph on m.
inline bool m_connecting_exists(const Admg& g, Vertex a, Vertex b, VSet c, VSet m) {
  if (a == b) throw ValidationError("endpoints of an m-connection query must differ");
  if (contains(c, a) || contains(c, b))
    throw ValidationError("endpoints must lie outside the conditioning set");
  VSet anc = g.an(c, m);
  // head[v]: reached with an arrowhead at v; tail[v]: reached without.
  VSet head = (g.ch(bit(a), m) | g.sib(bit(a), m)) & ~bit(a);
  VSet tail = g.pa(bit(a), m) & ~bit(a);
  if (contains(head | tail, b)) return true;
  VSet head_seen = head, tail_seen = tail;
  while (head != 0 || tail != 0) {
    VSet nhead = 0, ntail = 0;
    for (Vertex v : vertices(tail))
      if (!contains(c, v)) {
        nhead |= g.ch(bit(v), m) | g.sib(bit(v), m);
        ntail |= g.pa(bit(v), m);
      }
    for (Vertex v : vertices(head)) {
      if (!contains(c, v)) nhead |= g.ch(bit(v), m);
      if (contains(anc, v)) {
        nhead |= g.sib(bit(v), m);
        ntail |= g.pa(bit(v), m);
      }
    }
    if (contains(nhead | ntail, b)) return true;
    nhead &= ~head_seen & ~bit(a);
    ntail &= ~tail_seen & ~bit(a);
    head_seen |= nhead;
    tail_seen |= ntail;
    head = nhead;
    tail = ntail;
  }
  return false;
}

inline bool m_connecting_exists(const Admg& g, Vertex a, Vertex b, VSet c) {
  return m_connecting_exists(g, a, b, c, g.all());
}

// m-separation of sets: no pair is m-connected. Empty sides are separated.
inline bool m_separated(const Admg& g, VSet a, VSet b, VSet c, VSet m) {
  Triple{a, b, c}.check_disjoint();
  for (Vertex x : vertices(a))
    for (Vertex y : vertices(b))
      if (m_connecting_exists(g, x, y, c, m)) return false;
  return true;
}

inline bool m_separated(const Admg& g, VSet a, VSet b, VSet c) {
  return m_separated(g, a, b, c, g.all());
}

inline bool m_separated(const Admg& g, const Triple& t) {
  return m_separated(g, t.a, t.b, t.c, g.all());
}

// All m-separations with singleton sides; under composition these determine
// the full model.
struct IndependenceModel {
  std::vector<Triple> statements;

  bool contains_statement(const Triple& t) const {
    Triple ct = t.canonical();
    for (const Triple& s : statements)
      if (s == ct) return true;
    return false;
  }
};

inline IndependenceModel independence_model(const Admg& g) {
  if (g.p() > 8) throw ValidationError("independence model extraction limited to 8 vertices");
  IndependenceModel out;
  for (Vertex a = 0; a < g.p(); ++a)
    for (Vertex b = a + 1; b < g.p(); ++b) {
      VSet rest = g.all() & ~bit(a) & ~bit(b);
      for (VSet c : subsets_of(rest))
        if (!m_connecting_exists(g, a, b, c)) out.statements.push_back({bit(a), bit(b), c});
    }
  return out;
}

// General triples answered through composition over singleton statements.
inline bool model_holds(const IndependenceModel& model, const Triple& t) {
  t.check_disjoint();
  for (Vertex x : vertices(t.a))
    for (Vertex y : vertices(t.b))
      if (!model.contains_statement(Triple{bit(x), bit(y), t.c})) return false;
  return true;
}

// Smallest latent set whose removal from the prefix preserves the Markov
// boundary of max(a) within the ancestral set a.
inline VSet minimal_latent_set(const Admg& g, const TotalOrder& order, VSet a) {
  if (!g.is_ancestral_set(a)) throw ValidationError("minimal latent set requires an ancestral set");
  if (a == 0) return 0;
  Vertex b = order.max_of(a);
  VSet r = order.pre(b);
  VSet d = g.dis(bit(b), a);
  return g.sib(d, r) & ~d;
}

}  // namespace mci
