#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "mci/graph.hpp"

namespace mci::testing {

// Four vertices; a -> b -> c -> d with b <-> d.
inline Admg make_g1() {
  Admg g(std::vector<std::string>{"a", "b", "c", "d"});
  g.add_directed(0, 1);
  g.add_directed(1, 2);
  g.add_directed(2, 3);
  g.add_bidirected(1, 3);
  return g;
}

// Four vertices; a -> c, b -> d, a <-> d, b <-> c.
inline Admg make_g2() {
  Admg g(std::vector<std::string>{"a", "b", "c", "d"});
  g.add_directed(0, 2);
  g.add_directed(1, 3);
  g.add_bidirected(0, 3);
  g.add_bidirected(1, 2);
  return g;
}

// Five vertices; a -> b, e -> d, b <-> c, c <-> d, ordered e,a,d,b,c.
inline Admg make_g3() {
  Admg g(std::vector<std::string>{"a", "b", "c", "d", "e"});
  g.add_directed(0, 1);
  g.add_directed(4, 3);
  g.add_bidirected(1, 2);
  g.add_bidirected(2, 3);
  g.declared_order = {4, 0, 3, 1, 2};
  return g;
}

// Bidirected six cycle a <-> b <-> c <-> d <-> e <-> f <-> a.
inline Admg make_cycle6() {
  Admg g(std::vector<std::string>{"a", "b", "c", "d", "e", "f"});
  for (int i = 0; i < 6; ++i) g.add_bidirected(i, (i + 1) % 6);
  return g;
}

// Bidirected chain a <-> b <-> c <-> d <-> e.
inline Admg make_chain5() {
  Admg g(std::vector<std::string>{"a", "b", "c", "d", "e"});
  for (int i = 0; i < 4; ++i) g.add_bidirected(i, i + 1);
  return g;
}

// Random ADMG whose directed part follows a random vertex permutation, so
// it is acyclic by construction. Pairs may carry both edge kinds.
inline Admg random_admg(std::mt19937_64& rng, int p, double dir_prob, double bid_prob) {
  Admg g(p);
  std::vector<Vertex> perm(p);
  for (int i = 0; i < p; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      if (unif(rng) < dir_prob) g.add_directed(perm[i], perm[j]);
      if (unif(rng) < bid_prob) g.add_bidirected(perm[i], perm[j]);
    }
  return g;
}

// Slow reference for collider connectivity: breadth-first search over
// walks whose interior vertices all carry arrowheads on both sides.
inline VSet co_one_oracle(const Admg& g, Vertex a, VSet m) {
  VSet reached = bit(a);
  VSet frontier = 0;  // reached with an arrowhead, eligible as interior
  VSet first = (g.ch(bit(a), m) | g.sib(bit(a), m)) & m;
  reached |= first | (g.pa(bit(a), m) & m);
  frontier = first;
  VSet seen = first;
  while (frontier != 0) {
    VSet nxt = 0;
    for (Vertex v : vertices(frontier)) nxt |= (g.pa_[v] | g.sib_[v]) & m;
    reached |= nxt;
    VSet cont = 0;
    for (Vertex v : vertices(frontier)) cont |= g.sib_[v] & m;
    cont &= ~seen;
    seen |= cont;
    frontier = cont;
  }
  return reached & m;
}

// Exhaustive simple-path reference for m-connection. Tries every simple
// path from a to b and checks the collider conditions directly.
inline bool m_connecting_oracle(const Admg& g, Vertex a, Vertex b, VSet c, VSet m) {
  VSet anc = g.an(c, m);
  // kind: 0 = arrived by tail (edge points away from the new vertex),
  //       1 = arrived by arrowhead.
  auto rec = [&](auto&& self, Vertex v, int mark, VSet visited) -> bool {
    struct Step {
      Vertex y;
      int head_at_v;  // arrowhead at v on the outgoing edge
      int mark_at_y;
    };
    std::vector<Step> steps;
    for (Vertex y : vertices(g.ch(bit(v), m))) steps.push_back({y, 0, 1});
    for (Vertex y : vertices(g.pa(bit(v), m))) steps.push_back({y, 1, 0});
    for (Vertex y : vertices(g.sib(bit(v), m))) steps.push_back({y, 1, 1});
    for (const Step& s : steps) {
      if (contains(visited, s.y)) continue;
      bool collider = (mark == 1) && (s.head_at_v == 1);
      if (collider && !contains(anc, v)) continue;
      if (!collider && contains(c, v)) continue;
      if (s.y == b) return true;
      if (self(self, s.y, s.mark_at_y, visited | bit(s.y))) return true;
    }
    return false;
  };
  for (Vertex y : vertices(g.ch(bit(a), m) | g.sib(bit(a), m))) {
    if (y == b) return true;
    if (rec(rec, y, 1, bit(a) | bit(y))) return true;
  }
  for (Vertex y : vertices(g.pa(bit(a), m))) {
    if (y == b) return true;
    if (rec(rec, y, 0, bit(a) | bit(y))) return true;
  }
  return false;
}

}  // namespace mci::testing
