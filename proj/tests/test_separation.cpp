#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "mci/separation.hpp"

using namespace mci;
using namespace mci::testing;

TEST_CASE("m-connection basics") {
  Admg g1 = make_g1();
  Vertex a = 0, b = 1, c = 2, d = 3;
  CHECK(!m_connecting_exists(g1, a, c, bit(b)));
  CHECK(m_connecting_exists(g1, a, d, bit(b) | bit(c)));
  CHECK(m_connecting_exists(g1, a, c, 0));
  CHECK(m_connecting_exists(g1, a, b, 0));

  Admg iso(2);
  CHECK(!m_connecting_exists(iso, 0, 1, 0));

  CHECK_THROWS_AS(m_connecting_exists(g1, a, a, 0), ValidationError);
  CHECK_THROWS_AS(m_connecting_exists(g1, a, b, bit(a)), ValidationError);
}

TEST_CASE("m-separation of sets") {
  Admg g3 = make_g3();
  VSet va = bit(0), vb = bit(1), vd = bit(3), ve = bit(4);
  CHECK(m_separated(g3, vb, vd | ve, va));
  CHECK(m_separated(g3, va, ve, 0));
  CHECK(m_separated(g3, va | vb, 0, vd));
  CHECK(!m_separated(g3, vb, bit(2), 0));
  CHECK_THROWS_AS(m_separated(g3, va, va, 0), ValidationError);
  CHECK_THROWS_AS(m_separated(g3, va, vb, va), ValidationError);
}

TEST_CASE("reachability matches the path enumeration oracle") {
  std::vector<Admg> graphs = {make_g1(), make_g2(), make_g3(), make_cycle6(), make_chain5()};
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 120; ++rep) graphs.push_back(random_admg(rng, 4, 0.35, 0.35));
  for (const Admg& g : graphs) {
    for (Vertex a = 0; a < g.p(); ++a)
      for (Vertex b = 0; b < g.p(); ++b) {
        if (a == b) continue;
        VSet rest = g.all() & ~bit(a) & ~bit(b);
        for (VSet c : subsets_of(rest)) {
          bool fast = m_connecting_exists(g, a, b, c);
          bool slow = m_connecting_oracle(g, a, b, c, g.all());
          if (fast != slow) {
            CAPTURE(g.p(), a, b, c);
            REQUIRE(fast == slow);
          }
        }
      }
  }
}

TEST_CASE("markov blanket separates") {
  std::vector<Admg> graphs = {make_g1(), make_g2(), make_g3(), make_chain5()};
  std::mt19937_64 rng(577);
  for (int rep = 0; rep < 150; ++rep) graphs.push_back(random_admg(rng, 5, 0.3, 0.3));
  for (const Admg& g : graphs)
    for (Vertex b = 0; b < g.p(); ++b) {
      VSet cl = g.markov_closure(b, g.all());
      CHECK(m_separated(g, bit(b), g.all() & ~cl, cl & ~bit(b)));
    }
}

TEST_CASE("compositional graphoid spot checks") {
  std::mt19937_64 rng(919);
  for (int rep = 0; rep < 40; ++rep) {
    Admg g = random_admg(rng, 4, 0.3, 0.3);
    for (int trial = 0; trial < 60; ++trial) {
      VSet pool = g.all();
      VSet a = static_cast<VSet>(rng()) & pool;
      VSet b = static_cast<VSet>(rng()) & pool & ~a;
      VSet c = static_cast<VSet>(rng()) & pool & ~a & ~b;
      VSet d = pool & ~a & ~b & ~c;
      if (a == 0 || b == 0) continue;
      // symmetry
      CHECK(m_separated(g, a, b, c) == m_separated(g, b, a, c));
      // decomposition and weak union
      if (d != 0 && m_separated(g, a, b | d, c)) {
        CHECK(m_separated(g, a, b, c));
        CHECK(m_separated(g, a, b, c | d));
      }
      // contraction
      if (d != 0 && m_separated(g, a, b, c) && m_separated(g, a, d, b | c))
        CHECK(m_separated(g, a, b | d, c));
      // composition
      if (d != 0 && m_separated(g, a, b, c) && m_separated(g, a, d, c))
        CHECK(m_separated(g, a, b | d, c));
    }
  }
}

TEST_CASE("independence model extraction") {
  Admg empty2(std::vector<std::string>{"a", "b"});
  IndependenceModel m0 = independence_model(empty2);
  CHECK(m0.contains_statement({bit(0), bit(1), 0}));

  Admg g1 = make_g1();
  IndependenceModel m1 = independence_model(g1);
  CHECK(m1.contains_statement({bit(0), bit(2), bit(1)}));
  for (VSet c : subsets_of(bit(1) | bit(2)))
    CHECK(!m1.contains_statement({bit(0), bit(3), c}));

  Admg arrow(2), arc(2);
  arrow.add_directed(0, 1);
  arc.add_bidirected(0, 1);
  CHECK(independence_model(arrow).statements == independence_model(arc).statements);

  CHECK(model_holds(m1, {bit(0), bit(2), bit(1)}));
  CHECK(!model_holds(m1, {bit(0), bit(2) | bit(3), bit(1)}));

  Admg big(9);
  CHECK_THROWS_AS(independence_model(big), ValidationError);
}

TEST_CASE("minimal latent sets") {
  Admg g3 = make_g3();
  TotalOrder ord = consistent_order(g3);
  CHECK(minimal_latent_set(g3, ord, bit(0) | bit(1) | bit(3) | bit(4)) == 0);
  CHECK(minimal_latent_set(g3, ord, g3.all()) == 0);
  CHECK(minimal_latent_set(g3, ord, bit(0) | bit(4)) == 0);
  CHECK_THROWS_AS(minimal_latent_set(g3, ord, bit(1)), ValidationError);

  // x -> z with z <-> y: making y latent is required when looking at {x,z}.
  Admg g(std::vector<std::string>{"x", "y", "z"});
  g.add_directed(0, 2);
  g.add_bidirected(2, 1);
  TotalOrder o = consistent_order(g);
  CHECK(minimal_latent_set(g, o, bit(0) | bit(2)) == bit(1));
}

TEST_CASE("markov boundary does not change when enlarging past the minimal latent set") {
  std::mt19937_64 rng(23);
  std::vector<Admg> graphs = {make_g1(), make_g2(), make_g3(), make_cycle6(), make_chain5()};
  for (int rep = 0; rep < 120; ++rep) graphs.push_back(random_admg(rng, 5, 0.3, 0.3));
  for (const Admg& g : graphs) {
    TotalOrder ord = consistent_order(g);
    for (VSet a : g.ancestral_sets()) {
      if (a == 0) continue;
      Vertex b = ord.max_of(a);
      VSet ml = minimal_latent_set(g, ord, a);
      VSet extras = ord.pre(b) & ~(ml | a);
      for (Vertex l : vertices(extras))
        CHECK(g.markov_closure(b, a) == g.markov_closure(b, a | bit(l)));
    }
  }
}
