#include <random>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "mci/graph.hpp"

using namespace mci;
using namespace mci::testing;

namespace {

VSet named(const Admg& g, const std::vector<const char*>& vs) {
  VSet s = 0;
  for (const char* v : vs) s |= bit(g.index_of(v));
  return s;
}

VSet named(const Admg& g, std::initializer_list<const char*> vs) {
  return named(g, std::vector<const char*>(vs));
}

}  // namespace

TEST_CASE("adjacency and reachability on the chain fixture") {
  Admg g1 = make_g1();
  CHECK(g1.pa(named(g1, {"c"})) == named(g1, {"b"}));
  CHECK(g1.ch(named(g1, {"b"})) == named(g1, {"c"}));
  CHECK(g1.sib(named(g1, {"b"})) == named(g1, {"d"}));
  CHECK(g1.an(named(g1, {"d"})) == named(g1, {"a", "b", "c", "d"}));
  CHECK(g1.de(named(g1, {"b"})) == named(g1, {"b", "c", "d"}));
  CHECK(g1.dis(named(g1, {"b"})) == named(g1, {"b", "d"}));
  CHECK(g1.an(named(g1, {"d"}), named(g1, {"a", "b", "d"})) == named(g1, {"d"}));
  CHECK(g1.an(named(g1, {"c"}), named(g1, {"a", "b", "c"})) == named(g1, {"a", "b", "c"}));
  CHECK(g1.markov_closure(g1.index_of("d"), g1.all()) == g1.all());
  CHECK(g1.markov_blanket(g1.index_of("d"), g1.all()) == named(g1, {"a", "b", "c"}));
}

TEST_CASE("ancestral, collider-connecting and barren columns") {
  Admg g2 = make_g2();
  struct Row {
    std::vector<const char*> s;
    bool ancestral;
    bool collider_connecting;
    std::vector<const char*> barren;
  };
  const std::vector<Row> rows = {
      {{"a", "b"}, true, false, {"a", "b"}},
      {{"a", "c"}, true, true, {"c"}},
      {{"a", "d"}, false, true, {"a", "d"}},
      {{"b", "c"}, false, true, {"b", "c"}},
      {{"b", "d"}, true, true, {"d"}},
      {{"c", "d"}, false, false, {"c", "d"}},
      {{"a", "b", "c"}, true, true, {"b", "c"}},
      {{"a", "b", "d"}, true, true, {"a", "d"}},
      {{"a", "c", "d"}, false, false, {"c", "d"}},
      {{"b", "c", "d"}, false, false, {"c", "d"}},
      {{"a", "b", "c", "d"}, true, false, {"c", "d"}},
  };
  for (const Row& r : rows) {
    VSet s = named(g2, r.s);
    INFO("subset mask " << s);
    CHECK(g2.is_ancestral_set(s) == r.ancestral);
    CHECK((g2.co(s, s) == s) == r.collider_connecting);
    CHECK(g2.barren(s) == named(g2, r.barren));
  }
}

TEST_CASE("collider connectivity matches the path oracle") {
  Admg g1 = make_g1();
  Admg g2 = make_g2();
  Admg g3 = make_g3();
  for (const Admg& g : {g1, g2, g3, make_cycle6(), make_chain5()}) {
    for (VSet m : subsets_of(g.all()))
      for (Vertex a : vertices(m)) CHECK(g.co_one(a, m) == co_one_oracle(g, a, m));
  }
  std::mt19937_64 rng(20240817);
  for (int rep = 0; rep < 200; ++rep) {
    Admg g = random_admg(rng, 6, 0.3, 0.3);
    for (VSet m : subsets_of(g.all()))
      for (Vertex a : vertices(m)) {
        if (g.co_one(a, m) != co_one_oracle(g, a, m)) {
          CAPTURE(rep, m, a);
          REQUIRE(g.co_one(a, m) == co_one_oracle(g, a, m));
        }
      }
  }
}

TEST_CASE("ancestor and descendant sets are dual") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    Admg g = random_admg(rng, 6, 0.35, 0.25);
    for (Vertex a = 0; a < g.p(); ++a)
      for (Vertex b = 0; b < g.p(); ++b)
        CHECK(contains(g.an(bit(a)), b) == contains(g.de(bit(b)), a));
  }
}

TEST_CASE("barren is idempotent and keeps maximal elements") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    Admg g = random_admg(rng, 6, 0.35, 0.25);
    for (int trial = 0; trial < 20; ++trial) {
      VSet b = static_cast<VSet>(rng()) & g.all();
      VSet ba = g.barren(b);
      CHECK(is_subset(ba, b));
      CHECK(g.barren(ba) == ba);
      if (b != 0) CHECK(ba != 0);
    }
  }
}

TEST_CASE("ancestral set enumeration") {
  Admg g2 = make_g2();
  std::vector<VSet> anc = g2.ancestral_sets();
  CHECK(anc.size() == 9);
  for (VSet a : anc) CHECK(g2.is_ancestral_set(a));
  for (VSet a : subsets_of(g2.all())) {
    bool listed = std::find(anc.begin(), anc.end(), a) != anc.end();
    CHECK(listed == g2.is_ancestral_set(a));
  }
}

TEST_CASE("induced subgraphs of ancestral sets equal latent projections") {
  std::mt19937_64 rng(13);
  std::vector<Admg> graphs = {make_g1(), make_g2(), make_g3(), make_cycle6(), make_chain5()};
  for (int rep = 0; rep < 60; ++rep) graphs.push_back(random_admg(rng, 5, 0.3, 0.3));
  for (const Admg& g : graphs)
    for (VSet a : g.ancestral_sets()) CHECK(g.induced_subgraph(a) == g.latent_project(g.all() & ~a));
}

TEST_CASE("latent projection merges paths through the removed vertex") {
  Admg g1 = make_g1();
  Admg h = g1.latent_project(named(g1, {"c"}));
  REQUIRE(h.p() == 3);
  Vertex a = h.index_of("a"), b = h.index_of("b"), d = h.index_of("d");
  CHECK(h.has_directed(a, b));
  CHECK(h.has_directed(b, d));
  CHECK(h.has_bidirected(b, d));
  CHECK(h.directed_edge_count() == 2);
  CHECK(h.bidirected_edge_count() == 1);

  Admg k = g1.latent_project(named(g1, {"b"}));
  Vertex ka = k.index_of("a"), kc = k.index_of("c"), kd = k.index_of("d");
  CHECK(k.has_directed(ka, kc));
  CHECK(k.has_directed(kc, kd));
  CHECK(k.has_bidirected(kc, kd));
  CHECK(k.directed_edge_count() == 2);
  CHECK(k.bidirected_edge_count() == 1);
}

TEST_CASE("directed maximal ancestral graph recognition") {
  CHECK(!is_directed_mag(make_g1()));
  CHECK(directed_mag_violation(make_g1()).find("ancestral") != std::string::npos);
  CHECK(is_directed_mag(make_g2()));
  CHECK(is_directed_mag(make_chain5()));
  CHECK(is_directed_mag(make_cycle6()));

  // Double edge.
  Admg d2(2);
  d2.add_directed(0, 1);
  d2.add_bidirected(0, 1);
  CHECK(!is_directed_mag(d2));

  // Non-maximal: y <-> u <-> v <-> z with u -> z and v -> y. The path
  // y <-> u <-> v <-> z has collider interiors that are ancestors of the
  // endpoints, so the non-adjacent pair y,z cannot be separated.
  Admg nm(std::vector<std::string>{"y", "u", "v", "z"});
  nm.add_bidirected(0, 1);
  nm.add_bidirected(1, 2);
  nm.add_bidirected(2, 3);
  nm.add_directed(1, 3);
  nm.add_directed(2, 0);
  CHECK(directed_mag_violation(nm).find("maximal") != std::string::npos);
}

TEST_CASE("orders") {
  Admg g1 = make_g1();
  TotalOrder t1 = consistent_order(g1);
  CHECK(t1.seq == std::vector<Vertex>{0, 1, 2, 3});
  CHECK(t1.pre(2) == 0b0111u);
  CHECK(t1.pre_set(0b0101u) == 0b0111u);
  CHECK(t1.max_of(0b0101u) == 2);
  CHECK(t1.min_of(0b0110u) == 1);

  Admg g3 = make_g3();
  TotalOrder t3 = consistent_order(g3);
  CHECK(t3.seq == std::vector<Vertex>{4, 0, 3, 1, 2});
  CHECK(t3.pre(3) == (bit(4) | bit(0) | bit(3)));
  CHECK(order_consistent(g3, t3));

  CHECK(!order_consistent(g1, TotalOrder({1, 0, 2, 3})));

  Admg g2 = make_g2();
  std::vector<TotalOrder> alls = all_consistent_orders(g2);
  CHECK(alls.size() == 6);
  for (const TotalOrder& t : alls) CHECK(order_consistent(g2, t));

  Admg bad = make_g1();
  bad.declared_order = {2, 0, 1, 3};
  CHECK_THROWS_AS(consistent_order(bad), ValidationError);
  bad.declared_order = {0, 0, 1, 3};
  CHECK_THROWS_AS(consistent_order(bad), ValidationError);
}

TEST_CASE("cycle detection") {
  Admg g(3);
  g.add_directed(0, 1);
  g.add_directed(1, 2);
  g.add_directed(2, 0);
  CHECK(!g.directed_acyclic());
  CHECK_THROWS_AS(g.validate(), ValidationError);
  CHECK_THROWS_AS(consistent_order(g), ValidationError);
}
