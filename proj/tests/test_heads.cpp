#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "mci/heads.hpp"
#include "mci/separation.hpp"

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

std::vector<VSet> maximal_elements(std::vector<VSet> family) {
  std::vector<VSet> out;
  for (VSet s : family) {
    bool maximal = true;
    for (VSet t : family)
      if (t != s && is_subset(s, t)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Definitional m-connecting imset membership: every statement with both of
// its singleton sides inside S and the rest of S conditioned on must be
// m-connected.
bool m_by_definition(const Admg& g, VSet s) {
  if (set_size(s) < 2) return true;
  for (Vertex a : vertices(s))
    for (Vertex b : vertices(s)) {
      if (b <= a) continue;
      VSet base = s & ~bit(a) & ~bit(b);
      VSet extra = g.all() & ~s;
      for (VSet add : subsets_of(extra))
        if (!m_connecting_exists(g, a, b, base | add)) return false;
    }
  return true;
}

void check_family_invariants(const Admg& g) {
  ParamFamily f = parameterizing_sets(g);
  Imset m = m_imset(g);
  Imset n = n_imset(g);
  REQUIRE(m[0] == 1);
  REQUIRE(n[0] == 0);
  for (VSet s = 0; s <= g.all(); ++s) {
    CHECK(m[s] + n[s] == 1);
    if (s != 0) CHECK((m[s] == 1) == f.is_param(s));
  }
  for (const HeadTail& ht : f.headTails) {
    CHECK((ht.head & ht.tail) == 0);
    CHECK(tail(g, ht.head) == ht.tail);
  }
}

}  // namespace

TEST_CASE("heads and tails of the chain fixture") {
  Admg g1 = make_g1();
  std::vector<VSet> hs = heads(g1);
  REQUIRE(hs == std::vector<VSet>{named(g1, {"a"}), named(g1, {"b"}), named(g1, {"c"}),
                                  named(g1, {"d"})});
  CHECK(tail(g1, named(g1, {"a"})) == 0);
  CHECK(tail(g1, named(g1, {"b"})) == named(g1, {"a"}));
  CHECK(tail(g1, named(g1, {"c"})) == named(g1, {"b"}));
  CHECK(tail(g1, named(g1, {"d"})) == named(g1, {"a", "b", "c"}));

  ParamFamily f = parameterizing_sets(g1);
  CHECK(f.sets.size() == 13);
  CHECK(!f.is_param(named(g1, {"a", "c"})));
  CHECK(f.is_param(named(g1, {"a", "d"})));
  CHECK_THROWS_AS(tail(g1, named(g1, {"a", "c"})), ValidationError);
  CHECK_THROWS_AS(tail(g1, 0), ValidationError);
}

TEST_CASE("heads and tails of the two-district fixture") {
  Admg g2 = make_g2();
  std::vector<VSet> hs = heads(g2);
  REQUIRE(hs == std::vector<VSet>{named(g2, {"a"}), named(g2, {"b"}), named(g2, {"c"}),
                                  named(g2, {"b", "c"}), named(g2, {"d"}),
                                  named(g2, {"a", "d"})});
  CHECK(tail(g2, named(g2, {"a"})) == 0);
  CHECK(tail(g2, named(g2, {"b"})) == 0);
  CHECK(tail(g2, named(g2, {"c"})) == named(g2, {"a"}));
  CHECK(tail(g2, named(g2, {"d"})) == named(g2, {"b"}));
  CHECK(tail(g2, named(g2, {"a", "d"})) == named(g2, {"b"}));
  CHECK(tail(g2, named(g2, {"b", "c"})) == named(g2, {"a"}));

  ParamFamily f = parameterizing_sets(g2);
  std::vector<VSet> expected = {
      named(g2, {"a"}),      named(g2, {"b"}),      named(g2, {"c"}),
      named(g2, {"a", "c"}), named(g2, {"d"}),      named(g2, {"b", "d"}),
      named(g2, {"a", "d"}), named(g2, {"a", "b", "d"}), named(g2, {"b", "c"}),
      named(g2, {"a", "b", "c"})};
  std::sort(expected.begin(), expected.end());
  CHECK(f.sets == expected);
  CHECK(n_imset(g2)[named(g2, {"c", "d"})] == 1);
}

TEST_CASE("five-vertex fixture family") {
  Admg g3 = make_g3();
  std::vector<std::pair<VSet, VSet>> expected = {
      {named(g3, {"a"}), 0},
      {named(g3, {"b"}), named(g3, {"a"})},
      {named(g3, {"c"}), 0},
      {named(g3, {"d"}), named(g3, {"e"})},
      {named(g3, {"e"}), 0},
      {named(g3, {"b", "c"}), named(g3, {"a"})},
      {named(g3, {"c", "d"}), named(g3, {"e"})},
      {named(g3, {"b", "c", "d"}), named(g3, {"a", "e"})}};
  std::sort(expected.begin(), expected.end());
  ParamFamily f = parameterizing_sets(g3);
  REQUIRE(f.headTails.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(f.headTails[i].head == expected[i].first);
    CHECK(f.headTails[i].tail == expected[i].second);
  }
  CHECK(f.sets.size() == 15);
  CHECK(f.maxSize == 5);

  std::vector<VSet> withC;
  for (VSet s : constrained_sets(g3))
    if (contains(s, g3.index_of("c"))) withC.push_back(s);
  CHECK(maximal_elements(withC) ==
        std::vector<VSet>{named(g3, {"a", "b", "c", "e"}), named(g3, {"a", "c", "d", "e"})});
}

TEST_CASE("six cycle constrained marginals") {
  Admg g = make_cycle6();
  Imset n = n_imset(g);
  std::vector<int> perSize(7, 0);
  for (VSet s = 0; s <= g.all(); ++s) perSize[set_size(s)] += static_cast<int>(n[s]);
  CHECK(perSize == std::vector<int>{0, 0, 9, 14, 9, 0, 0});
}

TEST_CASE("family trivials") {
  Admg single(std::vector<std::string>{"v"});
  CHECK(heads(single) == std::vector<VSet>{1});
  CHECK(tail(single, 1) == 0);

  Admg empty2(std::vector<std::string>{"a", "b"});
  CHECK(n_imset(empty2)[named(empty2, {"a", "b"})] == 1);

  Admg complete(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) complete.add_directed(i, j);
  CHECK(constrained_sets(complete).empty());
  CHECK(parameterizing_sets(complete).sets.size() == 15);
}

TEST_CASE("imset sums and head recognition") {
  std::mt19937_64 rng(4501);
  std::vector<Admg> gs = {make_g1(), make_g2(), make_g3(), make_cycle6(), make_chain5()};
  for (int rep = 0; rep < 40; ++rep) gs.push_back(random_admg(rng, 5, 0.3, 0.3));
  for (const Admg& g : gs) {
    check_family_invariants(g);
    std::vector<char> isHead(std::size_t{1} << g.p(), 0);
    for (VSet h : heads(g)) isHead[h] = 1;
    for (VSet s = 1; s <= g.all(); ++s) CHECK(is_head(g, s) == (isHead[s] != 0));
  }
}

TEST_CASE("m-connecting imset matches its separation definition") {
  std::mt19937_64 rng(4502);
  std::vector<Admg> gs = {make_g1(), make_g2(), make_cycle6()};
  for (int rep = 0; rep < 25; ++rep) gs.push_back(random_admg(rng, 4, 0.35, 0.35));
  for (const Admg& g : gs) {
    Imset m = m_imset(g);
    for (VSet s = 0; s <= g.all(); ++s) CHECK((m[s] == 1) == m_by_definition(g, s));
  }
}

TEST_CASE("membership via collider closure of the barren subset") {
  std::mt19937_64 rng(4503);
  std::vector<Admg> gs = {make_g1(), make_g2(), make_g3(), make_cycle6()};
  for (int rep = 0; rep < 40; ++rep) gs.push_back(random_admg(rng, 4, 0.35, 0.35));
  for (const Admg& g : gs) {
    Imset m = m_imset(g);
    for (VSet s = 0; s <= g.all(); ++s) {
      VSet closure = g.co(g.barren(s), g.an(s));
      CHECK((m[s] == 1) == is_subset(s, closure));
    }
  }
}

TEST_CASE("collider-connecting sets sit inside the family") {
  std::mt19937_64 rng(4504);
  std::vector<Admg> gs = {make_g1(), make_g2(), make_g3(), make_cycle6(), make_chain5()};
  for (int rep = 0; rep < 40; ++rep) gs.push_back(random_admg(rng, 5, 0.3, 0.3));
  for (const Admg& g : gs) {
    std::vector<VSet> cc = collider_connecting_sets(g);
    CHECK(cc == collider_connecting_sets_by_core(g));
    ParamFamily f = parameterizing_sets(g);
    for (VSet c : cc) CHECK(f.is_param(c));
    CHECK(maximal_elements(cc) == maximal_elements(f.sets));
  }
}

TEST_CASE("unique maximal parameterizing set per barren vertex") {
  std::mt19937_64 rng(4505);
  std::vector<Admg> gs = {make_g1(), make_g2(), make_g3(), make_cycle6(), make_chain5()};
  for (int rep = 0; rep < 60; ++rep) gs.push_back(random_admg(rng, 5, 0.3, 0.3));
  for (const Admg& g : gs) {
    ParamFamily f = parameterizing_sets(g);
    for (Vertex b : vertices(g.barren(g.all()))) {
      std::vector<VSet> holding;
      for (VSet s : f.sets)
        if (contains(s, b)) holding.push_back(s);
      CHECK(maximal_elements(holding).size() == 1);
    }
  }
}

TEST_CASE("family restriction to ancestral sets") {
  std::mt19937_64 rng(4506);
  std::vector<Admg> gs = {make_g1(), make_g2(), make_g3()};
  for (int rep = 0; rep < 40; ++rep) gs.push_back(random_admg(rng, 4, 0.35, 0.35));
  for (const Admg& g : gs) {
    ParamFamily f = parameterizing_sets(g);
    for (VSet a : g.ancestral_sets(g.all())) {
      Admg sub = g.induced_subgraph(a);
      std::vector<Vertex> back;
      for (Vertex v : vertices(a)) back.push_back(v);
      std::vector<VSet> viaSub;
      for (VSet s : parameterizing_sets(sub).sets) {
        VSet lifted = 0;
        for (Vertex v : vertices(s)) lifted |= bit(back[v]);
        viaSub.push_back(lifted);
      }
      std::sort(viaSub.begin(), viaSub.end());
      std::vector<VSet> viaRestriction;
      for (VSet s : f.sets)
        if (is_subset(s, a)) viaRestriction.push_back(s);
      CHECK(viaSub == viaRestriction);
    }
  }
}

TEST_CASE("characteristic imset of directed graphs") {
  Admg chain(std::vector<std::string>{"a", "b", "c"});
  chain.add_directed(0, 1);
  chain.add_directed(1, 2);
  Imset c = characteristic_imset(chain);
  CHECK(c[named(chain, {"a", "b"})] == 1);
  CHECK(c[named(chain, {"a", "c"})] == 0);
  CHECK(c[named(chain, {"a", "b", "c"})] == 0);

  Admg collider(std::vector<std::string>{"a", "b", "c"});
  collider.add_directed(0, 1);
  collider.add_directed(2, 1);
  CHECK(characteristic_imset(collider)[named(collider, {"a", "b", "c"})] == 1);

  Admg complete(3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) complete.add_directed(i, j);
  Imset cc = characteristic_imset(complete);
  for (VSet s = 0; s <= complete.all(); ++s) CHECK(cc[s] == 1);

  std::mt19937_64 rng(4507);
  for (int rep = 0; rep < 60; ++rep) {
    Admg dag = random_admg(rng, 4, 0.4, 0.0);
    CHECK(characteristic_imset(dag) == m_imset(dag));
  }
  CHECK_THROWS_AS(characteristic_imset(make_g1()), ValidationError);
}

TEST_CASE("partition of the chain fixture peels one head at a time") {
  Admg g1 = make_g1();
  CHECK(richardson_partition(g1, g1.all()) ==
        std::vector<VSet>{named(g1, {"d"}), named(g1, {"c"}), named(g1, {"b"}),
                          named(g1, {"a"})});
  CHECK(richardson_partition(g1, 0).empty());
}

TEST_CASE("partition of the two-district fixture") {
  Admg g2 = make_g2();
  CHECK(richardson_partition(g2, g2.all()) ==
        std::vector<VSet>{named(g2, {"a", "d"}), named(g2, {"b", "c"})});
  CHECK(richardson_partition(g2, named(g2, {"a", "b"})) ==
        std::vector<VSet>{named(g2, {"a"}), named(g2, {"b"})});
}

TEST_CASE("partition blocks are disjoint heads covering the set") {
  std::mt19937_64 rng(4508);
  std::vector<Admg> gs = {make_g1(), make_g2(), make_g3(), make_cycle6(), make_chain5()};
  for (int rep = 0; rep < 40; ++rep) gs.push_back(random_admg(rng, 5, 0.3, 0.3));
  for (const Admg& g : gs) {
    for (VSet s = 0; s <= g.all(); ++s) {
      std::vector<VSet> part = richardson_partition(g, s);
      VSet seen = 0;
      int total = 0;
      for (VSet block : part) {
        CHECK(is_head(g, block));
        seen |= block;
        total += set_size(block);
      }
      CHECK(seen == s);
      CHECK(total == set_size(s));
    }
  }
}

TEST_CASE("factorization over ancestral sets") {
  Admg g2 = make_g2();
  std::vector<HeadTail> fz = head_factorization(g2, g2.all());
  REQUIRE(fz.size() == 2);
  CHECK(fz[0] == HeadTail{named(g2, {"a", "d"}), named(g2, {"b"})});
  CHECK(fz[1] == HeadTail{named(g2, {"b", "c"}), named(g2, {"a"})});

  std::vector<HeadTail> ab = head_factorization(g2, named(g2, {"a", "b"}));
  REQUIRE(ab.size() == 2);
  CHECK(ab[0] == HeadTail{named(g2, {"a"}), 0});
  CHECK(ab[1] == HeadTail{named(g2, {"b"}), 0});

  Admg g1 = make_g1();
  std::vector<HeadTail> f1 = head_factorization(g1, g1.all());
  REQUIRE(f1.size() == 4);
  CHECK(f1[0] == HeadTail{named(g1, {"d"}), named(g1, {"a", "b", "c"})});
  CHECK(f1[1] == HeadTail{named(g1, {"c"}), named(g1, {"b"})});
  CHECK(f1[2] == HeadTail{named(g1, {"b"}), named(g1, {"a"})});
  CHECK(f1[3] == HeadTail{named(g1, {"a"}), 0});

  CHECK_THROWS_AS(head_factorization(g1, named(g1, {"d"})), ValidationError);
}
