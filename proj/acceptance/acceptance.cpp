// Acceptance gate: eleven end-to-end criteria, one pass/fail line each.
// Run with a criterion number 1..11, or with no argument for all of them.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mci/gauss.hpp"
#include "mci/graph.hpp"
#include "mci/heads.hpp"
#include "mci/imset.hpp"
#include "mci/inex.hpp"
#include "mci/io.hpp"
#include "mci/mec.hpp"
#include "mci/separation.hpp"

namespace {

using namespace mci;

constexpr double kPointwiseTol = 1e-8;     // factorized vs direct log density
constexpr double kDagReductionTol = 1e-8;  // factorized score vs exact DAG BIC
constexpr double kTrendTarget = 1.5;       // half the dimension gap, 14 vs 11
constexpr double kTrendRelTol = 0.20;
constexpr double kChainTop1Large = 0.90;   // n = 50,000
constexpr double kChainTop1Small = 0.35;   // n = 500
constexpr double kRandomTop1 = 0.85;       // n = 50,000, |E| in [0,5]
constexpr double kMaxRankingSeconds = 30.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (detail.empty()) detail = why;
  }
};

Admg graph_g1() {
  Admg g(std::vector<std::string>{"a", "b", "c", "d"});
  g.add_directed(0, 1);
  g.add_directed(1, 2);
  g.add_directed(2, 3);
  g.add_bidirected(1, 3);
  return g;
}

Admg graph_g2() {
  Admg g(std::vector<std::string>{"a", "b", "c", "d"});
  g.add_directed(0, 2);
  g.add_directed(1, 3);
  g.add_bidirected(0, 3);
  g.add_bidirected(1, 2);
  return g;
}

Admg graph_g3() {
  Admg g(std::vector<std::string>{"a", "b", "c", "d", "e"});
  g.add_directed(0, 1);
  g.add_directed(4, 3);
  g.add_bidirected(1, 2);
  g.add_bidirected(2, 3);
  g.declared_order = {4, 0, 3, 1, 2};
  return g;
}

Admg bidirected_cycle(int p) {
  Admg g(p);
  for (int i = 0; i < p; ++i) g.add_bidirected(i, (i + 1) % p);
  return g;
}

Admg bidirected_chain(int p) {
  Admg g(p);
  for (int i = 0; i + 1 < p; ++i) g.add_bidirected(i, i + 1);
  return g;
}

Admg complete_dag(int p) {
  Admg g(p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) g.add_directed(i, j);
  return g;
}

VSet named(const Admg& g, std::initializer_list<const char*> names) {
  VSet s = 0;
  for (const char* n : names) s |= bit(g.index_of(n));
  return s;
}

std::string render_partition(const Admg& g, const std::vector<VSet>& blocks) {
  std::string out = "{";
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) out += ",";
    out += "{";
    bool first = true;
    std::vector<std::string> members;
    for (Vertex v : vertices(blocks[i])) members.push_back(g.names[v]);
    std::sort(members.begin(), members.end());
    for (const std::string& m : members) {
      if (!first) out += ",";
      out += m;
      first = false;
    }
    out += "}";
  }
  return out + "}";
}

// Walks every labeled ADMG on p vertices: each unordered pair takes one of
// six states (none, ->, <-, <->, -> plus <->, <- plus <->); graphs whose
// directed part has a cycle are skipped.
template <typename F>
void for_each_admg(int p, F&& visit) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) pairs.push_back({i, j});
  std::vector<int> state(pairs.size(), 0);
  while (true) {
    Admg g(p);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto [i, j] = pairs[k];
      int s = state[k];
      if (s == 1 || s == 4) g.add_directed(i, j);
      if (s == 2 || s == 5) g.add_directed(j, i);
      if (s >= 3) g.add_bidirected(i, j);
    }
    if (g.directed_acyclic()) visit(g);
    std::size_t k = 0;
    while (k < state.size() && state[k] == 5) state[k++] = 0;
    if (k == state.size()) break;
    ++state[k];
  }
}

// Set-level m-connection: every pair inside s stays connected given the
// rest of s plus any outside conditioning.
bool m_connecting_set(const Admg& g, VSet s) {
  if (set_size(s) < 2) return true;
  for (Vertex a : vertices(s))
    for (Vertex b : vertices(s)) {
      if (b <= a) continue;
      VSet base = s & ~bit(a) & ~bit(b);
      for (VSet add : subsets_of(g.all() & ~s))
        if (m_separated(g, bit(a), bit(b), base | add)) return false;
    }
  return true;
}

SampleMoments point_moments(const Eigen::VectorXd& x) {
  SampleMoments m;
  m.n = 1;
  m.mean = Eigen::VectorXd::Zero(x.size());
  m.s = x * x.transpose();
  return m;
}

double direct_logdens(const Eigen::VectorXd& x, const Eigen::MatrixXd& sigma) {
  constexpr double kLog2Pi = 1.8378770664093454836;
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  Eigen::MatrixXd l = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += 2.0 * std::log(l(i, i));
  return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + logdet + x.dot(llt.solve(x)));
}

Eigen::VectorXd markov_point(const Eigen::MatrixXd& sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  Eigen::VectorXd z(sigma.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = gauss(rng);
  return llt.matrixL() * z;
}

int max_param_size(const Admg& g) {
  int maxM = 0;
  for (VSet s : parameterizing_sets(g).sets) maxM = std::max(maxM, set_size(s));
  return maxM;
}

Admg random_dag(std::mt19937_64& rng, int p, double prob) {
  Admg g(p);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (unif(rng) < prob) g.add_directed(i, j);
  return g;
}

// Criterion 1: ancestral / collider-connecting / barren columns of the
// four-vertex two-district graph, eleven rows.
Outcome criterion1() {
  Outcome out;
  Admg g = graph_g2();
  struct Row {
    std::initializer_list<const char*> s;
    bool ancestral;
    bool connecting;
    std::initializer_list<const char*> barren;
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
    VSet s = named(g, r.s);
    if (g.is_ancestral_set(s) != r.ancestral) out.fail("ancestral column mismatch");
    if (is_collider_connecting(g, s) != r.connecting)
      out.fail("collider-connecting column mismatch");
    if (g.barren(s) != named(g, r.barren)) out.fail("barren column mismatch");
  }
  return out;
}

// Criterion 2: heads/tails tables of the chain and two-district graphs and
// the three pinned head partitions.
Outcome criterion2() {
  Outcome out;
  Admg g1 = graph_g1();
  std::vector<std::pair<VSet, VSet>> table1 = {
      {named(g1, {"a"}), 0},
      {named(g1, {"b"}), named(g1, {"a"})},
      {named(g1, {"c"}), named(g1, {"b"})},
      {named(g1, {"d"}), named(g1, {"a", "b", "c"})},
  };
  std::vector<VSet> hs1 = heads(g1);
  if (hs1.size() != table1.size()) out.fail("head count of the chain graph");
  for (const auto& [h, t] : table1) {
    if (std::find(hs1.begin(), hs1.end(), h) == hs1.end()) out.fail("missing chain head");
    else if (tail(g1, h) != t) out.fail("chain tail mismatch");
  }

  Admg g2 = graph_g2();
  std::vector<std::pair<VSet, VSet>> table2 = {
      {named(g2, {"a"}), 0},
      {named(g2, {"b"}), 0},
      {named(g2, {"c"}), named(g2, {"a"})},
      {named(g2, {"b", "c"}), named(g2, {"a"})},
      {named(g2, {"d"}), named(g2, {"b"})},
      {named(g2, {"a", "d"}), named(g2, {"b"})},
  };
  std::vector<VSet> hs2 = heads(g2);
  if (hs2.size() != table2.size()) out.fail("head count of the two-district graph");
  for (const auto& [h, t] : table2) {
    if (std::find(hs2.begin(), hs2.end(), h) == hs2.end()) out.fail("missing head");
    else if (tail(g2, h) != t) out.fail("tail mismatch");
  }

  if (render_partition(g1, richardson_partition(g1, g1.all())) != "{{d},{c},{b},{a}}")
    out.fail("chain partition");
  if (render_partition(g2, richardson_partition(g2, g2.all())) != "{{a,d},{b,c}}")
    out.fail("two-district partition");
  if (render_partition(g2, richardson_partition(g2, named(g2, {"a", "b"}))) != "{{a},{b}}")
    out.fail("restricted partition");
  return out;
}

// Criterion 3: the five-vertex worked decomposition under the order
// e, a, d, b, c: pairing lists, both certificates term for term, both
// imsets, and the pointwise identity n = i - e.
Outcome criterion3() {
  Outcome out;
  Admg g = graph_g3();
  TotalOrder ord = consistent_order(g);

  PairsResult full = pairs(g, g.index_of("c"));
  if (full.ns != std::vector<VSet>{named(g, {"a", "b", "c", "e"}), named(g, {"a", "c", "d", "e"})} ||
      full.ms != std::vector<VSet>{named(g, {"a", "b", "c"}), named(g, {"c", "d", "e"})})
    out.fail("pairing lists at the last vertex");

  Admg sub1 = g.induced_subgraph(named(g, {"a", "b", "d", "e"}));
  PairsResult p1 = pairs(sub1, sub1.index_of("b"));
  if (p1.ns != std::vector<VSet>{named(sub1, {"a", "b", "d", "e"})} ||
      p1.ms != std::vector<VSet>{named(sub1, {"a", "b"})})
    out.fail("pairing lists after removing the last vertex");

  Admg sub2 = g.induced_subgraph(named(g, {"a", "d", "e"}));
  PairsResult p2 = pairs(sub2, sub2.index_of("d"));
  if (p2.ns != std::vector<VSet>{named(sub2, {"a", "d", "e"})} ||
      p2.ms != std::vector<VSet>{named(sub2, {"d", "e"})})
    out.fail("pairing lists on three vertices");

  Admg sub3 = g.induced_subgraph(named(g, {"a", "e"}));
  PairsResult p3 = pairs(sub3, sub3.index_of("a"));
  if (p3.ns != std::vector<VSet>{named(sub3, {"a", "e"})} ||
      p3.ms != std::vector<VSet>{named(sub3, {"a"})})
    out.fail("pairing lists on two vertices");

  NieResult r = nie(g, ord);
  auto ds = [&](std::initializer_list<const char*> b, std::initializer_list<const char*> o,
                std::initializer_list<const char*> c) {
    return delta_statement(g.names, Triple{named(g, b), named(g, o), named(g, c)});
  };
  Imset inclusion = ds({"c"}, {"e"}, {"a", "b"}) + ds({"c"}, {"a"}, {"d", "e"}) +
                    ds({"c"}, {"a", "e"}, {}) + ds({"b"}, {"d", "e"}, {"a"}) +
                    ds({"d"}, {"a"}, {"e"}) + ds({"a"}, {"e"}, {});
  Imset exclusion = ds({"c"}, {"e"}, {"a"}) + ds({"c"}, {"a"}, {"e"});
  if (!(r.inclusion == inclusion)) out.fail("inclusion imset");
  if (!(r.exclusion == exclusion)) out.fail("exclusion imset");
  if (!(r.inclusion - r.exclusion == n_imset(g))) out.fail("identity n = i - e");

  const std::vector<Triple> expInc = {
      {named(g, {"c"}), named(g, {"e"}), named(g, {"a", "b"})},
      {named(g, {"c"}), named(g, {"a"}), named(g, {"d", "e"})},
      {named(g, {"c"}), named(g, {"a", "e"}), 0},
      {named(g, {"b"}), named(g, {"d", "e"}), named(g, {"a"})},
      {named(g, {"d"}), named(g, {"a"}), named(g, {"e"})},
      {named(g, {"a"}), named(g, {"e"}), 0}};
  const std::vector<Triple> expExc = {{named(g, {"c"}), named(g, {"e"}), named(g, {"a"})},
                                      {named(g, {"c"}), named(g, {"a"}), named(g, {"e"})}};
  if (r.inclusionCert.terms.size() != expInc.size()) out.fail("inclusion certificate length");
  else
    for (std::size_t i = 0; i < expInc.size(); ++i)
      if (!(r.inclusionCert.terms[i].first == expInc[i])) out.fail("inclusion certificate term");
  if (r.exclusionCert.terms.size() != expExc.size()) out.fail("exclusion certificate length");
  else
    for (std::size_t i = 0; i < expExc.size(); ++i)
      if (!(r.exclusionCert.terms[i].first == expExc[i])) out.fail("exclusion certificate term");
  return out;
}

// Criterion 4: size marginals of the bidirected six-cycle constraints.
Outcome criterion4() {
  Outcome out;
  Admg g = bidirected_cycle(6);
  Imset n = n_imset(g);
  std::vector<int> perSize(7, 0);
  for (VSet s = 0; s <= g.all(); ++s) perSize[set_size(s)] += static_cast<int>(n[s]);
  if (perSize != std::vector<int>{0, 0, 9, 14, 9, 0, 0}) out.fail("size marginals");
  return out;
}

// Criterion 5: exhaustive sweep over all labeled ADMGs on up to four
// vertices; checks the family-based imset against the set-level separation
// definition, the decomposition identity under every consistent order, and
// m-separation of every emitted certificate triple.
Outcome criterion5() {
  Outcome out;
  long graphs = 0;
  for (int p = 1; p <= 4 && out.pass; ++p) {
    for_each_admg(p, [&](const Admg& g) {
      if (!out.pass) return;
      ++graphs;
      Imset m = m_imset(g);
      for (VSet s = 0; s <= g.all(); ++s)
        if ((m[s] == 1) != m_connecting_set(g, s)) {
          out.fail("imset disagrees with the separation definition");
          return;
        }
      Imset n = n_imset(g);
      for (const TotalOrder& ord : all_consistent_orders(g)) {
        for (bool slim : {false, true}) {
          NieResult r = slim ? nie_nonredundant(g, ord) : nie(g, ord);
          if (!(r.inclusion - r.exclusion == n)) {
            out.fail("identity n = i - e fails");
            return;
          }
          for (const auto& [t, coeff] : r.inclusionCert.terms) {
            (void)coeff;
            if (!m_separated(g, t)) {
              out.fail("inclusion certificate triple is m-connected");
              return;
            }
          }
          for (const auto& [t, coeff] : r.exclusionCert.terms) {
            (void)coeff;
            if (!m_separated(g, t)) {
              out.fail("exclusion certificate triple is m-connected");
              return;
            }
          }
        }
        for (VSet a : g.ancestral_sets()) {
          for (const auto& [t, coeff] : olmp(g, ord, a).terms) {
            (void)coeff;
            if (!m_separated(g, t)) {
              out.fail("local statement is m-connected");
              return;
            }
          }
        }
      }
    });
  }
  if (out.pass && graphs < 1000) out.fail("sweep visited too few graphs");
  return out;
}

// Criterion 6: zeta and Moebius transforms invert each other and match a
// quadratic reference on 1,000 random imsets.
Outcome criterion6() {
  Outcome out;
  std::mt19937_64 rng(20260817);
  std::uniform_int_distribution<int> value(-50, 50);
  for (int rep = 0; rep < 1000 && out.pass; ++rep) {
    int p = static_cast<int>(rng() % 7);
    Admg g(p);
    Imset u(g.names);
    for (VSet s = 0; s < u.v.size(); ++s) u[s] = value(rng);

    Imset zdSlow(g.names), zuSlow(g.names), mdSlow(g.names), muSlow(g.names);
    for (VSet a = 0; a < u.v.size(); ++a)
      for (VSet b : subsets_of(a)) {
        zdSlow[a] += u[b];
        std::int64_t sign = (set_size(a & ~b) % 2) ? -1 : 1;
        mdSlow[a] += sign * u[b];
      }
    for (VSet a = 0; a < u.v.size(); ++a)
      for (VSet b = 0; b < u.v.size(); ++b)
        if (is_subset(a, b)) {
          zuSlow[a] += u[b];
          std::int64_t sign = (set_size(b & ~a) % 2) ? -1 : 1;
          muSlow[a] += sign * u[b];
        }

    Imset zd = zeta_down(u), md = mobius_down(u), zu = zeta_up(u), mu = mobius_up(u);
    if (!(zd == zdSlow) || !(md == mdSlow) || !(zu == zuSlow) || !(mu == muSlow))
      out.fail("fast transform disagrees with the quadratic reference");
    if (!(mobius_down(zd) == u) || !(zeta_down(md) == u) || !(mobius_up(zu) == u) ||
        !(zeta_up(mu) == u))
      out.fail("transform inverses fail");
  }
  return out;
}

// Criterion 7: the factorized log density equals the direct Gaussian log
// density pointwise, on both evaluation branches.
Outcome criterion7() {
  Outcome out;
  struct Case {
    Admg g;
    std::uint64_t seed;
    bool adjusted;
  };
  std::vector<Case> cases = {{graph_g1(), 991, false},
                             {graph_g2(), 992, false},
                             {graph_g3(), 993, false},
                             {bidirected_cycle(6), 994, true}};
  for (const Case& c : cases) {
    if ((max_param_size(c.g) > 5) != c.adjusted) {
      out.fail("unexpected evaluation branch");
      continue;
    }
    std::mt19937_64 rng(c.seed);
    GaussianModel mod = draw_model(c.g, rng);
    TotalOrder ord = consistent_order(c.g);
    for (int pt = 0; pt < 100; ++pt) {
      Eigen::VectorXd x = markov_point(mod.sigma, rng);
      double lhs = approx_loglik(c.g, ord, mod.sigma, point_moments(x));
      if (std::abs(lhs - direct_logdens(x, mod.sigma)) > kPointwiseTol) {
        out.fail("pointwise log density mismatch");
        break;
      }
    }
  }
  return out;
}

// Criterion 8: on DAGs the factorized score reduces to the exact Gaussian
// DAG BIC, over 200 random graph/dataset pairs.
Outcome criterion8() {
  Outcome out;
  std::mt19937_64 rng(31415);
  std::uniform_int_distribution<int> pDist(2, 5);
  for (int rep = 0; rep < 200 && out.pass; ++rep) {
    int p = pDist(rng);
    Admg d = random_dag(rng, p, 0.5);
    Admg generator = random_dag(rng, p, 0.4);
    SimulationResult sim = simulate(generator, 400, 5000 + static_cast<std::uint64_t>(rep));
    SampleMoments m = moments_from_data(sim.data);
    ScoreResult mf = bic_mf(d, consistent_order(d), m);
    ScoreResult ref = dag_bic(d, m);
    if (mf.dimension != ref.dimension) out.fail("dimension mismatch on a DAG");
    if (std::abs(mf.loglik - ref.loglik) > kDagReductionTol) out.fail("loglik mismatch on a DAG");
    if (std::abs(mf.score - ref.score) > kDagReductionTol) out.fail("score mismatch on a DAG");
  }
  return out;
}

// Criterion 9: Markov equivalence class counts at p = 2, 3 (against an
// independence-model grouping oracle) and p = 5.
Outcome criterion9() {
  Outcome out;
  if (build_mec_catalog(2).classes.size() != 2) out.fail("two-vertex class count");

  std::set<std::vector<char>> models;
  for (const Admg& g : enumerate_directed_mags(3)) {
    std::vector<char> model;
    for (Vertex a = 0; a < 3; ++a)
      for (Vertex b = a + 1; b < 3; ++b)
        for (VSet c : subsets_of(g.all() & ~(bit(a) | bit(b))))
          model.push_back(m_separated(g, Triple{bit(a), bit(b), c}) ? 1 : 0);
    models.insert(model);
  }
  if (build_mec_catalog(3).classes.size() != models.size())
    out.fail("three-vertex count disagrees with the independence oracle");

  if (build_mec_catalog(5).classes.size() != 24259) out.fail("five-vertex class count");
  return out;
}

// Criterion 10: seeded recovery rates for the bidirected five-chain and for
// random directed MAGs, plus the per-ranking time budget.
Outcome criterion10() {
  Outcome out;
  ExperimentResult chain =
      recovery_experiment(GeneratorSpec::graph(bidirected_chain(5)), {500, 50000}, 50, 101);
  for (const ExperimentRow& row : chain.rows) {
    double perRank = row.wallSeconds / 50.0;
    if (perRank > kMaxRankingSeconds) out.fail("chain ranking too slow");
    if (row.n == 500 && row.top1 < kChainTop1Small) out.fail("chain top-1 at n=500");
    if (row.n == 50000 && row.top1 < kChainTop1Large) out.fail("chain top-1 at n=50000");
  }
  ExperimentResult rand =
      recovery_experiment(GeneratorSpec::edge_range(5, 0, 5), {50000}, 50, 202);
  for (const ExperimentRow& row : rand.rows) {
    double perRank = row.wallSeconds / 50.0;
    if (perRank > kMaxRankingSeconds) out.fail("random-graph ranking too slow");
    if (row.top1 < kRandomTop1) out.fail("random-graph top-1 at n=50000");
  }
  return out;
}

// Criterion 11: the score gap between the true four-vertex model and a
// strict supermodel grows like half the dimension gap times log n.
Outcome criterion11() {
  Outcome out;
  Admg truth = bidirected_chain(4);
  Admg super = complete_dag(4);
  long dimTruth = gaussian_dimension(truth);
  long dimSuper = gaussian_dimension(super);
  if (dimTruth != 11 || dimSuper != 14) out.fail("unexpected model dimensions");
  const long n = 100000;
  double sum = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    SimulationResult sim = simulate(truth, n, 3000 + static_cast<std::uint64_t>(rep));
    SampleMoments m = moments_from_data(sim.data);
    double t = bic_mf(truth, consistent_order(truth), m).score;
    double s = bic_mf(super, consistent_order(super), m).score;
    sum += (t - s) / std::log(static_cast<double>(n));
  }
  double mean = sum / 20.0;
  double target = static_cast<double>(dimSuper - dimTruth) / 2.0;
  if (target != kTrendTarget) out.fail("dimension gap is not 3");
  if (std::abs(mean - kTrendTarget) > kTrendRelTol * kTrendTarget) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "trend %.4f outside 20%% of %.1f", mean, kTrendTarget);
    out.fail(buf);
  }
  return out;
}

Outcome run_criterion(int k) {
  switch (k) {
    case 1: return criterion1();
    case 2: return criterion2();
    case 3: return criterion3();
    case 4: return criterion4();
    case 5: return criterion5();
    case 6: return criterion6();
    case 7: return criterion7();
    case 8: return criterion8();
    case 9: return criterion9();
    case 10: return criterion10();
    case 11: return criterion11();
    default: {
      Outcome out;
      out.fail("unknown criterion");
      return out;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> todo;
  if (argc > 1) {
    int k = std::atoi(argv[1]);
    if (k < 1 || k > 11) {
      std::fprintf(stderr, "usage: acceptance [1..11]\n");
      return 1;
    }
    todo.push_back(k);
  } else {
    for (int k = 1; k <= 11; ++k) todo.push_back(k);
  }

  bool allPass = true;
  for (int k : todo) {
    auto started = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run_criterion(k);
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (out.pass) {
      std::printf("criterion %d: PASS (%.2f s)\n", k, secs);
    } else {
      std::printf("criterion %d: FAIL (%s) (%.2f s)\n", k, out.detail.c_str(), secs);
      allPass = false;
    }
    std::fflush(stdout);
  }
  return allPass ? 0 : 1;
}
