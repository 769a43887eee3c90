#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "mci/gauss.hpp"
#include "mci/graph.hpp"
#include "mci/heads.hpp"

namespace mci {

// Pair states for the labeled enumeration: 0 none, 1 i->j, 2 j->i, 3 i<->j,
// over pairs (i,j), i < j, in lexicographic order with the first pair in the
// most significant position.
inline std::vector<std::pair<Vertex, Vertex>> vertex_pairs(int p) {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex i = 0; i < p; ++i)
    for (Vertex j = i + 1; j < p; ++j) out.push_back({i, j});
  return out;
}

inline Admg decode_pair_states(int p, std::uint64_t code) {
  std::vector<std::pair<Vertex, Vertex>> prs = vertex_pairs(p);
  Admg g(p);
  for (std::size_t k = 0; k < prs.size(); ++k) {
    int state = static_cast<int>((code >> (2 * (prs.size() - 1 - k))) & 3u);
    auto [i, j] = prs[k];
    if (state == 1) g.add_directed(i, j);
    if (state == 2) g.add_directed(j, i);
    if (state == 3) g.add_bidirected(i, j);
  }
  return g;
}

inline std::uint64_t encode_pair_states(const Admg& g) {
  std::uint64_t code = 0;
  for (auto [i, j] : vertex_pairs(g.p())) {
    int kinds = (contains(g.ch_[i], j) ? 1 : 0) + (contains(g.pa_[i], j) ? 1 : 0) +
                (contains(g.sib_[i], j) ? 1 : 0);
    if (kinds > 1) throw ValidationError("graph carries two edges on one pair");
    int state = 0;
    if (contains(g.ch_[i], j)) state = 1;
    if (contains(g.pa_[i], j)) state = 2;
    if (contains(g.sib_[i], j)) state = 3;
    code = (code << 2) | static_cast<std::uint64_t>(state);
  }
  return code;
}

inline int max_enumeration_vertices() { return 5; }

// Visits every labeled directed MAG on p vertices in ascending code order.
inline void enumerate_directed_mags(int p, const std::function<void(const Admg&, std::uint64_t)>& visit) {
  if (p < 1 || p > max_enumeration_vertices())
    throw ValidationError("enumeration supports 1 to 5 vertices");
  int pairs = p * (p - 1) / 2;
  std::uint64_t total = std::uint64_t{1} << (2 * pairs);
  for (std::uint64_t code = 0; code < total; ++code) {
    Admg g = decode_pair_states(p, code);
    if (is_directed_mag(g)) visit(g, code);
  }
}

inline std::vector<Admg> enumerate_directed_mags(int p) {
  std::vector<Admg> out;
  enumerate_directed_mags(p, [&](const Admg& g, std::uint64_t) { out.push_back(g); });
  return out;
}

// Markov equivalence of ADMGs on the same vertex set.
inline bool markov_equivalent(const Admg& g1, const Admg& g2) {
  if (g1.p() != g2.p()) throw ValidationError("graphs have different vertex counts");
  return parameterizing_sets(g1).sets == parameterizing_sets(g2).sets;
}

struct MecClass {
  std::vector<VSet> family;  // sorted parameterizing sets, the canonical key
  Admg representative;       // least member under the pair-state encoding
  std::uint64_t representativeCode = 0;
  long members = 0;
};

struct MecCatalog {
  int p = 0;
  std::vector<MecClass> classes;            // ids in order of first appearance
  std::map<std::vector<VSet>, int> index;   // family -> class id

  int class_of(const Admg& g) const {
    if (g.p() != p) throw ValidationError("graph does not match the catalog's vertex count");
    auto it = index.find(parameterizing_sets(g).sets);
    if (it == index.end()) throw ValidationError("graph is not a directed MAG of this catalog");
    return it->second;
  }
};

inline MecCatalog build_mec_catalog(int p) {
  MecCatalog cat;
  cat.p = p;
  enumerate_directed_mags(p, [&](const Admg& g, std::uint64_t code) {
    std::vector<VSet> family = parameterizing_sets(g).sets;
    auto [it, fresh] = cat.index.try_emplace(family, static_cast<int>(cat.classes.size()));
    if (fresh) cat.classes.push_back({std::move(family), g, code, 1});
    else ++cat.classes[it->second].members;
  });
  return cat;
}

struct RankReport {
  std::vector<ScoreResult> perClassScore;  // indexed by class id
  std::vector<int> ranking;                // class ids, best score first
  std::vector<std::vector<int>> ties;      // groups of classes with equal score
  int rankOfTruth = 0;                     // 1-based; 0 when no truth was given

  int rank_of_class(int classId) const {
    for (std::size_t i = 0; i < ranking.size(); ++i)
      if (ranking[i] == classId) return static_cast<int>(i) + 1;
    return 0;
  }
};

// Scores every class representative and sorts descending; ties broken by
// ascending class id and recorded. With threads > 1 the scoring loop is
// split into contiguous chunks; each slot is written by exactly one worker,
// so the result is identical to the serial run.
inline RankReport rank_models(const MecCatalog& catalog, const SampleMoments& moments,
                              int truthClass = -1, int threads = 1) {
  if (moments.s.rows() != catalog.p)
    throw ValidationError("moments do not match the catalog's vertex count");
  RankReport rep;
  const std::size_t total = catalog.classes.size();
  rep.perClassScore.resize(total);
  rep.ranking.resize(total);
  auto scoreRange = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t id = lo; id < hi; ++id) {
      const Admg& g = catalog.classes[id].representative;
      rep.perClassScore[id] = bic_mf(g, consistent_order(g), moments);
      rep.ranking[id] = static_cast<int>(id);
    }
  };
  if (threads < 1) threads = 1;
  threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads),
                                                   std::max<std::size_t>(total, 1)));
  if (threads <= 1) {
    scoreRange(0, total);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    std::size_t chunk = (total + static_cast<std::size_t>(threads) - 1) /
                        static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      std::size_t lo = static_cast<std::size_t>(t) * chunk;
      std::size_t hi = std::min(total, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back([&, lo, hi, t] {
        try {
          scoreRange(lo, hi);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    }
    for (std::thread& w : workers) w.join();
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::stable_sort(rep.ranking.begin(), rep.ranking.end(), [&](int a, int b) {
    double sa = rep.perClassScore[a].score, sb = rep.perClassScore[b].score;
    if (sa != sb) return sa > sb;
    return a < b;
  });
  for (std::size_t i = 0; i < rep.ranking.size();) {
    std::size_t j = i + 1;
    while (j < rep.ranking.size() &&
           rep.perClassScore[rep.ranking[j]].score == rep.perClassScore[rep.ranking[i]].score)
      ++j;
    if (j - i > 1)
      rep.ties.emplace_back(rep.ranking.begin() + static_cast<std::ptrdiff_t>(i),
                            rep.ranking.begin() + static_cast<std::ptrdiff_t>(j));
    i = j;
  }
  if (truthClass >= 0) rep.rankOfTruth = rep.rank_of_class(truthClass);
  return rep;
}

// Generator for recovery runs: a fixed graph, or uniform draws over the
// directed MAGs whose edge count lies in [edgeLo, edgeHi].
struct GeneratorSpec {
  Admg fixed;
  bool useFixed = false;
  int p = 0;
  int edgeLo = 0;
  int edgeHi = 0;

  static GeneratorSpec graph(Admg g) {
    GeneratorSpec s;
    s.p = g.p();
    s.fixed = std::move(g);
    s.useFixed = true;
    return s;
  }

  static GeneratorSpec edge_range(int p, int lo, int hi) {
    if (lo < 0 || hi < lo) throw ValidationError("bad edge range");
    GeneratorSpec s;
    s.p = p;
    s.edgeLo = lo;
    s.edgeHi = hi;
    return s;
  }
};

inline long edge_count(const Admg& g) {
  long directed = 0;
  long bidirected = 0;
  for (Vertex v = 0; v < g.p(); ++v) {
    directed += set_size(g.pa_[v]);
    bidirected += set_size(g.sib_[v]);
  }
  return directed + bidirected / 2;
}

struct ExperimentRow {
  long n = 0;
  std::map<int, long> histogram;  // rank -> count, nonzero bins only
  double top1 = 0.0;
  double meanRank = 0.0;
  double wallSeconds = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  long reps = 0;
  std::uint64_t seed = 0;
};

// For each sample size: draw a generator, simulate, rank, and record the
// rank of the generating class. Per-repetition seeds fan out from the root
// seed through a counter so repetitions are independently reproducible.
inline ExperimentResult recovery_experiment(const GeneratorSpec& spec,
                                            const std::vector<long>& nList, long reps,
                                            std::uint64_t seed, int threads = 1) {
  ExperimentResult out;
  out.reps = reps;
  out.seed = seed;
  if (reps < 0) throw ValidationError("negative repetition count");
  MecCatalog catalog = build_mec_catalog(spec.p);

  std::vector<std::uint64_t> pool;
  if (!spec.useFixed) {
    enumerate_directed_mags(spec.p, [&](const Admg& g, std::uint64_t code) {
      long e = edge_count(g);
      if (e >= spec.edgeLo && e <= spec.edgeHi) pool.push_back(code);
    });
    if (pool.empty()) throw ValidationError("no directed MAG matches the edge range");
  }

  std::uint64_t counter = 0;
  for (long n : nList) {
    ExperimentRow row;
    row.n = n;
    long rankSum = 0;
    auto started = std::chrono::steady_clock::now();
    for (long r = 0; r < reps; ++r) {
      std::uint64_t repSeed = seed + ++counter;
      Admg g = spec.fixed;
      if (!spec.useFixed) {
        std::mt19937_64 pick(repSeed ^ 0x517cc1b727220a95ull);
        std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
        g = decode_pair_states(spec.p, pool[dist(pick)]);
      }
      SimulationResult sim = simulate(g, n, repSeed);
      SampleMoments moments = moments_from_data(sim.data);
      RankReport rep = rank_models(catalog, moments, catalog.class_of(g), threads);
      ++row.histogram[rep.rankOfTruth];
      rankSum += rep.rankOfTruth;
      if (rep.rankOfTruth == 1) row.top1 += 1.0;
    }
    row.wallSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (reps > 0) {
      row.top1 /= static_cast<double>(reps);
      row.meanRank = static_cast<double>(rankSum) / static_cast<double>(reps);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace mci
