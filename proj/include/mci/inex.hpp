#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mci/common.hpp"
#include "mci/graph.hpp"
#include "mci/heads.hpp"
#include "mci/imset.hpp"
#include "mci/separation.hpp"
#include "mci/vertexset.hpp"

namespace mci {

struct PairsResult {
  std::vector<VSet> ns;  // constrained sets, in pick order
  std::vector<VSet> ms;  // matching maximal parameterizing sets
};

namespace detail {

// One pairing pass over the constrained sets inside the ancestral set a
// that contain b. Relies on the restriction property of the family table:
// membership below an ancestral set agrees with the full graph.
inline PairsResult pairs_within(const ParamFamily& fam, VSet a, Vertex b) {
  std::vector<VSet> r;
  for (VSet s : subsets_of(a & ~bit(b))) {
    VSet cand = s | bit(b);
    if (!fam.is_param(cand)) r.push_back(cand);
  }
  PairsResult out;
  while (!r.empty()) {
    VSet n = 0;
    bool picked = false;
    for (VSet cand : r) {
      bool maximal = true;
      for (VSet other : r)
        if (other != cand && is_subset(cand, other)) {
          maximal = false;
          break;
        }
      if (maximal && (!picked || cand < n)) {
        n = cand;
        picked = true;
      }
    }
    std::vector<VSet> below;
    for (VSet m : fam.sets)
      if (contains(m, b) && is_subset(m, n)) below.push_back(m);
    std::vector<VSet> tops;
    for (VSet m : below) {
      bool maximal = true;
      for (VSet other : below)
        if (other != m && is_subset(m, other)) {
          maximal = false;
          break;
        }
      if (maximal) tops.push_back(m);
    }
    if (tops.size() != 1)
      throw NumericalError("expected a unique maximal parameterizing set under a pick");
    VSet m = tops[0];
    out.ns.push_back(n);
    out.ms.push_back(m);
    std::vector<VSet> keep;
    for (VSet s : r)
      if (!(is_subset(s, n) && !is_subset(s, m))) keep.push_back(s);
    r = std::move(keep);
  }
  return out;
}

}  // namespace detail

inline PairsResult pairs(const Admg& g, Vertex b) {
  if (b < 0 || b >= g.p() || !contains(g.barren(g.all()), b))
    throw ValidationError("vertex is not barren in the graph");
  return detail::pairs_within(parameterizing_sets(g), g.all(), b);
}

struct NieResult {
  Imset inclusion;
  Imset exclusion;
  SemiElemCombination inclusionCert;
  SemiElemCombination exclusionCert;
};

namespace detail {

struct NieTerm {
  Triple t;
  bool even = false;
};

// Shared stage driver for both NIE variants: enumerates the J/K index
// families over the pairing lists of each vertex, last vertex first.
template <typename Sink>
inline void nie_stages(const Admg& g, const TotalOrder& order, Sink&& sink) {
  if (!order_consistent(g, order))
    throw ValidationError("order is not consistent with the graph");
  ParamFamily fam = parameterizing_sets(g);
  VSet a = g.all();
  for (int step = g.p() - 1; step >= 0; --step) {
    Vertex b = order.seq[step];
    PairsResult pr = pairs_within(fam, a, b);
    const int n = static_cast<int>(pr.ns.size());
    if (n > 20)
      throw ValidationError("graph too large for inclusion-exclusion enumeration");
    sink.begin_stage(b);
    for (VSet j = 1; n > 0 && j < (VSet{1} << n); ++j) {
      VSet nJ = a;
      for (Vertex idx : vertices(j)) nJ &= pr.ns[idx];
      for (VSet k : subsets_of(j)) {
        if (k == 0) continue;
        VSet mK = a;
        for (Vertex idx : vertices(k)) mK &= pr.ms[idx];
        VSet mJK = mK & nJ;
        if (is_subset(nJ, mJK)) continue;  // empty family
        Triple t{bit(b), nJ & ~mJK, mJK & ~bit(b)};
        sink.term(t, set_size(j & ~k) % 2 == 0);
      }
    }
    sink.end_stage();
    a &= ~bit(b);
  }
}

}  // namespace detail

// Non-m-connecting imset by in/exclusion: every index family contributes
// its interval-difference indicator to one of the two sides.
inline NieResult nie(const Admg& g, const TotalOrder& order) {
  NieResult out{Imset(g.names), Imset(g.names), {}, {}};
  struct Sink {
    const Admg& g;
    NieResult& out;
    void begin_stage(Vertex) {}
    void end_stage() {}
    void term(const Triple& t, bool even) {
      Imset d = delta_statement(g.names, t);
      if (even) {
        out.inclusion += d;
        out.inclusionCert.terms.push_back({t, Rational(1)});
      } else {
        out.exclusion += d;
        out.exclusionCert.terms.push_back({t, Rational(1)});
      }
    }
  } sink{g, out};
  detail::nie_stages(g, order, sink);
  return out;
}

// Variant that cancels matching inclusion/exclusion families within each
// stage before committing them.
inline NieResult nie_nonredundant(const Admg& g, const TotalOrder& order) {
  NieResult out{Imset(g.names), Imset(g.names), {}, {}};
  struct Inst {
    Triple t;
    std::pair<VSet, VSet> key;
  };
  struct Sink {
    const Admg& g;
    NieResult& out;
    std::vector<Inst> inc, exc;
    void begin_stage(Vertex) {
      inc.clear();
      exc.clear();
    }
    void term(const Triple& t, bool even) {
      std::pair<VSet, VSet> key{t.a | t.b | t.c, t.a | t.c};
      auto& same = even ? inc : exc;
      auto& other = even ? exc : inc;
      for (std::size_t i = 0; i < other.size(); ++i)
        if (other[i].key == key) {
          other.erase(other.begin() + static_cast<std::ptrdiff_t>(i));
          return;
        }
      same.push_back({t, key});
    }
    void end_stage() {
      for (const Inst& inst : inc) {
        out.inclusion += delta_statement(g.names, inst.t);
        out.inclusionCert.terms.push_back({inst.t, Rational(1)});
      }
      for (const Inst& inst : exc) {
        out.exclusion += delta_statement(g.names, inst.t);
        out.exclusionCert.terms.push_back({inst.t, Rational(1)});
      }
    }
  } sink{g, out, {}, {}};
  detail::nie_stages(g, order, sink);
  return out;
}

namespace detail {

inline void olmp_impl(const Admg& g, const TotalOrder& order, VSet a, SemiElemCombination& out) {
  if (a == 0) return;
  auto push = [&](VSet x, VSet y, VSet z) { out.terms.push_back({Triple{x, y, z}, Rational(1)}); };

  Vertex b = order.max_of(a);
  VSet r = order.pre(b);
  VSet mR = g.co_one(b, r);
  VSet disA = g.dis(bit(b), a);
  VSet l = g.sib(disA, r) & ~disA;  // minimal latent set of a
  VSet n = mR & ~l;
  VSet bset = bit(b) | l;
  VSet c = mR & ~bset;
  VSet d = g.de(l, r) & ~l;
  // The closure of b may reach descendants of the latent set; the margin
  // blocks stay disjoint from them, so condition on c only outside d.
  VSet cm = c & ~d;
  VSet f = r & ~(mR | d);
  VSet disRb = g.dis(bit(b), r);

  Vertex ri = order.min_of(bset);
  while (true) {
    VSet rI = order.pre(ri);
    VSet bI = rI & bset;
    VSet cI = rI & c;
    VSet cmI = rI & cm;
    VSet fI = rI & f;
    if (contains(disRb, ri)) {
      VSet mI = g.co_one(ri, rI);
      push(bit(ri), rI & ~mI, mI & ~bit(ri));
      push(bit(ri), fI, (bI | cI) & ~bit(ri));
    } else if (contains(cm | f, ri)) {
      VSet aPrime = rI & ~d;
      // Stripping the latent descendants can break ancestrality; the
      // margin statements below are only valid when it survives.
      if (is_subset(g.pa(aPrime, g.all()), aPrime)) {
        olmp_impl(g, order, aPrime, out);
        push(bI, bit(ri), (cmI | fI) & ~bit(ri));
        if (contains(cm, ri)) push(bI, bit(ri) | fI, cmI & ~bit(ri));
      }
    }
    if (ri == b) break;
    ri = order.min_of(r & ~rI);
  }

  VSet m = g.co_one(b, a);
  push(bit(b), a & ~n, (n & a) & ~bit(b));
  push(bit(b), (n & a) & ~m, m & ~bit(b));
  push(bit(b), a & ~m, m & ~bit(b));
}

}  // namespace detail

// Ordered-local-Markov certificate for an ancestral set: a list of
// unit-coefficient semi-elementary triples covering the local statement.
inline SemiElemCombination olmp(const Admg& g, const TotalOrder& order, VSet a) {
  if (!order_consistent(g, order))
    throw ValidationError("order is not consistent with the graph");
  if (!g.is_ancestral_set(a)) throw ValidationError("set is not ancestral");
  SemiElemCombination out;
  detail::olmp_impl(g, order, a, out);
  return out;
}

// Bounded semigraphoid closure over canonicalized triples. Decomposition
// and weak union step one vertex at a time; contraction joins pairs.
inline std::vector<Triple> semigraphoid_closure(const std::vector<Triple>& base, int maxDepth,
                                                std::size_t maxSize = 20000) {
  auto canon = [](const Triple& t) { return t.canonical(); };
  auto as_key = [](const Triple& t) { return std::tuple<VSet, VSet, VSet>{t.a, t.b, t.c}; };
  std::set<std::tuple<VSet, VSet, VSet>> seen;
  std::vector<Triple> known;
  auto add = [&](const Triple& t) {
    if (t.a == 0 || t.b == 0) return false;  // trivial statements are implicit
    Triple ct = t.canonical();
    if (!seen.insert(as_key(ct)).second) return false;
    known.push_back(ct);
    return true;
  };
  for (const Triple& t : base) add(canon(t));

  for (int depth = 0; depth < maxDepth && known.size() < maxSize; ++depth) {
    std::vector<Triple> fresh;
    auto emit = [&](Triple t) {
      if (add(t)) fresh.push_back(known.back());
    };
    std::size_t count = known.size();
    for (std::size_t i = 0; i < count; ++i) {
      Triple t = known[i];
      for (int side = 0; side < 2; ++side) {
        VSet x = side == 0 ? t.a : t.b;
        VSet y = side == 0 ? t.b : t.a;
        if (set_size(y) < 2) continue;
        for (Vertex v : vertices(y)) {
          emit(Triple{x, y & ~bit(v), t.c});           // decomposition
          emit(Triple{x, y & ~bit(v), t.c | bit(v)});  // weak union
        }
      }
    }
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j) {
        const Triple& t1 = known[i];
        const Triple& t2 = known[j];
        for (int s1 = 0; s1 < 2; ++s1)
          for (int s2 = 0; s2 < 2; ++s2) {
            VSet x1 = s1 == 0 ? t1.a : t1.b, y1 = s1 == 0 ? t1.b : t1.a;
            VSet x2 = s2 == 0 ? t2.a : t2.b, y2 = s2 == 0 ? t2.b : t2.a;
            // t1 = <X, Y | C u D>, t2 = <X, D | C>  =>  <X, Y u D | C>
            if (x1 != x2) continue;
            if (t2.c != (t1.c & ~y2)) continue;
            if (!is_subset(y2, t1.c)) continue;
            if ((y1 & y2) != 0) continue;
            emit(Triple{x1, y1 | y2, t2.c});
          }
      }
    if (fresh.empty()) break;
  }
  return known;
}

inline bool closure_contains(const std::vector<Triple>& base, const Triple& target,
                             int maxDepth = 3) {
  if (target.a == 0 || target.b == 0) return true;
  Triple ct = target.canonical();
  for (const Triple& t : semigraphoid_closure(base, maxDepth))
    if (t == ct) return true;
  return false;
}

struct VerificationReport {
  bool identity = false;      // n = i - e for both variants
  bool certificates = false;  // certificates evaluate to the Moebius transforms
  bool separations = false;   // every certificate triple is m-separated
  bool olmpCovered = false;   // local statements reachable from the olmp output
  std::vector<std::string> failures;

  bool ok() const { return identity && certificates && separations && olmpCovered; }
};

namespace detail {

inline std::string render_set(const Admg& g, VSet s) {
  std::string out = "{";
  bool first = true;
  for (Vertex v : vertices(s)) {
    if (!first) out += ",";
    out += g.names[v];
    first = false;
  }
  return out + "}";
}

inline std::string render_triple(const Admg& g, const Triple& t) {
  return "<" + render_set(g, t.a) + ", " + render_set(g, t.b) + " | " + render_set(g, t.c) + ">";
}

}  // namespace detail

// Checks the full decomposition story for one graph and one order: the
// identity, the certificates, their separations, and coverage of the
// ordered local Markov statements.
inline VerificationReport verify_decomposition(const Admg& g, const TotalOrder& order) {
  VerificationReport rep;
  Imset n = n_imset(g);
  NieResult plain = nie(g, order);
  NieResult slim = nie_nonredundant(g, order);

  rep.identity = true;
  if (plain.inclusion - plain.exclusion != n) {
    rep.identity = false;
    rep.failures.push_back("identity n = i - e fails for the plain decomposition");
  }
  if (slim.inclusion - slim.exclusion != n) {
    rep.identity = false;
    rep.failures.push_back("identity n = i - e fails for the non-redundant decomposition");
  }

  rep.certificates = true;
  auto check_cert = [&](const SemiElemCombination& cert, const Imset& u, const char* label) {
    if (evaluate_certificate(g.names, cert) != mobius_up(u)) {
      rep.certificates = false;
      rep.failures.push_back(std::string("certificate does not evaluate to mobius(") + label +
                             ")");
    }
  };
  check_cert(plain.inclusionCert, plain.inclusion, "inclusion");
  check_cert(plain.exclusionCert, plain.exclusion, "exclusion");
  check_cert(slim.inclusionCert, slim.inclusion, "nonredundant inclusion");
  check_cert(slim.exclusionCert, slim.exclusion, "nonredundant exclusion");

  rep.separations = true;
  auto check_triples = [&](const SemiElemCombination& cert, const std::string& label) {
    for (const auto& [t, coeff] : cert.terms) {
      (void)coeff;
      if (!m_separated(g, t)) {
        rep.separations = false;
        rep.failures.push_back(label + " emits non-separated " + detail::render_triple(g, t));
      }
    }
  };
  check_triples(plain.inclusionCert, "nie inclusion");
  check_triples(plain.exclusionCert, "nie exclusion");
  check_triples(slim.inclusionCert, "nonredundant inclusion");
  check_triples(slim.exclusionCert, "nonredundant exclusion");

  rep.olmpCovered = true;
  for (VSet a : g.ancestral_sets(g.all())) {
    if (a == 0) continue;
    SemiElemCombination cert = olmp(g, order, a);
    check_triples(cert, "olmp " + detail::render_set(g, a));
    Vertex b = order.max_of(a);
    VSet m = g.co_one(b, a);
    Triple target{bit(b), a & ~m, m & ~bit(b)};
    std::vector<Triple> emitted;
    for (const auto& [t, coeff] : cert.terms) {
      (void)coeff;
      emitted.push_back(t);
    }
    if (!closure_contains(emitted, target)) {
      rep.olmpCovered = false;
      rep.failures.push_back("local statement " + detail::render_triple(g, target) +
                             " not represented for " + detail::render_set(g, a));
    }
  }
  return rep;
}

}  // namespace mci
