#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mci/common.hpp"
#include "mci/vertexset.hpp"

namespace mci {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw NumericalError("imset value overflow");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw NumericalError("imset value overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw NumericalError("imset value overflow");
  return r;
}

// Integer-valued function on the power set of the ground vertices, stored
// densely and indexed by subset bitmask.
struct Imset {
  std::vector<std::string> ground;
  std::vector<std::int64_t> v;

  Imset() = default;

  explicit Imset(std::vector<std::string> g) : ground(std::move(g)) {
    if (static_cast<int>(ground.size()) > kMaxVertices)
      throw ValidationError("imset ground set too large");
    v.assign(std::size_t{1} << ground.size(), 0);
  }

  explicit Imset(int p) : Imset(default_ground(p)) {}

  static std::vector<std::string> default_ground(int p) {
    std::vector<std::string> g;
    g.reserve(p);
    for (int i = 0; i < p; ++i) g.push_back("v" + std::to_string(i));
    return g;
  }

  int p() const { return static_cast<int>(ground.size()); }
  VSet all() const { return full_set(p()); }

  std::int64_t& operator[](VSet s) { return v[s]; }
  std::int64_t operator[](VSet s) const { return v[s]; }

  bool is_zero() const {
    for (std::int64_t x : v)
      if (x != 0) return false;
    return true;
  }

  void check_same_ground(const Imset& o) const {
    if (ground != o.ground) throw ValidationError("imset ground sets differ");
  }

  Imset& operator+=(const Imset& o) {
    check_same_ground(o);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = checked_add(v[i], o.v[i]);
    return *this;
  }

  Imset& operator-=(const Imset& o) {
    check_same_ground(o);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = checked_sub(v[i], o.v[i]);
    return *this;
  }

  Imset& operator*=(std::int64_t k) {
    for (std::int64_t& x : v) x = checked_mul(x, k);
    return *this;
  }

  friend Imset operator+(Imset a, const Imset& b) { return a += b; }
  friend Imset operator-(Imset a, const Imset& b) { return a -= b; }
  friend Imset operator*(std::int64_t k, Imset a) { return a *= k; }

  bool operator==(const Imset&) const = default;
};

// Indicator of one subset.
inline Imset delta(std::vector<std::string> ground, VSet s) {
  Imset u(std::move(ground));
  if (!is_subset(s, u.all())) throw ValidationError("delta subset outside ground set");
  u[s] = 1;
  return u;
}

// Indicator of a family of subsets.
inline Imset delta(std::vector<std::string> ground, const std::vector<VSet>& family) {
  Imset u(std::move(ground));
  for (VSet s : family) {
    if (!is_subset(s, u.all())) throw ValidationError("delta subset outside ground set");
    u[s] = 1;
  }
  return u;
}

// delta_{A|B}: indicator of the interval [A, A union B].
inline Imset delta_interval(std::vector<std::string> ground, VSet a, VSet b) {
  Imset u(std::move(ground));
  if (!is_subset(a | b, u.all())) throw ValidationError("delta subset outside ground set");
  for (VSet t : subsets_of(b & ~a)) u[a | t] = 1;
  return u;
}

// delta_{A,B|C}: indicator of subsets of ABC contained in neither AC nor BC.
inline Imset delta_statement(std::vector<std::string> ground, const Triple& t) {
  t.check_disjoint();
  Imset u(std::move(ground));
  if (!is_subset(t.a | t.b | t.c, u.all()))
    throw ValidationError("delta subset outside ground set");
  for (VSet s : subsets_of(t.a | t.b | t.c))
    if (!is_subset(s, t.a | t.c) && !is_subset(s, t.b | t.c)) u[s] = 1;
  return u;
}

// Semi-elementary imset of <A, B | C>; zero when either side is empty.
inline Imset semi_elementary(std::vector<std::string> ground, const Triple& t) {
  t.check_disjoint();
  Imset u(std::move(ground));
  if (!is_subset(t.a | t.b | t.c, u.all()))
    throw ValidationError("triple outside ground set");
  if (t.a == 0 || t.b == 0) return u;
  u[t.a | t.b | t.c] = checked_add(u[t.a | t.b | t.c], 1);
  u[t.c] = checked_add(u[t.c], 1);
  u[t.a | t.c] = checked_sub(u[t.a | t.c], 1);
  u[t.b | t.c] = checked_sub(u[t.b | t.c], 1);
  return u;
}

// Elementary imset: semi-elementary with singleton sides.
inline Imset elementary(std::vector<std::string> ground, const Triple& t) {
  if (set_size(t.a) != 1 || set_size(t.b) != 1)
    throw ValidationError("elementary imset requires singleton sides");
  return semi_elementary(std::move(ground), t);
}

// In-place subset-sum transforms, O(p 2^p).
inline Imset zeta_down(Imset u) {
  for (int i = 0; i < u.p(); ++i)
    for (VSet s = 0; s < u.v.size(); ++s)
      if (contains(s, i)) u.v[s] = checked_add(u.v[s], u.v[s ^ bit(i)]);
  return u;
}

inline Imset mobius_down(Imset u) {
  for (int i = 0; i < u.p(); ++i)
    for (VSet s = 0; s < u.v.size(); ++s)
      if (contains(s, i)) u.v[s] = checked_sub(u.v[s], u.v[s ^ bit(i)]);
  return u;
}

inline Imset zeta_up(Imset u) {
  for (int i = 0; i < u.p(); ++i)
    for (VSet s = 0; s < u.v.size(); ++s)
      if (!contains(s, i)) u.v[s] = checked_add(u.v[s], u.v[s | bit(i)]);
  return u;
}

inline Imset mobius_up(Imset u) {
  for (int i = 0; i < u.p(); ++i)
    for (VSet s = 0; s < u.v.size(); ++s)
      if (!contains(s, i)) u.v[s] = checked_sub(u.v[s], u.v[s | bit(i)]);
  return u;
}

// Exact non-negative rational, normalized with a positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw NumericalError("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool operator==(const Rational&) const = default;
};

// Non-negative rational combination of semi-elementary imsets; a witness of
// structurality for the imset it evaluates to.
struct SemiElemCombination {
  std::vector<std::pair<Triple, Rational>> terms;
};

// Splits <A, B | C> into |A||B| elementary triples whose imsets sum to the
// semi-elementary imset.
inline std::vector<Triple> expand_semi_elementary(const Triple& t) {
  t.check_disjoint();
  std::vector<Triple> out;
  auto rec = [&](auto&& self, VSet a, VSet b, VSet c) -> void {
    if (a == 0 || b == 0) return;
    if (set_size(a) > 1) {
      Vertex x = min_vertex(a);
      self(self, bit(x), b, c);
      self(self, a & ~bit(x), b, c | bit(x));
      return;
    }
    if (set_size(b) > 1) {
      Vertex y = min_vertex(b);
      self(self, a, bit(y), c);
      self(self, a, b & ~bit(y), c | bit(y));
      return;
    }
    out.push_back({a, b, c});
  };
  rec(rec, t.a, t.b, t.c);
  return out;
}

// Sums the certificate's terms, each expanded into elementary imsets.
// The result must be integer valued.
inline Imset evaluate_certificate(std::vector<std::string> ground, const SemiElemCombination& cert) {
  std::int64_t lcm = 1;
  for (const auto& [t, k] : cert.terms) {
    (void)t;
    if (k.num < 0) throw ValidationError("certificate coefficients must be non-negative");
    lcm = checked_mul(lcm / std::gcd(lcm, k.den), k.den);
  }
  Imset acc(std::move(ground));
  for (const auto& [t, k] : cert.terms) {
    if (k.num == 0) continue;
    std::int64_t w = checked_mul(k.num, lcm / k.den);
    for (const Triple& e : expand_semi_elementary(t))
      acc += w * elementary(acc.ground, e);
  }
  for (std::int64_t& x : acc.v) {
    if (x % lcm != 0) throw NumericalError("certificate does not evaluate to an integer imset");
    x /= lcm;
  }
  return acc;
}

inline bool is_certified_structural(std::vector<std::string> ground, const SemiElemCombination& cert,
                                    const Imset& u) {
  return evaluate_certificate(std::move(ground), cert) == u;
}

// Pairs an imset with per-subset log marginal densities: sum of u(S) times
// logdens(S). Zero for structural imsets whose model holds (Theorem 2).
inline double imset_factor_check(const Imset& u, const std::function<double(VSet)>& logdens) {
  double acc = 0.0;
  for (VSet s = 0; s < u.v.size(); ++s)
    if (u.v[s] != 0) acc += static_cast<double>(u.v[s]) * logdens(s);
  return acc;
}

}  // namespace mci
