#pragma once

#include <bit>
#include <cstdint>

#include "mci/common.hpp"

namespace mci {

// Vertices are small integer indices; vertex sets are bitmasks.
using Vertex = int;
using VSet = std::uint32_t;

constexpr int kMaxVertices = 25;

constexpr VSet bit(Vertex v) { return VSet{1} << v; }
constexpr VSet full_set(int p) { return (VSet{1} << p) - 1; }
constexpr bool contains(VSet s, Vertex v) { return (s >> v) & 1u; }
constexpr bool is_subset(VSet a, VSet b) { return (a & ~b) == 0; }
constexpr int set_size(VSet s) { return std::popcount(s); }

// Both require s != 0.
constexpr Vertex min_vertex(VSet s) { return std::countr_zero(s); }
constexpr Vertex max_vertex(VSet s) { return 31 - std::countl_zero(s); }

// Lexicographic comparison of the ascending vertex sequences, so that
// {a} < {a,b} < {b}.
constexpr bool lex_less(VSet a, VSet b) {
  VSet d = a ^ b;
  if (d == 0) return false;
  Vertex v = min_vertex(d);
  if (contains(a, v)) return (b >> (v + 1)) != 0;
  return (a >> (v + 1)) == 0;
}

class VertexRange {
 public:
  class iterator {
   public:
    explicit constexpr iterator(VSet rest) : rest_(rest) {}
    constexpr Vertex operator*() const { return min_vertex(rest_); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr bool operator!=(const iterator& o) const { return rest_ != o.rest_; }

   private:
    VSet rest_;
  };

  explicit constexpr VertexRange(VSet s) : s_(s) {}
  constexpr iterator begin() const { return iterator(s_); }
  constexpr iterator end() const { return iterator(0); }

 private:
  VSet s_;
};

// for (Vertex v : vertices(s)) iterates members in ascending order.
constexpr VertexRange vertices(VSet s) { return VertexRange(s); }

class SubsetRange {
 public:
  class iterator {
   public:
    constexpr iterator(VSet sub, VSet of, bool done) : sub_(sub), of_(of), done_(done) {}
    constexpr VSet operator*() const { return sub_; }
    constexpr iterator& operator++() {
      sub_ = (sub_ - of_) & of_;
      if (sub_ == 0) done_ = true;
      return *this;
    }
    constexpr bool operator!=(const iterator& o) const {
      return sub_ != o.sub_ || done_ != o.done_;
    }

   private:
    VSet sub_;
    VSet of_;
    bool done_;
  };

  explicit constexpr SubsetRange(VSet of) : of_(of) {}
  constexpr iterator begin() const { return iterator(0, of_, false); }
  constexpr iterator end() const { return iterator(0, of_, true); }

 private:
  VSet of_;
};

// for (VSet t : subsets_of(s)) iterates all 2^|s| subsets in ascending
// numeric order, starting with the empty set and ending with s itself.
constexpr SubsetRange subsets_of(VSet s) { return SubsetRange(s); }

// Disjoint triple <a, b | c>.
struct Triple {
  VSet a = 0;
  VSet b = 0;
  VSet c = 0;

  void check_disjoint() const {
    if ((a & b) || (a & c) || (b & c))
      throw ValidationError("triple sets must be pairwise disjoint");
  }

  // Canonical form swaps the two independent sides into lexicographic order.
  Triple canonical() const {
    if (lex_less(b, a)) return {b, a, c};
    return *this;
  }

  bool operator==(const Triple&) const = default;
};

}  // namespace mci
