#include "dentvis/segment/disjoint_set.hpp"

#include <numeric>

namespace dentvis {

DisjointSet::DisjointSet(std::size_t n)
    : parent_(n), rank_(n, 0), size_(n, 1), internal_(n, 0.0), components_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSet::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

std::size_t DisjointSet::join(std::size_t a, std::size_t b, double internal) {
  a = find(a);
  b = find(b);
  if (a == b) return a;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  size_[a] += size_[b];
  internal_[a] = internal;
  --components_;
  return a;
}

}  // namespace dentvis
