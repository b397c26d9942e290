#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dentvis {

/// Union-find with union by rank, path halving, component sizes and the
/// internal difference Int(C) of each component.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n);

  std::size_t find(std::size_t x);
  /// Joins the sets of a and b (roots expected); returns the new root.
  std::size_t join(std::size_t a, std::size_t b, double internal);

  std::size_t size(std::size_t root) const { return size_[root]; }
  double internal(std::size_t root) const { return internal_[root]; }
  std::size_t components() const noexcept { return components_; }
  std::size_t elements() const noexcept { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
  std::vector<std::size_t> size_;
  std::vector<double> internal_;
  std::size_t components_;
};

}  // namespace dentvis
