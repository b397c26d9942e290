#include <numeric>

#include "dentvis/codebook/codebook.hpp"
#include "dentvis/core/error.hpp"
#include "dentvis/core/rng.hpp"

namespace dentvis {

MatrixF sample_descriptors(std::span<const DescriptorSet> sets, std::size_t n, std::uint64_t seed) {
  std::size_t total = 0;
  std::size_t dim = 0;
  for (const auto& s : sets) {
    if (s.empty()) continue;
    require(dim == 0 || s.dim() == dim, Errc::DimensionMismatch, "descriptor sets differ in dim");
    dim = s.dim();
    total += s.size();
  }
  require(total > 0, Errc::NoDescriptors, "no descriptors to sample");

  // flat index -> (set, row)
  std::vector<std::pair<std::uint32_t, std::uint32_t>> refs;
  refs.reserve(total);
  for (std::size_t si = 0; si < sets.size(); ++si)
    for (std::size_t r = 0; r < sets[si].size(); ++r)
      refs.emplace_back(static_cast<std::uint32_t>(si), static_cast<std::uint32_t>(r));

  const std::size_t take = std::min(n, total);
  Rng rng(seed);
  // partial Fisher-Yates: the first `take` slots become the sample
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
    std::swap(refs[i], refs[j]);
  }
  MatrixF out(take, dim);
  for (std::size_t i = 0; i < take; ++i) {
    const auto src = sets[refs[i].first].vec(refs[i].second);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace dentvis
