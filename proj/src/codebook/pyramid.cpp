#include <cmath>
#include <limits>

#include "dentvis/codebook/codebook.hpp"
#include "dentvis/core/error.hpp"

namespace dentvis {
namespace {

void validate(const PyramidConfig& pyr) {
  require(pyr.levels <= 4, Errc::InvalidArgument, "pyramid levels must lie in [0, 4]");
}

}  // namespace

std::size_t feature_dim(std::size_t m, const PyramidConfig& pyr) {
  validate(pyr);
  std::size_t cells = 0;
  for (std::size_t l = 0; l <= pyr.levels; ++l) cells += std::size_t{1} << (2 * l);
  return m * cells;
}

std::vector<float> pool_pyramid(std::span<const PositionedCode> codes, std::size_t m, const PyramidConfig& pyr) {
  const std::size_t dim = feature_dim(m, pyr);
  const std::size_t n_cells = dim / m;

  // A dense expansion is zero outside its indices, so a cell's pooled value
  // for codeword j is the max over codes referencing j, raised to 0 when at
  // least one code in the cell does not reference j.
  std::vector<float> best(dim, -std::numeric_limits<float>::infinity());
  std::vector<std::uint32_t> refs(dim, 0);
  std::vector<std::uint32_t> cell_count(n_cells, 0);

  for (const auto& pc : codes) {
    require(pc.cx >= 0.0f && pc.cx < 1.0f && pc.cy >= 0.0f && pc.cy < 1.0f, Errc::CenterOutOfRange,
            "code center outside [0,1)^2");
    require(pc.code.indices.size() == pc.code.values.size(), Errc::DimensionMismatch, "sparse code arity");
    std::size_t cell_base = 0;
    for (std::size_t l = 0; l <= pyr.levels; ++l) {
      const std::size_t side = std::size_t{1} << l;
      const auto col = std::min(side - 1, static_cast<std::size_t>(pc.cx * static_cast<float>(side)));
      const auto row = std::min(side - 1, static_cast<std::size_t>(pc.cy * static_cast<float>(side)));
      const std::size_t cell = cell_base + row * side + col;
      ++cell_count[cell];
      for (std::size_t t = 0; t < pc.code.indices.size(); ++t) {
        const std::size_t j = pc.code.indices[t];
        require(j < m, Errc::IndexOutOfRange, "code index exceeds dictionary size");
        const std::size_t slot = cell * m + j;
        best[slot] = std::max(best[slot], pc.code.values[t]);
        ++refs[slot];
      }
      cell_base += side * side;
    }
  }

  std::vector<float> out(dim, 0.0f);
  double norm = 0.0;
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    if (cell_count[cell] == 0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t slot = cell * m + j;
      float v = 0.0f;
      if (refs[slot] > 0) v = refs[slot] < cell_count[cell] ? std::max(best[slot], 0.0f) : best[slot];
      out[slot] = v;
      norm += static_cast<double>(v) * v;
    }
  }
  if (norm > 0.0) {
    const double inv = 1.0 / std::sqrt(norm);
    for (float& v : out) v = static_cast<float>(v * inv);
  }
  return out;
}

}  // namespace dentvis
