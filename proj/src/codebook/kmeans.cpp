#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dentvis/codebook/codebook.hpp"
#include "dentvis/core/error.hpp"
#include "dentvis/core/rng.hpp"
#include "dentvis/simd/kernels.hpp"

namespace dentvis {

Codebook::Codebook(MatrixF centers) : centers_(std::move(centers)) {
  require(centers_.rows() >= 2, Errc::InvalidArgument, "codebook needs at least 2 centers");
  for (float v : centers_.data()) require(std::isfinite(v), Errc::NumericFailure, "codebook center is not finite");
  std::vector<std::size_t> order(centers_.rows());
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](std::size_t a, std::size_t b) {
    const auto ra = centers_.row(a);
    const auto rb = centers_.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), row_less);
  for (std::size_t i = 1; i < order.size(); ++i)
    require(row_less(order[i - 1], order[i]), Errc::DegenerateData, "codebook has identical centers");
}

namespace {

using Assign = std::vector<std::uint32_t>;

std::size_t count_distinct_rows(const MatrixD& x, std::size_t stop_at) {
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](std::size_t a, std::size_t b) {
    const auto ra = x.row(a);
    const auto rb = x.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), row_less);
  std::size_t distinct = order.empty() ? 0 : 1;
  for (std::size_t i = 1; i < order.size() && distinct < stop_at; ++i)
    if (row_less(order[i - 1], order[i])) ++distinct;
  return distinct;
}

MatrixD to_double(const MatrixF& x) {
  MatrixD out(x.rows(), x.cols());
  std::copy(x.data().begin(), x.data().end(), out.data().begin());
  return out;
}

MatrixD prepare(const MatrixF& x, const KMeansConfig& cfg) {
  require(cfg.m >= 2, Errc::InvalidArgument, "k-means needs m >= 2");
  require(cfg.max_iter >= 1, Errc::InvalidArgument, "k-means needs max_iter >= 1");
  require(cfg.tol >= 0.0, Errc::InvalidArgument, "k-means tol must be non-negative");
  require(x.rows() >= cfg.m, Errc::DegenerateData, "fewer samples than clusters");
  MatrixD xd = to_double(x);
  for (double v : xd.data()) require(std::isfinite(v), Errc::NumericFailure, "k-means input is not finite");
  require(count_distinct_rows(xd, cfg.m) >= cfg.m, Errc::DegenerateData,
          "fewer than " + std::to_string(cfg.m) + " distinct samples");
  return xd;
}

// k-means++: first center uniform, then proportional to squared distance to
// the nearest chosen center.
MatrixD kmeanspp(const MatrixD& x, std::size_t m, std::uint64_t seed) {
  const std::size_t n = x.rows();
  Rng rng(seed);
  MatrixD centers(m, x.cols());
  std::size_t pick = static_cast<std::size_t>(rng.below(n));
  std::copy(x.row(pick).begin(), x.row(pick).end(), centers.row(0).begin());
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = simd::sqdist(x.row(i), centers.row(0));
  for (std::size_t c = 1; c < m; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    require(total > 0.0, Errc::DegenerateData, "k-means++ ran out of distinct samples");
    const double r = rng.uniform() * total;
    double run = 0.0;
    pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] <= 0.0) continue;
      run += d2[i];
      pick = i;
      if (run > r) break;
    }
    std::copy(x.row(pick).begin(), x.row(pick).end(), centers.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], simd::sqdist(x.row(i), centers.row(c)));
  }
  return centers;
}

// Means of the assigned points; empty clusters move to the points farthest
// from their current center (largest sqd, ties to the lower index).
MatrixD update_centers(const MatrixD& x, const Assign& assign, const std::vector<double>& sqd, std::size_t m) {
  const std::size_t d = x.cols();
  MatrixD sums(m, d, 0.0);
  std::vector<std::size_t> counts(m, 0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto dst = sums.row(assign[i]);
    const auto src = x.row(i);
    for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
    ++counts[assign[i]];
  }
  std::vector<std::size_t> far_order;
  std::size_t far_next = 0;
  for (std::size_t c = 0; c < m; ++c) {
    auto row = sums.row(c);
    if (counts[c] > 0) {
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (double& v : row) v *= inv;
      continue;
    }
    if (far_order.empty()) {
      far_order.resize(x.rows());
      std::iota(far_order.begin(), far_order.end(), 0);
      std::stable_sort(far_order.begin(), far_order.end(),
                       [&](std::size_t a, std::size_t b) { return sqd[a] > sqd[b]; });
    }
    require(far_next < far_order.size(), Errc::DegenerateData, "no point left to reseed an empty cluster");
    const auto src = x.row(far_order[far_next++]);
    std::copy(src.begin(), src.end(), row.begin());
  }
  return sums;
}

MatrixF to_float(const MatrixD& x) {
  MatrixF out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.data().size(); ++i) out.data()[i] = static_cast<float>(x.data()[i]);
  return out;
}

bool converged(const std::vector<double>& history, double tol) {
  if (history.size() < 2) return history.back() == 0.0;
  const double prev = history[history.size() - 2];
  const double cur = history.back();
  return prev - cur <= tol * prev;
}

KMeansResult finish(MatrixD centers, Assign assign, std::vector<double> history, std::uint64_t evals) {
  KMeansResult r;
  r.codebook = Codebook(to_float(centers));
  r.assignments = std::move(assign);
  r.inertia = history.back();
  r.iterations = history.size();
  r.inertia_history = std::move(history);
  r.distance_evals = evals;
  return r;
}

// Bound comparisons carry a small relative slack so that rounding in the
// triangle-inequality updates can only make pruning more conservative.
constexpr double kSlackRel = 1e-9;
constexpr double kSlackAbs = 1e-12;

inline bool clearly_ge(double a, double b) { return a >= b * (1.0 + kSlackRel) + kSlackAbs; }

}  // namespace

KMeansResult kmeans_lloyd(const MatrixF& xf, const KMeansConfig& cfg) {
  const MatrixD x = prepare(xf, cfg);
  const std::size_t n = x.rows();
  const std::size_t m = cfg.m;
  MatrixD centers = kmeanspp(x, m, cfg.seed);
  Assign assign(n, 0);
  std::vector<double> sqd(n);
  std::vector<double> history;
  std::uint64_t evals = 0;

  for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = x.row(i);
      std::uint32_t best = 0;
      double best_d = simd::sqdist(xi, centers.row(0));
      for (std::size_t c = 1; c < m; ++c) {
        const double d = simd::sqdist(xi, centers.row(c));
        if (d < best_d) {
          best_d = d;
          best = static_cast<std::uint32_t>(c);
        }
      }
      assign[i] = best;
      sqd[i] = best_d;
      inertia += best_d;
    }
    evals += static_cast<std::uint64_t>(n) * m;
    history.push_back(inertia);
    if (converged(history, cfg.tol) || iter + 1 == cfg.max_iter) break;
    centers = update_centers(x, assign, sqd, m);
  }
  return finish(std::move(centers), std::move(assign), std::move(history), evals);
}

KMeansResult kmeans_elkan(const MatrixF& xf, const KMeansConfig& cfg) {
  const MatrixD x = prepare(xf, cfg);
  const std::size_t n = x.rows();
  const std::size_t m = cfg.m;
  MatrixD centers = kmeanspp(x, m, cfg.seed);

  Assign assign(n, 0);
  std::vector<double> upper(n);            // >= d(x_i, c_a(i))
  std::vector<double> lower(n * m, 0.0);   // <= d(x_i, c)
  std::vector<double> sqd(n);              // exact squared distance to assigned center
  std::vector<char> exact(n, 0);           // sqd[i] computed against current centers
  std::vector<double> cc(m * m);           // center-center distances
  std::vector<double> half_sep(m);         // 0.5 * min_{c' != c} d(c, c')
  std::vector<double> history;
  std::uint64_t evals = 0;

  auto dist_sq = [&](std::size_t i, std::size_t c) {
    ++evals;
    return simd::sqdist(x.row(i), centers.row(c));
  };
  auto refresh_center_geometry = [&] {
    for (std::size_t a = 0; a < m; ++a) {
      cc[a * m + a] = 0.0;
      for (std::size_t b = a + 1; b < m; ++b) cc[a * m + b] = cc[b * m + a] = std::sqrt(simd::sqdist(centers.row(a), centers.row(b)));
    }
    for (std::size_t a = 0; a < m; ++a) {
      double s = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < m; ++b)
        if (b != a) s = std::min(s, cc[a * m + b]);
      half_sep[a] = 0.5 * s;
    }
  };

  // Initial pass: prune with d(c_best, c) >= 2 d(x, c_best).
  refresh_center_geometry();
  for (std::size_t i = 0; i < n; ++i) {
    double* li = lower.data() + i * m;
    std::size_t best = 0;
    double best_sq = dist_sq(i, 0);
    double best_d = std::sqrt(best_sq);
    li[0] = best_d;
    for (std::size_t c = 1; c < m; ++c) {
      if (clearly_ge(0.5 * cc[best * m + c], best_d)) continue;
      const double dsq = dist_sq(i, c);
      const double d = std::sqrt(dsq);
      li[c] = d;
      if (dsq < best_sq) {
        best_sq = dsq;
        best_d = d;
        best = c;
      }
    }
    assign[i] = static_cast<std::uint32_t>(best);
    upper[i] = best_d;
    sqd[i] = best_sq;
    exact[i] = 1;
  }

  for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
    if (iter > 0) {
      refresh_center_geometry();
      std::fill(exact.begin(), exact.end(), 0);
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t a = assign[i];
        if (clearly_ge(half_sep[a], upper[i])) continue;  // u <= s(a): nothing can beat a
        double* li = lower.data() + i * m;
        for (std::size_t c = 0; c < m; ++c) {
          if (c == a) continue;
          if (clearly_ge(li[c], upper[i]) || clearly_ge(0.5 * cc[a * m + c], upper[i])) continue;
          if (!exact[i]) {
            sqd[i] = dist_sq(i, a);
            upper[i] = std::sqrt(sqd[i]);
            li[a] = upper[i];
            exact[i] = 1;
            if (clearly_ge(li[c], upper[i]) || clearly_ge(0.5 * cc[a * m + c], upper[i])) continue;
          }
          const double dsq = dist_sq(i, c);
          li[c] = std::sqrt(dsq);
          if (dsq < sqd[i] || (dsq == sqd[i] && c < a)) {
            a = c;
            sqd[i] = dsq;
            upper[i] = li[c];
          }
        }
        assign[i] = static_cast<std::uint32_t>(a);
      }
    }

    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!exact[i]) {
        sqd[i] = dist_sq(i, assign[i]);
        upper[i] = std::sqrt(sqd[i]);
        exact[i] = 1;
      }
      inertia += sqd[i];
    }
    history.push_back(inertia);
    if (converged(history, cfg.tol) || iter + 1 == cfg.max_iter) break;

    MatrixD next = update_centers(x, assign, sqd, m);
    std::vector<double> drift(m);
    for (std::size_t c = 0; c < m; ++c) drift[c] = std::sqrt(simd::sqdist(centers.row(c), next.row(c)));
    centers = std::move(next);
    for (std::size_t i = 0; i < n; ++i) {
      double* li = lower.data() + i * m;
      for (std::size_t c = 0; c < m; ++c) li[c] = std::max(0.0, li[c] - drift[c]);
      upper[i] += drift[assign[i]];
    }
  }
  return finish(std::move(centers), std::move(assign), std::move(history), evals);
}

}  // namespace dentvis
