#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "dentvis/core/error.hpp"
#include "dentvis/codebook/codebook.hpp"
#include "dentvis/core/rng.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace dentvis;
using namespace dentvis::testing;

TEST_SUITE("codebook") {
  TEST_CASE("codebook invariants") {
    CHECK_NOTHROW(Codebook(MatrixF(2, 3, {0, 0, 0, 1, 1, 1})));
    CHECK_THROWS_AS(Codebook(MatrixF(1, 3, {0, 0, 0})), Error);
    CHECK_THROWS_AS(Codebook(MatrixF(2, 2, {1, 2, 1, 2})), Error);
    CHECK_THROWS_AS(Codebook(MatrixF(2, 1, {NAN, 1})), Error);
  }

  TEST_CASE("sample_descriptors") {
    std::vector<DescriptorSet> sets(3, DescriptorSet(1));
    float id = 0;
    for (std::size_t s = 0; s < 3; ++s)
      for (int i = 0; i < 10; ++i, ++id) sets[s].add({0.5f, 0.5f}, std::span<const float>(&id, 1));

    const auto all = sample_descriptors(sets, 100, 1);
    REQUIRE(all.rows() == 30);
    std::vector<float> ids(all.data());
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < 30; ++i) CHECK(ids[i] == static_cast<float>(i));

    CHECK(sample_descriptors(sets, 7, 9) == sample_descriptors(sets, 7, 9));
    const auto some = sample_descriptors(sets, 7, 9);
    std::vector<float> picked(some.data());
    std::sort(picked.begin(), picked.end());
    CHECK(std::adjacent_find(picked.begin(), picked.end()) == picked.end());

    CHECK_THROWS_AS(sample_descriptors(std::vector<DescriptorSet>{DescriptorSet(4)}, 3, 0), Error);
  }

  TEST_CASE("sample_descriptors selects rows uniformly") {
    const std::size_t total = 10000, n = 1000, seeds = 500;
    std::vector<DescriptorSet> sets(4, DescriptorSet(1));
    for (std::size_t i = 0; i < total; ++i) {
      const float v = static_cast<float>(i);
      sets[i % 4].add({0.5f, 0.5f}, std::span<const float>(&v, 1));
    }
    std::vector<std::uint32_t> hits(total, 0);
    for (std::uint64_t s = 0; s < seeds; ++s) {
      const auto sample = sample_descriptors(sets, n, s);
      for (float v : sample.data()) ++hits[static_cast<std::size_t>(v)];
    }
    const double p = static_cast<double>(n) / total;
    const double mean = seeds * p, sd = std::sqrt(seeds * p * (1 - p));
    std::size_t outside = 0;
    double worst = 0;
    for (auto h : hits) {
      const double z = std::abs(h - mean) / sd;
      worst = std::max(worst, z);
      if (z > 3) ++outside;
    }
    // a binomial count leaves 3 sigma for about 0.27% of rows
    CHECK(outside <= total / 100);
    CHECK(worst < 5.5);
  }

  TEST_CASE("k-means on exactly m distinct points") {
    Rng rng(2);
    const auto pts = random_matrix(6, 4, rng);
    MatrixF x(0, 4);
    for (int rep = 0; rep < 3; ++rep)
      for (std::size_t i = 0; i < 6; ++i) x.append_row(pts.row(i));
    KMeansConfig cfg{6, 50, 1e-4, 3};
    for (auto* fn : {&kmeans_lloyd, &kmeans_elkan}) {
      const auto r = fn(x, cfg);
      CHECK(r.inertia == doctest::Approx(0.0));
      for (std::size_t i = 0; i < 6; ++i) {
        double best = 1e9;
        for (std::size_t c = 0; c < 6; ++c) best = std::min(best, sqdist(pts.row(i), r.codebook.center(c)));
        CHECK(best < 1e-10);
      }
    }
    cfg.m = 7;
    CHECK_THROWS_AS(kmeans_lloyd(x, cfg), Error);
    CHECK_THROWS_AS(kmeans_elkan(x, cfg), Error);
  }

  TEST_CASE("Lloyd inertia never increases") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      const auto x = blobs(400, 8, 6, 1.5, rng);
      const auto r = kmeans_lloyd(x, {12, 100, 0.0, static_cast<std::uint64_t>(trial)});
      REQUIRE(r.inertia_history.size() >= 2);
      for (std::size_t i = 1; i < r.inertia_history.size(); ++i)
        CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] * (1 + 1e-12));
    }
  }

  TEST_CASE("three separated blobs are recovered") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Rng rng(100 + seed);
      MatrixF mu;
      const auto x = blobs(600, 2, 3, 0.3, rng, &mu);
      // rejection keeps the blob means well apart
      bool separated = true;
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a + 1; b < 3; ++b) separated &= sqdist(mu.row(a), mu.row(b)) > 4.0;
      if (!separated) continue;
      const auto r = kmeans_elkan(x, {3, 100, 1e-6, seed});
      for (std::size_t c = 0; c < 3; ++c) {
        double best = 1e9;
        for (std::size_t k = 0; k < 3; ++k) best = std::min(best, std::sqrt(sqdist(mu.row(k), r.codebook.center(c))));
        CHECK(best < 0.1);
      }
    }
  }

  TEST_CASE("Elkan reproduces Lloyd with fewer distances") {
    Rng rng(4);
    const auto x = blobs(1000, 128, 20, 2.0, rng);
    const KMeansConfig cfg{50, 100, 1e-4, 11};
    const auto lloyd = kmeans_lloyd(x, cfg);
    const auto elkan = kmeans_elkan(x, cfg);
    CHECK(lloyd.assignments == elkan.assignments);
    CHECK(elkan.inertia == doctest::Approx(lloyd.inertia).epsilon(1e-6));
    CHECK(elkan.iterations == lloyd.iterations);
    CHECK(lloyd.distance_evals == 1000u * 50u * lloyd.iterations);
    CHECK(elkan.distance_evals < lloyd.distance_evals);
    for (std::size_t c = 0; c < 50; ++c)
      for (std::size_t d = 0; d < 128; ++d)
        CHECK(std::abs(lloyd.codebook.center(c)[d] - elkan.codebook.center(c)[d]) <= 1e-6);
  }

  TEST_CASE("k-means is deterministic per seed") {
    Rng rng(5);
    const auto x = random_matrix(300, 16, rng);
    const KMeansConfig cfg{10, 30, 1e-4, 77};
    const auto a = kmeans_elkan(x, cfg);
    const auto b = kmeans_elkan(x, cfg);
    CHECK(a.assignments == b.assignments);
    CHECK(a.codebook.centers() == b.codebook.centers());
  }

  TEST_CASE("LLC exact codeword returns the indicator") {
    Rng rng(6);
    const Codebook cb(random_matrix(20, 8, rng));
    for (std::size_t knn : {1u, 5u}) {
      const auto code = llc_encode(cb.center(13), cb, {knn, 1e-4});
      REQUIRE(code.indices.size() == 1);
      CHECK(code.indices[0] == 13);
      CHECK(code.values[0] == 1.0f);
    }
  }

  TEST_CASE("LLC codes sum to one and beat hard assignment") {
    Rng rng(7);
    const Codebook cb(random_matrix(64, 16, rng));
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<float> x(16);
      for (auto& v : x) v = static_cast<float>(rng.uniform(-1.0, 1.0));
      const auto code = llc_encode(x, cb, {5, 1e-4});
      CHECK(code.indices.size() <= 5);
      const double sum = std::accumulate(code.values.begin(), code.values.end(), 0.0);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));

      std::vector<double> recon(16, 0.0);
      for (std::size_t t = 0; t < code.indices.size(); ++t)
        for (std::size_t d = 0; d < 16; ++d) recon[d] += code.values[t] * cb.center(code.indices[t])[d];
      double err = 0, nn = 1e30;
      for (std::size_t d = 0; d < 16; ++d) err += (x[d] - recon[d]) * (x[d] - recon[d]);
      for (std::size_t c = 0; c < cb.m(); ++c) nn = std::min(nn, sqdist(x, cb.center(c)));
      CHECK(std::sqrt(err) <= std::sqrt(nn) + 1e-6);

      // the chosen codewords are the nearest five
      std::vector<double> d(cb.m());
      for (std::size_t c = 0; c < cb.m(); ++c) d[c] = sqdist(x, cb.center(c));
      std::vector<double> sorted = d;
      std::sort(sorted.begin(), sorted.end());
      for (auto idx : code.indices) CHECK(d[idx] <= sorted[4] + 1e-9);
    }
    const std::vector<float> bad(3, 0.0f);
    CHECK_THROWS_AS(llc_encode(bad, cb, {}), Error);
  }

  TEST_CASE("feature_dim") {
    CHECK(feature_dim(1000, {2}) == 21000);
    CHECK(feature_dim(37, {0}) == 37);
    CHECK(feature_dim(200, {3}) == 17000);
    CHECK(feature_dim(500, {2}) == 10500);
    CHECK_THROWS_AS(feature_dim(10, {5}), Error);
  }

  TEST_CASE("pyramid pooling matches a dense oracle") {
    Rng rng(8);
    for (std::size_t levels : {0u, 1u, 2u, 3u}) {
      const std::size_t m = 12;
      const auto codes = random_codes(1 + rng.below(60), m, rng);
      const auto got = pool_pyramid(codes, m, {levels});
      const auto want = pool_oracle(codes, m, levels);
      REQUIRE(got.size() == feature_dim(m, {levels}));
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-5));
    }
  }

  TEST_CASE("pyramid level 0 is the max over the finest cells") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t m = 16;
      const auto codes = random_codes(200, m, rng);
      const auto v = pool_pyramid(codes, m, {2});
      for (std::size_t j = 0; j < m; ++j) {
        float mx = -1e30f;
        for (std::size_t c = 0; c < 16; ++c) mx = std::max(mx, v[(5 + c) * m + j]);
        CHECK(v[j] == mx);
      }
    }
  }

  TEST_CASE("single code fills one cell per level") {
    PositionedCode pc{0.8f, 0.3f, {{2, 5}, {0.25f, 0.75f}}};
    const auto v = pool_pyramid(std::span<const PositionedCode>(&pc, 1), 8, {2});
    const double n = std::sqrt(3 * (0.25 * 0.25 + 0.75 * 0.75));
    CHECK(v[2] == doctest::Approx(0.25 / n));
    CHECK(v[5] == doctest::Approx(0.75 / n));
    // level 1 cell (row 0, col 1) and level 2 cell (row 1, col 3)
    CHECK(v[(1 + 1) * 8 + 5] == doctest::Approx(0.75 / n));
    CHECK(v[(5 + 1 * 4 + 3) * 8 + 2] == doctest::Approx(0.25 / n));
    double sum = 0;
    for (float x : v) sum += std::abs(x);
    CHECK(sum == doctest::Approx(3 * (0.25 + 0.75) / n));
  }

  TEST_CASE("pyramid pooling ignores code order and handles empty input") {
    Rng rng(10);
    auto codes = random_codes(50, 10, rng);
    const auto a = pool_pyramid(codes, 10, {2});
    std::reverse(codes.begin(), codes.end());
    rng.shuffle(std::span<PositionedCode>(codes));
    CHECK(pool_pyramid(codes, 10, {2}) == a);

    const auto empty = pool_pyramid({}, 10, {2});
    CHECK(empty.size() == 210);
    for (float x : empty) CHECK(x == 0.0f);

    PositionedCode bad{1.0f, 0.5f, {{0}, {1.0f}}};
    CHECK_THROWS_AS(pool_pyramid(std::span<const PositionedCode>(&bad, 1), 10, {2}), Error);
  }
}
