#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "dentvis/core/error.hpp"
#include "dentvis/classic/ecoc.hpp"
#include "dentvis/classic/knn.hpp"
#include "dentvis/classic/svm.hpp"
#include "dentvis/core/parallel.hpp"
#include "dentvis/core/rng.hpp"

using namespace dentvis;

namespace {

std::uint32_t knn_oracle(const MatrixF& x, const std::vector<std::uint32_t>& y, std::span<const float> q,
                         std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < q.size(); ++j) s += (x(i, j) - q[j]) * (x(i, j) - q[j]);
    d.push_back({s, i});
  }
  std::sort(d.begin(), d.end());
  std::map<std::uint32_t, std::pair<int, double>> votes;
  for (std::size_t i = 0; i < k; ++i) {
    auto& v = votes[y[d[i].second]];
    ++v.first;
    v.second += std::sqrt(d[i].first);
  }
  std::uint32_t best = 0;
  int bv = -1;
  double bd = 0;
  for (auto& [label, v] : votes)
    if (v.first > bv || (v.first == bv && v.second < bd)) {
      best = label;
      bv = v.first;
      bd = v.second;
    }
  return best;
}

double dual_objective(const MatrixD& gram, std::span<const int> y, const std::vector<double>& alpha) {
  double lin = 0, quad = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    lin += alpha[i];
    for (std::size_t j = 0; j < alpha.size(); ++j) quad += alpha[i] * alpha[j] * y[i] * y[j] * gram(i, j);
  }
  return lin - 0.5 * quad;
}

}  // namespace

TEST_SUITE("classic") {
  TEST_CASE("k-NN basics") {
    const MatrixF x(4, 1, {0, 1, 5, 6});
    const auto m = knn_fit(x, {0, 0, 1, 1}, 1);
    const float q0[] = {0.4f}, q1[] = {5.0f};
    CHECK(knn_predict(m, q0) == 0);
    CHECK(knn_predict(m, q1) == 1);
    CHECK_THROWS_AS(knn_fit(x, {0, 0, 1, 1}, 5), Error);
    CHECK_THROWS_AS(knn_fit(x, {0, 0, 1, 3}, 1, 2), Error);
    const float bad[] = {1.0f, 2.0f};
    CHECK_THROWS_AS(knn_predict(m, bad), Error);
  }

  TEST_CASE("k-NN vote ties go to the smaller summed distance") {
    // k = 2: one neighbour of each class, class 1 is closer
    const MatrixF x(2, 1, {0.0f, 1.0f});
    const auto m = knn_fit(x, {0, 1}, 2);
    const float q[] = {0.9f};
    CHECK(knn_predict(m, q) == 1);
    // equal distances fall back to the lower class id
    const auto m2 = knn_fit(MatrixF(2, 1, {0.0f, 2.0f}), {1, 0}, 2);
    const float mid[] = {1.0f};
    CHECK(knn_predict(m2, mid) == 0);
  }

  TEST_CASE("k-NN matches an exhaustive oracle") {
    Rng rng(1);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 20 + rng.below(480), d = 1 + rng.below(6), classes = 2 + rng.below(4);
      MatrixF x(n, d);
      std::vector<std::uint32_t> y(n);
      for (auto& v : x.data()) v = static_cast<float>(rng.uniform(-1, 1));
      for (auto& v : y) v = static_cast<std::uint32_t>(rng.below(classes));
      const std::size_t k = 1 + rng.below(7);
      const auto m = knn_fit(x, y, k);
      for (int q = 0; q < 100; ++q) {
        std::vector<float> query(d);
        for (auto& v : query) v = static_cast<float>(rng.uniform(-1, 1));
        REQUIRE(knn_predict(m, query) == knn_oracle(x, y, query, k));
      }
    }
  }

  TEST_CASE("two-point SVM is the analytic max-margin solution") {
    const MatrixF x(2, 1, {-1.0f, 1.0f});
    const int y[] = {-1, 1};
    SvmOptions opt;
    opt.c = 1e6;
    opt.tol = 1e-9;
    const auto r = svm_train(x, y, {KernelKind::Linear}, opt);
    CHECK(r.converged);
    for (float q : {-3.0f, -0.25f, 0.0f, 0.7f, 2.0f})
      CHECK(svm_decision(r.model, std::span<const float>(&q, 1)) == doctest::Approx(q).epsilon(1e-6));
    CHECK(r.model.bias == doctest::Approx(0.0).epsilon(1e-9));
  }

  TEST_CASE("SVM on XOR with a Gaussian kernel") {
    const MatrixF x(4, 2, {0, 0, 1, 1, 0, 1, 1, 0});
    const int y[] = {-1, -1, 1, 1};
    SvmOptions opt;
    opt.c = 10;
    const auto r = svm_train(x, y, {KernelKind::Gaussian, 1.0}, opt);
    for (std::size_t i = 0; i < 4; ++i) CHECK(svm_decision(r.model, x.row(i)) * y[i] > 0);
    // far from every support vector the score decays to the bias
    const float far[] = {40.0f, -40.0f};
    CHECK(std::abs(svm_decision(r.model, far) - r.model.bias) < 1e-3);
  }

  TEST_CASE("SVM solutions satisfy KKT and raise the dual") {
    Rng rng(2);
    for (int trial = 0; trial < 8; ++trial) {
      const std::size_t n = 60;
      MatrixF x(n, 3);
      std::vector<int> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = i % 2 ? 1 : -1;
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = static_cast<float>(rng.normal() + 0.6 * y[i]);
      }
      const KernelSpec kernel = trial % 2 ? KernelSpec{KernelKind::Gaussian, 0.5} : KernelSpec{KernelKind::Linear};
      SvmOptions opt;
      opt.c = 2.0;
      opt.tol = 1e-3;
      opt.record_objective = true;
      const auto r = svm_train(x, y, kernel, opt);
      REQUIRE(r.converged);
      for (std::size_t i = 1; i < r.dual_objective.size(); ++i)
        CHECK(r.dual_objective[i] >= r.dual_objective[i - 1] - 1e-9);
      const auto gram = gram_matrix(x, resolve_kernel(kernel, 3));
      CHECK(r.dual_objective.back() == doctest::Approx(dual_objective(gram, y, r.alpha)).epsilon(1e-9));

      const double tol = opt.tol;
      double sum_ay = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double a = r.alpha[i];
        CHECK(a >= 0.0);
        CHECK(a <= opt.c + 1e-12);
        sum_ay += a * y[i];
        const double yf = y[i] * svm_decision(r.model, x.row(i));
        if (a <= 1e-8) CHECK(yf >= 1 - tol);
        else if (a >= opt.c - 1e-8) CHECK(yf <= 1 + tol);
        else CHECK(std::abs(yf - 1) <= tol);
      }
      CHECK(std::abs(sum_ay) < 1e-9);
      for (double ay : r.model.alpha_y) {
        CHECK(std::abs(ay) > 0.0);
        CHECK(std::abs(ay) <= opt.c + 1e-12);
      }
    }
  }

  TEST_CASE("linear SVM score equals w.x + b") {
    Rng rng(3);
    MatrixF x(40, 4);
    std::vector<int> y(40);
    for (std::size_t i = 0; i < 40; ++i) {
      y[i] = i < 20 ? 1 : -1;
      for (std::size_t j = 0; j < 4; ++j) x(i, j) = static_cast<float>(rng.normal() + y[i]);
    }
    const auto r = svm_train(x, y, {}, {});
    std::vector<double> w(4, 0.0);
    for (std::size_t s = 0; s < r.model.support_x.rows(); ++s)
      for (std::size_t j = 0; j < 4; ++j) w[j] += r.model.alpha_y[s] * r.model.support_x(s, j);
    for (int q = 0; q < 20; ++q) {
      std::vector<float> v(4);
      double lin = r.model.bias;
      for (std::size_t j = 0; j < 4; ++j) {
        v[j] = static_cast<float>(rng.normal());
        lin += w[j] * v[j];
      }
      // the kernel is a float dot product; bound its rounding by sum |a_y| |x_s| |v|
      double scale = 1.0;
      for (std::size_t s = 0; s < r.model.support_x.rows(); ++s) {
        double xs = 0, vv = 0;
        for (std::size_t j = 0; j < 4; ++j) {
          xs += double(r.model.support_x(s, j)) * r.model.support_x(s, j);
          vv += double(v[j]) * v[j];
        }
        scale += std::abs(r.model.alpha_y[s]) * std::sqrt(xs * vv);
      }
      CHECK(std::abs(svm_decision(r.model, v) - lin) <= 1e-6 * scale);
    }
    // unbounded support vectors sit on the margin
    for (std::size_t i = 0; i < 40; ++i)
      if (r.alpha[i] > 1e-8 && r.alpha[i] < r.model.c - 1e-8)
        CHECK(std::abs(std::abs(svm_decision(r.model, x.row(i))) - 1.0) <= 1e-3);
  }

  TEST_CASE("duplicating the training set keeps the decision function") {
    // separable data, so no multiplier reaches the box and the optimum is the
    // hard-margin one for both copies
    Rng rng(4);
    MatrixF x(30, 2), xx(0, 2);
    std::vector<int> y(30), yy;
    for (std::size_t i = 0; i < 30; ++i) {
      y[i] = i % 3 ? 1 : -1;
      for (std::size_t j = 0; j < 2; ++j) x(i, j) = static_cast<float>(0.5 * rng.normal() + 3.0 * y[i]);
    }
    for (int rep = 0; rep < 2; ++rep)
      for (std::size_t i = 0; i < 30; ++i) {
        xx.append_row(x.row(i));
        yy.push_back(y[i]);
      }
    SvmOptions opt;
    opt.tol = 1e-10;
    opt.max_passes = 10000;
    const auto a = svm_train(x, y, {}, opt);
    const auto b = svm_train(xx, yy, {}, opt);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    for (double v : b.alpha) REQUIRE(v < opt.c - 1e-8);
    for (int q = 0; q < 50; ++q) {
      const float v[] = {static_cast<float>(rng.uniform(-4, 4)), static_cast<float>(rng.uniform(-4, 4))};
      CHECK(std::abs(svm_decision(a.model, v) - svm_decision(b.model, v)) <= 1e-6);
    }
  }

  TEST_CASE("SVM errors") {
    const MatrixF x(3, 1, {0, 1, 2});
    const int same[] = {1, 1, 1};
    CHECK_THROWS_AS(svm_train(x, same, {}, {}), Error);
    try {
      svm_train(x, same, {}, {});
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SingleClassInput);
    }
  }

  TEST_CASE("SVM update cap reports non-convergence") {
    Rng rng(5);
    MatrixF x(200, 2);
    std::vector<int> y(200);
    for (std::size_t i = 0; i < 200; ++i) {
      y[i] = rng.below(2) ? 1 : -1;
      for (std::size_t j = 0; j < 2; ++j) x(i, j) = static_cast<float>(rng.normal());
    }
    SvmOptions opt;
    opt.c = 100;
    opt.tol = 1e-12;
    opt.max_passes = 0;
    const auto r = svm_train(x, y, {KernelKind::Gaussian, 5.0}, opt);
    CHECK_FALSE(r.converged);
  }

  TEST_CASE("one-vs-one coding") {
    const auto c = one_vs_one_coding(28);
    CHECK(c.rows() == 28);
    CHECK(c.cols() == 378);
    CHECK_NOTHROW(validate_coding(c));
    const auto c4 = one_vs_one_coding(4);
    // column order (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
    CHECK(c4(0, 0) == 1);
    CHECK(c4(1, 0) == -1);
    CHECK(c4(1, 3) == 1);
    CHECK(c4(3, 5) == -1);
    CHECK(c4(0, 5) == 0);
    CHECK_THROWS_AS(validate_coding(CodingMatrix(2, 1, {1, 1})), Error);
    CHECK_THROWS_AS(validate_coding(CodingMatrix(3, 2, {1, -1, -1, 1, 1, -1})), Error);
  }

  TEST_CASE("hand-decoded four-class example") {
    const auto c = one_vs_one_coding(4);
    const double s[] = {0.5, -2.0, 1.5, -0.3, 0.8, 2.0};
    const auto losses = ecoc_losses(c, s);
    // row k: sum over its three columns of max(0, 1 - m s) / 2, over 3
    CHECK(losses[0] == doctest::Approx((0.25 + 1.5 + 0.0) / 3));
    CHECK(losses[1] == doctest::Approx((0.75 + 0.65 + 0.1) / 3));
    CHECK(losses[2] == doctest::Approx((0.0 + 0.35 + 0.0) / 3));
    CHECK(losses[3] == doctest::Approx((1.25 + 0.9 + 1.5) / 3));
    CHECK(ecoc_decode(c, s) == 2);
  }

  TEST_CASE("two-class decoding is the sign of the score") {
    const auto c = one_vs_one_coding(2);
    for (double s : {-3.0, -0.2, 0.4, 5.0}) CHECK(ecoc_decode(c, std::span<const double>(&s, 1)) == (s > 0 ? 0u : 1u));
    const double zero = 0.0;
    CHECK(ecoc_decode(c, std::span<const double>(&zero, 1)) == 0u);
  }

  TEST_CASE("saturated scores keep their decoding under scaling") {
    const auto c = one_vs_one_coding(4);
    const std::vector<std::vector<double>> fixtures = {
        {1.0, 1.0, 1.0, -1.0, -1.0, 1.0}, {-2.0, 1.0, -1.5, 3.0, 1.0, -1.0}, {1.0, -1.0, -1.0, -1.0, -1.0, 1.0}};
    for (const auto& f : fixtures) {
      const auto base = ecoc_decode(c, f);
      for (double k : {1.0, 2.0, 7.5, 100.0}) {
        std::vector<double> g = f;
        for (double& v : g) v *= k;
        CHECK(ecoc_decode(c, g) == base);
      }
    }
  }

  TEST_CASE("ECOC on three separable blobs") {
    Rng rng(6);
    MatrixF x(0, 2);
    std::vector<std::uint32_t> y;
    const float centers[3][2] = {{0, 0}, {6, 0}, {0, 6}};
    for (std::uint32_t k = 0; k < 3; ++k)
      for (int i = 0; i < 20; ++i) {
        const float p[] = {centers[k][0] + static_cast<float>(rng.normal()), centers[k][1] + static_cast<float>(rng.normal())};
        x.append_row(p);
        y.push_back(k * 10 + 3);  // arbitrary ids
      }
    for (const KernelSpec& ks : {KernelSpec{KernelKind::Linear}, KernelSpec{KernelKind::Gaussian, 0.0}}) {
      const auto m = ecoc_train(x, y, ks, {});
      CHECK(m.learners.size() == 3);
      CHECK(m.classes == std::vector<std::uint32_t>{3, 13, 23});
      for (std::size_t i = 0; i < x.rows(); ++i) CHECK(ecoc_predict(m, x.row(i)) == y[i]);
    }
  }

  TEST_CASE("two-class ECOC equals the binary SVM") {
    Rng rng(7);
    MatrixF x(30, 2);
    std::vector<std::uint32_t> y(30);
    std::vector<int> pm(30);
    for (std::size_t i = 0; i < 30; ++i) {
      y[i] = i % 2;
      pm[i] = y[i] == 0 ? 1 : -1;
      for (std::size_t j = 0; j < 2; ++j) x(i, j) = static_cast<float>(rng.normal() + (y[i] ? 1.0 : -1.0));
    }
    const auto m = ecoc_train(x, y, {}, {});
    const auto svm = svm_train(x, pm, {}, {});
    REQUIRE(m.learners.size() == 1);
    for (int q = 0; q < 40; ++q) {
      const float v[] = {static_cast<float>(rng.uniform(-3, 3)), static_cast<float>(rng.uniform(-3, 3))};
      const double s = svm_decision(svm.model, v);
      if (std::abs(s) > 1e-6) CHECK(ecoc_predict(m, v) == (s > 0 ? 0u : 1u));
    }
  }

  TEST_CASE("ECOC rejects tiny classes") {
    const MatrixF x(3, 1, {0, 1, 2});
    const std::uint32_t y[] = {0, 0, 1};
    try {
      ecoc_train(x, y, {}, {});
      FAIL("expected ClassTooSmall");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ClassTooSmall);
    }
  }

  TEST_CASE("prediction is independent of the thread count") {
    Rng rng(8);
    MatrixF x(40, 3);
    std::vector<std::uint32_t> y(40);
    for (std::size_t i = 0; i < 40; ++i) {
      y[i] = static_cast<std::uint32_t>(i % 4);
      for (std::size_t j = 0; j < 3; ++j) x(i, j) = static_cast<float>(rng.normal() + y[i]);
    }
    set_thread_count(1);
    const auto a = ecoc_train(x, y, {KernelKind::Gaussian, 0.0}, {});
    set_thread_count(4);
    const auto b = ecoc_train(x, y, {KernelKind::Gaussian, 0.0}, {});
    set_thread_count(0);
    for (std::size_t l = 0; l < a.learners.size(); ++l) CHECK(a.learners[l].alpha_y == b.learners[l].alpha_y);
  }
}
