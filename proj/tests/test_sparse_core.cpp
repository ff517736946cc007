#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pursuit/greedy.hpp"
#include "pursuit/sparse_core.hpp"
#include "test_util.hpp"

using namespace pursuit;
using pursuit::testing::exact_equal;
using pursuit::testing::make_vector;

TEST_CASE("restrict_to keeps entries in the set") {
  const Vector x = make_vector({3, 0, 4});
  CHECK(exact_equal(restrict_to(x, SupportSet{0}), make_vector({3, 0, 0})));
  CHECK(exact_equal(restrict_to(x, SupportSet{}), make_vector({0, 0, 0})));
  CHECK(exact_equal(restrict_to(x, SupportSet{0, 1, 2}), x));
}

TEST_CASE("restrict_to rejects out-of-range indices") {
  CHECK_THROWS_AS(restrict_to(make_vector({1, 2}), SupportSet{2}),
                  argument_error);
}

TEST_CASE("restrict_to is idempotent") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 20; ++rep) {
    Vector x(10);
    for (int i = 0; i < 10; ++i) x[i] = normal(rng);
    std::vector<int> idx;
    for (int i = 0; i < 10; ++i) {
      if (rng() % 2) idx.push_back(i);
    }
    const SupportSet B(idx);
    const Vector once = restrict_to(x, B);
    CHECK(exact_equal(restrict_to(once, B), once));
  }
}

TEST_CASE("hard_threshold keeps the K largest magnitudes") {
  const auto s = hard_threshold(make_vector({3, -1, 4, 0.5}), 2);
  CHECK(exact_equal(s.values(), make_vector({3, 0, 4, 0})));
  CHECK(s.support() == SupportSet{0, 2});
}

TEST_CASE("hard_threshold with K >= nonzero count is identity") {
  const Vector v = make_vector({3, -1});
  CHECK(exact_equal(hard_threshold(v, 2).values(), v));
}

TEST_CASE("hard_threshold ties go to the lower index") {
  const auto s = hard_threshold(make_vector({1, -1, 1}), 2);
  CHECK(s.support() == SupportSet{0, 1});
}

TEST_CASE("hard_threshold rejects K beyond the length") {
  CHECK_THROWS_AS(hard_threshold(make_vector({1}), 2), argument_error);
}

TEST_CASE("hard_threshold of the full length is exact") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Vector v(9);
  for (int i = 0; i < 9; ++i) v[i] = normal(rng);
  CHECK(exact_equal(hard_threshold(v, 9).values(), v));
}

TEST_CASE("hard_threshold is the best K-sparse approximation") {
  // exhaustive over all size-K restrictions, n <= 12
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 8;
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    for (int K = 0; K <= n; ++K) {
      const double best = (v - hard_threshold(v, K).values()).norm();
      detail::for_each_subset(n, K, [&](const std::vector<int>& idx) {
        const Vector z = restrict_to(v, SupportSet(std::vector<int>(idx)));
        CHECK(best <= (v - z).norm() + 1e-12);
      });
    }
  }
}

TEST_CASE("magnitude_order sorts nonincreasing with stable ties") {
  const auto order = magnitude_order(make_vector({0, 5, 0, -2}));
  CHECK(order.permutation == std::vector<int>{1, 3, 0, 2});
  CHECK(order.sorted_magnitudes == std::vector<double>{5, 2, 0, 0});

  const auto tie = magnitude_order(make_vector({1, 1}));
  CHECK(tie.permutation == std::vector<int>{0, 1});

  CHECK(magnitude_order(Vector(0)).permutation.empty());
}

TEST_CASE("magnitude_order of a zero vector is the identity") {
  const auto order = magnitude_order(Vector::Zero(4));
  CHECK(order.permutation == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("least_squares_on_support solves the restricted system") {
  Matrix A(2, 3);
  A << 1, 0, 1 / std::sqrt(2.0), 0, 1, 1 / std::sqrt(2.0);
  const Vector y = make_vector({3, 4});
  const Vector x = least_squares_on_support(A, y, SupportSet{0, 1});
  CHECK(x.isApprox(make_vector({3, 4, 0}), 1e-12));
}

TEST_CASE("least_squares_on_support fits an overdetermined single column") {
  Matrix A(2, 1);
  A << 1, 1;
  const Vector x =
      least_squares_on_support(A, make_vector({1, 3}), SupportSet{0});
  CHECK(x[0] == Catch::Approx(2.0).margin(1e-14));
}

TEST_CASE("least_squares_on_support with empty support is zero") {
  Matrix A = Matrix::Random(3, 5);
  CHECK(exact_equal(least_squares_on_support(A, Vector::Ones(3), SupportSet{}),
                    Vector::Zero(5)));
}

TEST_CASE("least_squares_on_support flags singular restricted systems") {
  Matrix A(2, 2);
  A << 1, 1, 1, 1;  // duplicate columns
  try {
    least_squares_on_support(A, Vector::Ones(2), SupportSet{0, 1});
    FAIL("expected singular_support_error");
  } catch (const singular_support_error& e) {
    CHECK(e.support() == std::vector<int>{0, 1});
  }
  // min-norm policy tolerates the dependency
  const Vector x = least_squares_on_support(A, Vector::Ones(2),
                                            SupportSet{0, 1},
                                            RankPolicy::min_norm);
  CHECK((A * x - Vector::Ones(2)).norm() < 1e-12);
}

TEST_CASE("least_squares_on_support rejects mismatched dimensions") {
  Matrix A = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(least_squares_on_support(A, Vector::Ones(3), SupportSet{0}),
                  argument_error);
  CHECK_THROWS_AS(least_squares_on_support(A, Vector::Ones(2), SupportSet{5}),
                  argument_error);
}

TEST_CASE("least-squares residual is orthogonal to the support columns") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 25; ++rep) {
    const int m = 12, n = 20, k = 5;
    Matrix A(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = normal(rng);
    }
    Vector y(m);
    for (int i = 0; i < m; ++i) y[i] = normal(rng);
    std::vector<int> idx;
    for (int i = 0; i < n && static_cast<int>(idx.size()) < k; ++i) {
      if (rng() % 3 == 0) idx.push_back(i);
    }
    const SupportSet T(idx);
    const Vector x = least_squares_on_support(A, y, T);
    const Vector r = y - A * x;
    for (int i : T.indices()) {
      CHECK(std::abs(A.col(i).dot(r)) <= 1e-8 * y.norm());
    }
  }
}

TEST_CASE("residual computes y - A x") {
  const Matrix I = Matrix::Identity(2, 2);
  CHECK(exact_equal(residual(I, make_vector({1, 2}), make_vector({1, 2})),
                    make_vector({0, 0})));
  CHECK(exact_equal(residual(I, make_vector({0, 0}), make_vector({1, 2})),
                    make_vector({1, 2})));

  Matrix A(2, 3);
  A << 1, 0, 1, 0, 1, 0;
  CHECK(exact_equal(residual(A, make_vector({1, 1, 1}), make_vector({2, 1})),
                    make_vector({0, 0})));

  CHECK_THROWS_AS(residual(I, make_vector({1}), make_vector({1, 2})),
                  argument_error);
}
